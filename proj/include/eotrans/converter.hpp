#pragma once

// Steady-state transduction chain: intracavity pump photons, cooperativity,
// conversion efficiency (on resonance and detuned), bandwidth, and the
// coupling / pump-power sweeps.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "core_model.hpp"
#include "numeric.hpp"

namespace eotrans {

class UndefinedBandwidth : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ConversionResult {
    double pump_photons = 0.0;
    double cooperativity = 0.0;
    double internal_efficiency = 0.0;
    double total_efficiency = 0.0;
};

/// Photon flux of the pump drive, P / (hbar w_p), in 1/s.
inline double pump_photon_flux(const OperatingPoint& op)
{
    return op.pump().power / (PhysicalConstants::reduced_planck * op.optical_pump().frequency());
}

/// Intracavity pump amplitude alpha = sqrt(g_c) A_in / (i delta_p - g/2), with
/// A_in taken real and positive.
inline std::complex<double> pump_amplitude(const OperatingPoint& op)
{
    const auto& mode = op.pump_loss_mode();
    const double a_in = std::sqrt(pump_photon_flux(op));
    const std::complex<double> denom{-0.5 * mode.total_rate(), op.pump().detuning};
    return std::sqrt(mode.coupling_rate()) * a_in / denom;
}

/// n_p = |alpha|^2 = g_c (P / hbar w_p) / (delta_p^2 + (g/2)^2).
inline double pump_photon_number(const OperatingPoint& op)
{
    const auto& mode = op.pump_loss_mode();
    const double half = 0.5 * mode.total_rate();
    const double delta = op.pump().detuning;
    return mode.coupling_rate() * pump_photon_flux(op) / (delta * delta + half * half);
}

/// Squared pump-enhanced coupling G^2 = n_p g_eo^2.
inline double enhanced_coupling_sq(const OperatingPoint& op)
{
    return pump_photon_number(op) * op.g_eo() * op.g_eo();
}

/// C = 4 n_p g_eo^2 / (gamma_a gamma_b).
inline double cooperativity(const OperatingPoint& op)
{
    const double ga = op.optical_signal().total_rate();
    const double gb = op.microwave().total_rate();
    return 4.0 * enhanced_coupling_sq(op) / (ga * gb);
}

inline double internal_efficiency(double c) { return 4.0 * c / ((1.0 + c) * (1.0 + c)); }

inline ConversionResult efficiency(const OperatingPoint& op)
{
    ConversionResult r;
    r.pump_photons = pump_photon_number(op);
    r.cooperativity = cooperativity(op);
    r.internal_efficiency = internal_efficiency(r.cooperativity);
    r.total_efficiency =
        op.optical_signal().extraction_ratio() * op.microwave().extraction_ratio() * r.internal_efficiency;
    return r;
}

/// Efficiency for both inputs detuned by delta from their modes:
///   eta(delta) = g_ac g_bc G^2 / |(-i delta + g_a/2)(-i delta + g_b/2) + G^2|^2.
/// The derivation is in docs/derivations.md.
inline double efficiency_detuned(const OperatingPoint& op, double delta)
{
    const auto& a = op.optical_signal();
    const auto& b = op.microwave();
    const double g2 = enhanced_coupling_sq(op);
    const std::complex<double> za{0.5 * a.total_rate(), -delta};
    const std::complex<double> zb{0.5 * b.total_rate(), -delta};
    const std::complex<double> d = za * zb + g2;
    return a.coupling_rate() * b.coupling_rate() * g2 / std::norm(d);
}

namespace detail {

// Outermost point where eta(delta) crosses `level`, searching along `sign`.
inline double half_max_crossing(const OperatingPoint& op, double level, double sign)
{
    const double scale = std::min(op.optical_signal().total_rate(), op.microwave().total_rate());
    double inner = 0.0;
    double outer = 1e-3 * scale;
    int guard = 0;
    while (efficiency_detuned(op, sign * outer) >= level) {
        inner = outer;
        outer *= 2.0;
        if (++guard > 200) throw UndefinedBandwidth("bandwidth: no half-maximum crossing found");
    }
    auto f = [&](double x) { return efficiency_detuned(op, sign * x) - level; };
    return numeric::bisect(f, inner, outer, 1e-12);
}

} // namespace detail

struct BandwidthResult {
    double lower = 0.0; // negative detuning of the half-maximum point, rad/s
    double upper = 0.0; // positive detuning of the half-maximum point, rad/s
    double fwhm() const { return upper - lower; }
};

/// Half-maximum points of eta(delta) relative to the on-resonance value.
inline BandwidthResult bandwidth_edges(const OperatingPoint& op)
{
    const double peak = efficiency_detuned(op, 0.0);
    if (!(peak > 0.0)) throw UndefinedBandwidth("bandwidth undefined for zero peak efficiency");
    const double level = 0.5 * peak;
    return {-detail::half_max_crossing(op, level, -1.0), detail::half_max_crossing(op, level, +1.0)};
}

/// Full width at half maximum of eta(delta), rad/s.
inline double bandwidth(const OperatingPoint& op) { return bandwidth_edges(op).fwhm(); }

struct CouplingSweepRow {
    double ratio = 0.0;
    double pump_photons = 0.0;
    double cooperativity = 0.0;
    double efficiency = 0.0;
};

/// Operating point with the optical signal coupling set to ratio * gamma_{a,0}.
inline OperatingPoint with_optical_coupling_ratio(const OperatingPoint& base, double ratio)
{
    const auto& a = base.optical_signal();
    return base.with_optical_signal(a.with_coupling_rate(ratio * a.intrinsic_rate()));
}

inline std::vector<CouplingSweepRow> sweep_optical_coupling(const OperatingPoint& base,
                                                            const std::vector<double>& ratios)
{
    if (ratios.empty()) throw InvalidParameter("sweep_optical_coupling: empty ratio list");
    std::vector<CouplingSweepRow> rows;
    rows.reserve(ratios.size());
    for (double ratio : ratios) {
        if (!(ratio >= 0.0)) throw InvalidParameter("sweep_optical_coupling: ratios must be non-negative");
        const auto r = efficiency(with_optical_coupling_ratio(base, ratio));
        rows.push_back({ratio, r.pump_photons, r.cooperativity, r.total_efficiency});
    }
    return rows;
}

struct PowerSweepRow {
    double power = 0.0;
    double pump_photons = 0.0;
    double cooperativity = 0.0;
    double efficiency = 0.0;
};

inline std::vector<PowerSweepRow> sweep_pump_power(const OperatingPoint& base, const std::vector<double>& powers)
{
    if (powers.empty()) throw InvalidParameter("sweep_pump_power: empty power list");
    std::vector<PowerSweepRow> rows;
    rows.reserve(powers.size());
    for (double p : powers) {
        if (!(p >= 0.0)) throw InvalidParameter("sweep_pump_power: powers must be non-negative");
        const auto r = efficiency(base.with_pump_power(p));
        rows.push_back({p, r.pump_photons, r.cooperativity, r.total_efficiency});
    }
    return rows;
}

enum class CouplingObjective { pump_photons, cooperativity, efficiency };

/// Coupling ratio maximizing the chosen objective: grid search followed by
/// golden-section refinement (1e-4 relative in the ratio).
inline numeric::Extremum optimal_optical_coupling(const OperatingPoint& base, CouplingObjective objective,
                                                  const std::vector<double>& grid)
{
    auto f = [&](double ratio) {
        const auto r = efficiency(with_optical_coupling_ratio(base, ratio));
        switch (objective) {
        case CouplingObjective::pump_photons: return r.pump_photons;
        case CouplingObjective::cooperativity: return r.cooperativity;
        case CouplingObjective::efficiency: return r.total_efficiency;
        }
        return 0.0;
    };
    return numeric::maximize_on_grid(f, grid, 1e-4);
}

/// Ratio where n_p is stationary: sqrt(1 + 4 delta_p^2 / gamma_{a,0}^2).
inline double pump_photon_optimal_ratio(const OperatingPoint& op)
{
    const double g0 = op.optical_signal().intrinsic_rate();
    const double d = op.pump().detuning;
    return std::sqrt(1.0 + 4.0 * d * d / (g0 * g0));
}

/// Pump power that yields the requested cooperativity (C is linear in P).
inline double power_for_cooperativity(const OperatingPoint& op, double target)
{
    const double c_unit = cooperativity(op.with_pump_power(1.0));
    if (!(c_unit > 0.0)) throw InvalidParameter("power_for_cooperativity: cooperativity does not depend on power");
    return target / c_unit;
}

} // namespace eotrans
