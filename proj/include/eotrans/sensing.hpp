#pragma once

// Noise spectral densities for transducer-based microwave detection:
// the standard single-quadrature scheme, the RF and SQL floors, and the
// back-action-evading (BAE) scheme.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "converter.hpp"
#include "core_model.hpp"

namespace eotrans {

class DivisionGuard : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Relation between the spectra's kappa and the mode linewidth gamma.
/// half: kappa = gamma / 2 (default). full: kappa = gamma.
enum class KappaConvention { half, full };

inline double kappa_factor(KappaConvention c) { return c == KappaConvention::half ? 0.5 : 1.0; }

/// Form of the BAE imprecision term.
///   kappa_b_units: (k_b^2+D^2)(k_a^2+D^2) / (C k_a k_b^2); the printed
///                  expression evaluated with rates in units of k_b, so
///                  S_bae meets S_RF + S_SQL at C = k_a / k_b (D = 0, n_T = 0).
///   as_printed:    (k_b^2+D^2)(k_a^2+D^2) / (C k_a k_b), read in rad/s.
enum class BaeForm { kappa_b_units, as_printed };

struct SensingParams {
    double kappa_a = 0.0;         // rad/s
    double kappa_b = 0.0;         // rad/s
    double thermal_photons = 0.0; // n_T
    double pump_strength = 0.0;   // n_p g_eo^2, rad^2/s^2
    KappaConvention convention = KappaConvention::half;
    BaeForm bae_form = BaeForm::kappa_b_units;

    void validate() const
    {
        if (!(kappa_a > 0.0) || !(kappa_b > 0.0)) throw InvalidParameter("kappa_a and kappa_b must be positive");
        if (!(thermal_photons >= 0.0)) throw InvalidParameter("thermal photon number must be non-negative");
        if (!(pump_strength >= 0.0)) throw InvalidParameter("pump strength must be non-negative");
    }

    /// C = 4 n_p g^2 / (gamma_a gamma_b), with gamma = kappa / factor.
    double cooperativity() const
    {
        const double f = kappa_factor(convention);
        return 4.0 * pump_strength * f * f / (kappa_a * kappa_b);
    }

    SensingParams with_cooperativity(double c) const
    {
        SensingParams p = *this;
        const double f = kappa_factor(convention);
        p.pump_strength = c * kappa_a * kappa_b / (4.0 * f * f);
        return p;
    }
};

inline SensingParams sensing_params_from(const OperatingPoint& op, double thermal_photons,
                                         KappaConvention convention = KappaConvention::half)
{
    const double f = kappa_factor(convention);
    SensingParams p;
    p.kappa_a = f * op.optical_signal().total_rate();
    p.kappa_b = f * op.microwave().total_rate();
    p.thermal_photons = thermal_photons;
    p.pump_strength = enhanced_coupling_sq(op);
    p.convention = convention;
    return p;
}

struct NoiseFloors {
    double rf = 0.0;  // 2 k_b (2 n_T + 1)
    double sql = 0.0; // sqrt(k_b^2 + D^2)
};

inline NoiseFloors noise_floors(const SensingParams& p, double delta)
{
    p.validate();
    return {2.0 * p.kappa_b * (2.0 * p.thermal_photons + 1.0), std::hypot(p.kappa_b, delta)};
}

/// Single-quadrature spectrum
///   S = 2k_b(2n_T+1) + (k_b^2+D^2)(k_a^2+D^2)/(4 n_p g^2) + 4 n_p g^2/(k_a^2+D^2).
inline double noise_standard(const SensingParams& p, double delta)
{
    p.validate();
    if (!(p.pump_strength > 0.0)) throw DivisionGuard("noise_standard: pump strength is zero");
    const double d2 = delta * delta;
    const double kb2 = p.kappa_b * p.kappa_b + d2;
    const double ka2 = p.kappa_a * p.kappa_a + d2;
    const double x = 4.0 * p.pump_strength;
    return noise_floors(p, delta).rf + kb2 * ka2 / x + x / ka2;
}

/// Pump strength n_p g^2 that minimizes noise_standard at detuning delta.
inline double optimal_pump_strength(const SensingParams& p, double delta)
{
    const double d2 = delta * delta;
    const double ka2 = p.kappa_a * p.kappa_a + d2;
    return 0.25 * ka2 * std::sqrt(p.kappa_b * p.kappa_b + d2);
}

inline double noise_bae(const SensingParams& p, double delta)
{
    p.validate();
    const double c = p.cooperativity();
    if (!(c > 0.0)) throw DivisionGuard("noise_bae: cooperativity is zero");
    const double d2 = delta * delta;
    const double numerator = (p.kappa_b * p.kappa_b + d2) * (p.kappa_a * p.kappa_a + d2);
    const double denominator = p.bae_form == BaeForm::kappa_b_units ? c * p.kappa_a * p.kappa_b * p.kappa_b
                                                                    : c * p.kappa_a * p.kappa_b;
    return noise_floors(p, delta).rf + numerator / denominator;
}

struct NoiseSweepRow {
    double power = 0.0;
    double cooperativity = 0.0;
    double standard_over_sql = 0.0; // NaN when the row was rejected
    double bae_over_sql = 0.0;
    double detuning = 0.0;          // rad/s
    std::optional<std::string> error;
};

struct NoiseSweepConfig {
    double thermal_photons = 0.0;
    double detuning = 0.0; // rad/s
    KappaConvention convention = KappaConvention::half;
    BaeForm bae_form = BaeForm::kappa_b_units;
};

/// Spectra normalized by S_SQL versus pump power; C(P) from the converter.
/// Rows with zero pump strength carry the division-guard message.
inline std::vector<NoiseSweepRow> sweep_noise_vs_power(const NoiseSweepConfig& cfg, const OperatingPoint& op,
                                                       const std::vector<double>& powers)
{
    if (powers.empty()) throw InvalidParameter("sweep_noise_vs_power: empty power list");
    std::vector<NoiseSweepRow> rows;
    rows.reserve(powers.size());
    for (double power : powers) {
        const OperatingPoint at = op.with_pump_power(power);
        SensingParams p = sensing_params_from(at, cfg.thermal_photons, cfg.convention);
        p.bae_form = cfg.bae_form;
        NoiseSweepRow row;
        row.power = power;
        row.cooperativity = cooperativity(at);
        row.detuning = cfg.detuning;
        try {
            const double sql = noise_floors(p, cfg.detuning).sql;
            row.standard_over_sql = noise_standard(p, cfg.detuning) / sql;
            row.bae_over_sql = noise_bae(p, cfg.detuning) / sql;
        } catch (const DivisionGuard& e) {
            row.standard_over_sql = std::nan("");
            row.bae_over_sql = std::nan("");
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace eotrans
