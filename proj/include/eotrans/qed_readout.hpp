#pragma once

// Optical readout of a transmon dispersively coupled to the microwave mode.
// The qubit enters only through a frozen shift chi * sigma_z; the
// renormalized qubit and cavity frequencies are absorbed into the frame.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "converter.hpp"
#include "core_model.hpp"
#include "numeric.hpp"

namespace eotrans {

enum class QubitState { ground, excited };

inline int sigma_z(QubitState s) { return s == QubitState::ground ? -1 : +1; }

struct QubitParams {
    double dispersive_shift = 0.0; // chi, rad/s
    QubitState state = QubitState::ground;
};

/// Steady state of the interaction-picture equations under an e^{i chi t}
/// microwave drive:
///   eta(chi) = g_ac g_bc (2G/g_a)^2 / |i chi + g_b/2 + 2G^2/g_a|^2,  G^2 = n_p g_eo^2.
inline double readout_efficiency(const OperatingPoint& op, double chi)
{
    const auto& a = op.optical_signal();
    const auto& b = op.microwave();
    const double g2 = enhanced_coupling_sq(op);
    const double ga = a.total_rate();
    const std::complex<double> d{0.5 * b.total_rate() + 2.0 * g2 / ga, chi};
    return a.coupling_rate() * b.coupling_rate() * 4.0 * g2 / (ga * ga) / std::norm(d);
}

/// |chi| where eta(chi) falls to half of eta(0): g_b (1 + C) / 2.
inline double readout_half_width(const OperatingPoint& op)
{
    return 0.5 * op.microwave().total_rate() * (1.0 + cooperativity(op));
}

class InvalidThreshold : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Returned by dispersive_resolution when the threshold is not reached below
/// the search ceiling of 1e3 * gamma_b.
inline constexpr double unresolved = std::numeric_limits<double>::infinity();

/// Smallest |chi| with eta(chi) < threshold, by bisection (1e-6 relative).
inline double dispersive_resolution(const OperatingPoint& op, double threshold)
{
    const double peak = readout_efficiency(op, 0.0);
    if (!(threshold > 0.0) || !(threshold < peak))
        throw InvalidThreshold("dispersive_resolution: threshold must lie in (0, eta(0))");
    const double ceiling = 1e3 * op.microwave().total_rate();
    if (readout_efficiency(op, ceiling) >= threshold) return unresolved;
    auto f = [&](double chi) { return readout_efficiency(op, chi) - threshold; };
    return numeric::bisect(f, 0.0, ceiling, 1e-6);
}

struct SpectrumLine {
    double frequency = 0.0; // rad/s
    std::string label;
};

/// Tone ledger of the optical output: the pump, and the converted signal at
/// w_p + w_b' + chi sigma_z for each qubit state. Here w_b' = FSR - delta_p,
/// with FSR = w_a - w_p.
inline std::vector<SpectrumLine> readout_spectrum_labels(const OperatingPoint& op, double chi)
{
    const double wp = op.optical_pump().frequency();
    const double fsr = op.optical_signal().frequency() - wp;
    const double wb_renorm = fsr - op.pump().detuning;
    return {
        {wp, "pump"},
        {wp + wb_renorm + chi * sigma_z(QubitState::ground), "signal_qubit_ground"},
        {wp + wb_renorm + chi * sigma_z(QubitState::excited), "signal_qubit_excited"},
    };
}

} // namespace eotrans
