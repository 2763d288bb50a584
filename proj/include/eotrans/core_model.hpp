#pragma once

// Shared domain types for the electro-optic transducer model.
//
// Unit convention: every rate and frequency inside the library is angular
// (rad/s). Conversion from Hz happens once, at the front-end boundary, through
// hz_to_angular(). All linewidths are full energy-decay rates; amplitude
// equations use gamma/2.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eotrans {

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PhysicalConstants {
    static constexpr double reduced_planck = 1.054571817e-34;      // J s (CODATA 2018)
    static constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m (CODATA 2018)
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double hz_to_angular(double f) { return two_pi * f; }
inline double angular_to_hz(double w) { return w / two_pi; }

/// One resonant mode: frequency plus its loss budget split into intrinsic
/// (gamma_{m,0}) and external coupling (gamma_{m,c}) parts.
class ModeParams {
public:
    ModeParams(double frequency, double intrinsic_rate, double coupling_rate)
        : frequency_(frequency), intrinsic_rate_(intrinsic_rate), coupling_rate_(coupling_rate)
    {
        if (!(frequency > 0.0) || !std::isfinite(frequency))
            throw InvalidParameter("mode frequency must be positive and finite");
        if (!(intrinsic_rate >= 0.0) || !std::isfinite(intrinsic_rate))
            throw InvalidParameter("intrinsic rate must be non-negative and finite");
        if (!(coupling_rate >= 0.0) || !std::isfinite(coupling_rate))
            throw InvalidParameter("coupling rate must be non-negative and finite");
    }

    double frequency() const { return frequency_; }
    double intrinsic_rate() const { return intrinsic_rate_; }
    double coupling_rate() const { return coupling_rate_; }
    double total_rate() const { return intrinsic_rate_ + coupling_rate_; }

    /// Fraction of the mode's photons that leave through the useful port.
    double extraction_ratio() const
    {
        const double total = total_rate();
        return total > 0.0 ? coupling_rate_ / total : 0.0;
    }

    ModeParams with_coupling_rate(double rate) const { return {frequency_, intrinsic_rate_, rate}; }
    ModeParams with_intrinsic_rate(double rate) const { return {frequency_, rate, coupling_rate_}; }

    friend bool operator==(const ModeParams&, const ModeParams&) = default;

private:
    double frequency_;
    double intrinsic_rate_;
    double coupling_rate_;
};

/// Builds a mode from an intrinsic quality factor and the ratio
/// gamma_{m,c} / gamma_{m,0}.
inline ModeParams mode_from_q(double frequency, double intrinsic_q, double coupling_ratio)
{
    if (!(frequency > 0.0)) throw InvalidParameter("mode_from_q: frequency must be positive");
    if (!(intrinsic_q > 0.0)) throw InvalidParameter("mode_from_q: quality factor must be positive");
    if (!(coupling_ratio >= 0.0)) throw InvalidParameter("mode_from_q: coupling ratio must be non-negative");
    const double intrinsic = frequency / intrinsic_q;
    return {frequency, intrinsic, coupling_ratio * intrinsic};
}

/// Same split, but the quality factor is read as the loaded one:
/// total rate = frequency / loaded_q.
inline ModeParams mode_from_loaded_q(double frequency, double loaded_q, double coupling_ratio)
{
    if (!(frequency > 0.0)) throw InvalidParameter("mode_from_loaded_q: frequency must be positive");
    if (!(loaded_q > 0.0)) throw InvalidParameter("mode_from_loaded_q: quality factor must be positive");
    if (!(coupling_ratio >= 0.0))
        throw InvalidParameter("mode_from_loaded_q: coupling ratio must be non-negative");
    const double intrinsic = frequency / loaded_q / (1.0 + coupling_ratio);
    return {frequency, intrinsic, coupling_ratio * intrinsic};
}

enum class QConvention { intrinsic, loaded };

inline const char* to_string(QConvention c) { return c == QConvention::intrinsic ? "intrinsic" : "loaded"; }

inline ModeParams mode_from_q(double frequency, double q, double coupling_ratio, QConvention convention)
{
    return convention == QConvention::intrinsic ? mode_from_q(frequency, q, coupling_ratio)
                                                : mode_from_loaded_q(frequency, q, coupling_ratio);
}

struct PumpDrive {
    double power = 0.0;    // W, at the coupler input
    double detuning = 0.0; // delta_p, rad/s
};

/// Which loss budget the intracavity pump amplitude sees. The signal-mode
/// rates are the default, matching the printed pump-amplitude expression.
enum class PumpLinewidth { signal_mode, own_mode };

/// Complete transducer configuration: optical signal mode a, optical pump
/// mode p, microwave mode b, single-photon coupling g_eo and the pump drive.
class OperatingPoint {
public:
    OperatingPoint(ModeParams optical_signal, ModeParams optical_pump, ModeParams microwave, double g_eo,
                   PumpDrive pump, PumpLinewidth pump_linewidth = PumpLinewidth::signal_mode)
        : optical_signal_(optical_signal), optical_pump_(optical_pump), microwave_(microwave), g_eo_(g_eo),
          pump_(pump), pump_linewidth_(pump_linewidth)
    {
        if (!(g_eo >= 0.0) || !std::isfinite(g_eo)) throw InvalidParameter("g_eo must be non-negative and finite");
        if (!(pump.power >= 0.0) || !std::isfinite(pump.power))
            throw InvalidParameter("pump power must be non-negative and finite");
        if (!std::isfinite(pump.detuning)) throw InvalidParameter("pump detuning must be finite");
        if (!(optical_signal.total_rate() > 0.0))
            throw InvalidParameter("optical signal mode has zero total linewidth");
        if (!(microwave.total_rate() > 0.0)) throw InvalidParameter("microwave mode has zero total linewidth");
        if (pump_linewidth == PumpLinewidth::own_mode && !(optical_pump.total_rate() > 0.0))
            throw InvalidParameter("pump mode has zero total linewidth");
    }

    const ModeParams& optical_signal() const { return optical_signal_; }
    const ModeParams& optical_pump() const { return optical_pump_; }
    const ModeParams& microwave() const { return microwave_; }
    double g_eo() const { return g_eo_; }
    const PumpDrive& pump() const { return pump_; }
    PumpLinewidth pump_linewidth() const { return pump_linewidth_; }

    /// Rates (coupling, total) used for the intracavity pump amplitude.
    const ModeParams& pump_loss_mode() const
    {
        return pump_linewidth_ == PumpLinewidth::signal_mode ? optical_signal_ : optical_pump_;
    }

    OperatingPoint with_optical_signal(const ModeParams& m) const
    {
        return {m, optical_pump_, microwave_, g_eo_, pump_, pump_linewidth_};
    }
    OperatingPoint with_microwave(const ModeParams& m) const
    {
        return {optical_signal_, optical_pump_, m, g_eo_, pump_, pump_linewidth_};
    }
    OperatingPoint with_g_eo(double g) const
    {
        return {optical_signal_, optical_pump_, microwave_, g, pump_, pump_linewidth_};
    }
    OperatingPoint with_pump_power(double power) const
    {
        return {optical_signal_, optical_pump_, microwave_, g_eo_, {power, pump_.detuning}, pump_linewidth_};
    }
    OperatingPoint with_pump_detuning(double detuning) const
    {
        return {optical_signal_, optical_pump_, microwave_, g_eo_, {pump_.power, detuning}, pump_linewidth_};
    }

private:
    ModeParams optical_signal_;
    ModeParams optical_pump_;
    ModeParams microwave_;
    double g_eo_;
    PumpDrive pump_;
    PumpLinewidth pump_linewidth_;
};

} // namespace eotrans
