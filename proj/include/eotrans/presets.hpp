#pragma once

// Design operating point of the SRF-cavity / lithium-niobate transducer, in
// the units the rest of the library expects (angular rates, W, s).

#include "core_model.hpp"

namespace eotrans::presets {

struct DesignParameters {
    double optical_frequency_hz = 192.43e12;
    double fsr_hz = 8.93e9; // microwave resonance matches the free spectral range
    double q_a = 1e7;
    double optical_coupling_ratio = 2.3; // gamma_{a,c} / gamma_{a,0}
    double q_b = 1e5;
    double microwave_coupling_ratio = 3.4; // gamma_{b,c} / gamma_{b,0}
    double g_eo_hz = 46.75;
    double pump_detuning_hz = 10e6;
    double pump_power_w = 140e-6;
    QConvention q_convention = QConvention::intrinsic;
};

inline OperatingPoint make_operating_point(const DesignParameters& d)
{
    const double wa = hz_to_angular(d.optical_frequency_hz);
    const double wb = hz_to_angular(d.fsr_hz);
    const ModeParams signal = mode_from_q(wa, d.q_a, d.optical_coupling_ratio, d.q_convention);
    // The pump sits one free spectral range below the signal and shares its
    // loss budget.
    const ModeParams pump{wa - wb, signal.intrinsic_rate(), signal.coupling_rate()};
    const ModeParams microwave = mode_from_q(wb, d.q_b, d.microwave_coupling_ratio, d.q_convention);
    return {signal, pump, microwave, hz_to_angular(d.g_eo_hz),
            PumpDrive{d.pump_power_w, hz_to_angular(d.pump_detuning_hz)}};
}

inline OperatingPoint design_point() { return make_operating_point({}); }

} // namespace eotrans::presets
