#pragma once

// Named parameter set shared by figures, sweeps and the CLI. Every value is
// in Hz, W, s or dimensionless; conversion to angular units happens in
// operating_point() and the protocol builders.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../entanglement.hpp"
#include "../presets.hpp"
#include "../sensing.hpp"

namespace eotrans::app {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParameterSet {
    presets::DesignParameters design;

    double detuning_hz = 0.0; // signal detuning Delta
    double chi_hz = 0.0;      // dispersive shift
    double threshold = 0.1;   // dispersive resolution threshold

    double attempt_duration_s = 1e-6;
    double reset_time_s = 1e-6;
    double r0_per_s = 1e4;
    double r0_per_w = 1e4 / 18e-6; // direct model: r0 = r0_per_W * P
    SidebandScheme scheme = SidebandScheme::blue;
    R0ModelKind r0_model = R0ModelKind::direct;
    std::uint64_t mc_attempts = 0; // 0 disables the Monte Carlo columns
    std::uint64_t seed = 1;

    double thermal_photons = 0.0;
    KappaConvention kappa_convention = KappaConvention::half;
    BaeForm bae_form = BaeForm::kappa_b_units;

    // Figure grid overrides; NaN / 0 keep the figure's default.
    double grid_min = std::nan("");
    double grid_max = std::nan("");
    std::uint64_t grid_count = 0;
};

inline OperatingPoint operating_point(const ParameterSet& p) { return presets::make_operating_point(p.design); }

inline EntanglementProtocolParams protocol(const ParameterSet& p, double r0)
{
    EntanglementProtocolParams e;
    e.generation_rate = r0;
    e.attempt_duration = p.attempt_duration_s;
    e.reset_time = p.reset_time_s;
    e.scheme = p.scheme;
    return e;
}

inline double parse_number(const std::string& key, const std::string& text)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE)
        throw UsageError("parameter '" + key + "': '" + text + "' is not a number");
    return v;
}

inline std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    const double v = parse_number(key, text);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15)
        throw UsageError("parameter '" + key + "': '" + text + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

namespace detail {

struct ParameterSlot {
    std::function<void(ParameterSet&, const std::string&)> set;
    std::function<nlohmann::json(const ParameterSet&)> get;
    bool numeric = true; // usable as a sweep axis
};

inline ParameterSlot design_slot(double presets::DesignParameters::*field, const char* name)
{
    return {[field, name](ParameterSet& p, const std::string& v) { p.design.*field = parse_number(name, v); },
            [field](const ParameterSet& p) { return nlohmann::json(p.design.*field); }, true};
}

inline ParameterSlot count_slot(std::uint64_t ParameterSet::*field, const char* name)
{
    return {[field, name](ParameterSet& p, const std::string& v) { p.*field = parse_count(name, v); },
            [field](const ParameterSet& p) { return nlohmann::json(p.*field); }, false};
}

template <class Enum>
ParameterSlot choice_slot(Enum ParameterSet::*field, const char* name, std::vector<std::pair<std::string, Enum>> options)
{
    auto set = [field, name, options](ParameterSet& p, const std::string& v) {
        for (const auto& [label, value] : options)
            if (label == v) {
                p.*field = value;
                return;
            }
        std::string allowed;
        for (const auto& o : options) allowed += (allowed.empty() ? "" : ", ") + o.first;
        throw UsageError(std::string("parameter '") + name + "': '" + v + "' is not one of " + allowed);
    };
    auto get = [field, options](const ParameterSet& p) {
        for (const auto& [label, value] : options)
            if (value == p.*field) return nlohmann::json(label);
        return nlohmann::json(nullptr);
    };
    return {set, get, false};
}

inline ParameterSlot plain_slot(double ParameterSet::*field, const char* name)
{
    return {[field, name](ParameterSet& p, const std::string& v) { p.*field = parse_number(name, v); },
            [field](const ParameterSet& p) { return nlohmann::json(p.*field); }, true};
}

inline const std::map<std::string, ParameterSlot>& registry()
{
    using D = presets::DesignParameters;
    using P = ParameterSet;
    static const std::map<std::string, ParameterSlot> slots = {
        {"optical_frequency_Hz", design_slot(&D::optical_frequency_hz, "optical_frequency_Hz")},
        {"microwave_frequency_Hz", design_slot(&D::fsr_hz, "microwave_frequency_Hz")},
        {"q_a", design_slot(&D::q_a, "q_a")},
        {"optical_coupling_ratio", design_slot(&D::optical_coupling_ratio, "optical_coupling_ratio")},
        {"q_b", design_slot(&D::q_b, "q_b")},
        {"microwave_coupling_ratio", design_slot(&D::microwave_coupling_ratio, "microwave_coupling_ratio")},
        {"g_eo_Hz", design_slot(&D::g_eo_hz, "g_eo_Hz")},
        {"pump_detuning_Hz", design_slot(&D::pump_detuning_hz, "pump_detuning_Hz")},
        {"pump_power_W", design_slot(&D::pump_power_w, "pump_power_W")},
        {"q_convention",
         {[](P& p, const std::string& v) {
              if (v == "intrinsic") p.design.q_convention = QConvention::intrinsic;
              else if (v == "loaded") p.design.q_convention = QConvention::loaded;
              else throw UsageError("parameter 'q_convention': '" + v + "' is not one of intrinsic, loaded");
          },
          [](const P& p) { return nlohmann::json(to_string(p.design.q_convention)); }, false}},
        {"detuning_Hz", plain_slot(&P::detuning_hz, "detuning_Hz")},
        {"chi_Hz", plain_slot(&P::chi_hz, "chi_Hz")},
        {"threshold", plain_slot(&P::threshold, "threshold")},
        {"attempt_duration_s", plain_slot(&P::attempt_duration_s, "attempt_duration_s")},
        {"reset_time_s", plain_slot(&P::reset_time_s, "reset_time_s")},
        {"r0_per_s", plain_slot(&P::r0_per_s, "r0_per_s")},
        {"r0_per_W", plain_slot(&P::r0_per_w, "r0_per_W")},
        {"scheme", choice_slot(&P::scheme, "scheme", {{"blue", SidebandScheme::blue}, {"red", SidebandScheme::red}})},
        {"r0_model", choice_slot(&P::r0_model, "r0_model",
                                 {{"direct", R0ModelKind::direct},
                                  {"cooperativity_scaled", R0ModelKind::cooperativity_scaled}})},
        {"mc_attempts", count_slot(&P::mc_attempts, "mc_attempts")},
        {"seed", count_slot(&P::seed, "seed")},
        {"thermal_photons", plain_slot(&P::thermal_photons, "thermal_photons")},
        {"kappa_convention", choice_slot(&P::kappa_convention, "kappa_convention",
                                         {{"half", KappaConvention::half}, {"full", KappaConvention::full}})},
        {"bae_form", choice_slot(&P::bae_form, "bae_form",
                                 {{"kappa_b_units", BaeForm::kappa_b_units}, {"as_printed", BaeForm::as_printed}})},
        {"grid_min", plain_slot(&P::grid_min, "grid_min")},
        {"grid_max", plain_slot(&P::grid_max, "grid_max")},
        {"grid_count", count_slot(&P::grid_count, "grid_count")},
    };
    return slots;
}

} // namespace detail

inline bool is_parameter(const std::string& key) { return detail::registry().count(key) > 0; }

inline bool is_numeric_parameter(const std::string& key)
{
    const auto it = detail::registry().find(key);
    return it != detail::registry().end() && it->second.numeric;
}

inline void set_parameter(ParameterSet& p, const std::string& key, const std::string& value)
{
    const auto it = detail::registry().find(key);
    if (it == detail::registry().end()) throw UsageError("unknown parameter '" + key + "'");
    it->second.set(p, value);
}

inline void set_numeric_parameter(ParameterSet& p, const std::string& key, double value)
{
    if (!is_numeric_parameter(key)) throw UsageError("parameter '" + key + "' is not numeric");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    detail::registry().at(key).set(p, buf);
}

/// Applies "key=value".
inline void apply_assignment(ParameterSet& p, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + assignment + "'");
    set_parameter(p, assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline nlohmann::json to_json(const ParameterSet& p)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [name, slot] : detail::registry()) out[name] = slot.get(p);
    return out;
}

} // namespace eotrans::app
