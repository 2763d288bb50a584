#pragma once

// Declarative parameter sweeps read from YAML:
//
//   schema_version: 1
//   target: bandwidth
//   fixed: {pump_power_W: 1e-3}
//   axes:
//     - {name: q_b, min: 1e4, max: 1e6, count: 9, scale: log}
//   output: bandwidth_vs_qb.csv
//
// Rows are emitted axis-major (first axis outermost).

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "../converter.hpp"
#include "../csv.hpp"
#include "../dynamics_oracle.hpp"
#include "../entanglement.hpp"
#include "../numeric.hpp"
#include "../qed_readout.hpp"
#include "../sensing.hpp"
#include "parameters.hpp"

namespace eotrans::app {

inline constexpr int sweep_schema_version = 1;

class ConfigError : public UsageError {
public:
    using UsageError::UsageError;
};

struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
    bool log = false;

    std::vector<double> values() const { return log ? numeric::logspace(min, max, count) : numeric::linspace(min, max, count); }
};

struct SweepTarget {
    std::vector<std::string> columns;
    std::function<std::vector<double>(const ParameterSet&)> evaluate;
    bool stochastic = false;
};

namespace targets {

inline double nan_on_domain_error(const std::function<double()>& f)
{
    try {
        return f();
    } catch (const UndefinedBandwidth&) {
        return std::nan("");
    } catch (const DivisionGuard&) {
        return std::nan("");
    }
}

inline std::vector<double> efficiency_point(const ParameterSet& p)
{
    const auto r = efficiency(operating_point(p));
    return {r.pump_photons, r.cooperativity, r.total_efficiency};
}

inline std::vector<double> noise_point(const ParameterSet& p)
{
    const auto op = operating_point(p);
    auto s = sensing_params_from(op, p.thermal_photons, p.kappa_convention);
    s.bae_form = p.bae_form;
    const double delta = hz_to_angular(p.detuning_hz);
    const double sql = noise_floors(s, delta).sql;
    return {cooperativity(op), nan_on_domain_error([&] { return noise_standard(s, delta) / sql; }),
            nan_on_domain_error([&] { return noise_bae(s, delta) / sql; })};
}

inline std::vector<double> time_domain_point(const ParameterSet& p)
{
    const auto op = operating_point(p);
    const double delta = hz_to_angular(p.detuning_hz);
    const DriveTone drive{{1.0, 0.0}, delta};
    const auto r = integrate(op, {}, drive, 2000.0 * eotrans::detail::convergence_window(op), 1e-10);
    const double td = r.converged ? conversion_efficiency(op, r, drive) : std::nan("");
    return {td, efficiency_detuned(op, delta)};
}

inline std::vector<double> monte_carlo_point(const ParameterSet& p)
{
    if (p.mc_attempts == 0) throw UsageError("herald_monte_carlo needs mc_attempts > 0");
    const auto m = monte_carlo(protocol(p, p.r0_per_s), p.mc_attempts, p.seed);
    return {m.rate, m.fidelity_defined ? m.infidelity : std::nan(""), m.rate_stderr, m.infidelity_stderr};
}

} // namespace targets

inline const std::map<std::string, SweepTarget>& target_registry()
{
    static const std::map<std::string, SweepTarget> reg = {
        {"passthrough", {{}, [](const ParameterSet&) { return std::vector<double>{}; }}},
        {"efficiency", {{"n_pump", "cooperativity", "efficiency"}, targets::efficiency_point}},
        {"efficiency_detuned",
         {{"efficiency"},
          [](const ParameterSet& p) {
              return std::vector<double>{efficiency_detuned(operating_point(p), hz_to_angular(p.detuning_hz))};
          }}},
        {"bandwidth",
         {{"bandwidth_Hz", "cooperativity"},
          [](const ParameterSet& p) {
              const auto op = operating_point(p);
              return std::vector<double>{
                  targets::nan_on_domain_error([&] { return angular_to_hz(bandwidth(op)); }), cooperativity(op)};
          }}},
        {"readout_efficiency",
         {{"efficiency"},
          [](const ParameterSet& p) {
              return std::vector<double>{readout_efficiency(operating_point(p), hz_to_angular(p.chi_hz))};
          }}},
        {"dispersive_resolution",
         {{"resolution_Hz", "half_width_Hz"},
          [](const ParameterSet& p) {
              const auto op = operating_point(p);
              return std::vector<double>{angular_to_hz(dispersive_resolution(op, p.threshold)),
                                         angular_to_hz(readout_half_width(op))};
          }}},
        {"herald",
         {{"rate_per_s", "infidelity"},
          [](const ParameterSet& p) {
              const auto h = herald_outcome(protocol(p, p.r0_per_s));
              return std::vector<double>{h.rate, h.infidelity};
          }}},
        {"herald_monte_carlo",
         {{"rate_per_s", "infidelity", "rate_stderr", "infidelity_stderr"}, targets::monte_carlo_point, true}},
        {"noise", {{"cooperativity", "s_standard_over_sql", "s_bae_over_sql"}, targets::noise_point}},
        {"time_domain_efficiency", {{"efficiency_time_domain", "efficiency_closed_form"}, targets::time_domain_point}},
    };
    return reg;
}

struct SweepSpec {
    int schema_version = sweep_schema_version;
    std::string target;
    std::map<std::string, std::string> fixed;
    std::vector<SweepAxis> axes;
    std::string output;

    ParameterSet base_parameters() const
    {
        ParameterSet p;
        for (const auto& [k, v] : fixed) set_parameter(p, k, v);
        return p;
    }

    bool stochastic() const { return target_registry().at(target).stochastic; }

    nlohmann::json canonical() const
    {
        nlohmann::json axes_json = nlohmann::json::array();
        for (const auto& a : axes)
            axes_json.push_back({{"name", a.name}, {"min", csv::format_double(a.min)}, {"max", csv::format_double(a.max)},
                                 {"count", a.count}, {"scale", a.log ? "log" : "linear"}});
        return {{"schema_version", schema_version}, {"target", target}, {"fixed", fixed}, {"axes", axes_json},
                {"output", output}, {"parameters", to_json(base_parameters())}};
    }
};

namespace detail {

inline std::string where(const std::string& source, const YAML::Node& node)
{
    const auto mark = node.Mark();
    return mark.line >= 0 ? source + ":" + std::to_string(mark.line + 1) : source;
}

template <class T>
T scalar_as(const std::string& source, const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) throw ConfigError(where(source, node) + ": '" + field + "' must be a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where(source, node) + ": '" + field + "' has an invalid value '" + node.Scalar() + "'");
    }
}

inline void reject_unknown_keys(const std::string& source, const YAML::Node& map, const std::set<std::string>& allowed,
                                const std::string& context)
{
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ConfigError(where(source, kv.first) + ": unknown " + context + " '" + key + "'");
    }
}

inline SweepAxis parse_axis(const std::string& source, const YAML::Node& node, std::size_t index)
{
    const std::string ctx = "axes[" + std::to_string(index) + "]";
    if (!node.IsMap()) throw ConfigError(where(source, node) + ": " + ctx + " must be a mapping");
    reject_unknown_keys(source, node, {"name", "min", "max", "count", "scale"}, ctx + " field");
    for (const char* key : {"name", "min", "max", "count"})
        if (!node[key]) throw ConfigError(where(source, node) + ": " + ctx + "." + key + " is required");
    SweepAxis a;
    a.name = scalar_as<std::string>(source, node["name"], ctx + ".name");
    if (!is_numeric_parameter(a.name))
        throw ConfigError(where(source, node["name"]) + ": " + ctx + ".name '" + a.name + "' is not a numeric parameter");
    a.min = scalar_as<double>(source, node["min"], ctx + ".min");
    a.max = scalar_as<double>(source, node["max"], ctx + ".max");
    const long long count = scalar_as<long long>(source, node["count"], ctx + ".count");
    if (count < 2) throw ConfigError(where(source, node["count"]) + ": " + ctx + ".count must be at least 2");
    a.count = static_cast<std::size_t>(count);
    if (!(a.min < a.max)) throw ConfigError(where(source, node) + ": " + ctx + " needs min < max");
    if (node["scale"]) {
        const auto scale = scalar_as<std::string>(source, node["scale"], ctx + ".scale");
        if (scale == "log") a.log = true;
        else if (scale != "linear")
            throw ConfigError(where(source, node["scale"]) + ": " + ctx + ".scale must be linear or log");
    }
    if (a.log && !(a.min > 0.0)) throw ConfigError(where(source, node["min"]) + ": " + ctx + ".min must be positive on a log scale");
    return a;
}

} // namespace detail

inline SweepSpec parse_sweep_spec(const std::string& text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
    detail::reject_unknown_keys(source, root, {"schema_version", "target", "fixed", "axes", "output"}, "key");
    for (const char* key : {"schema_version", "target", "axes", "output"})
        if (!root[key]) throw ConfigError(source + ": '" + key + "' is required");

    SweepSpec spec;
    spec.schema_version = detail::scalar_as<int>(source, root["schema_version"], "schema_version");
    if (spec.schema_version != sweep_schema_version)
        throw ConfigError(detail::where(source, root["schema_version"]) + ": unsupported schema_version " +
                          std::to_string(spec.schema_version));
    spec.target = detail::scalar_as<std::string>(source, root["target"], "target");
    if (!target_registry().count(spec.target))
        throw ConfigError(detail::where(source, root["target"]) + ": unknown target '" + spec.target + "'");

    if (const auto fixed = root["fixed"]) {
        if (!fixed.IsMap()) throw ConfigError(detail::where(source, fixed) + ": 'fixed' must be a mapping");
        ParameterSet probe;
        for (const auto& kv : fixed) {
            const auto key = kv.first.as<std::string>();
            const auto value = detail::scalar_as<std::string>(source, kv.second, "fixed." + key);
            try {
                set_parameter(probe, key, value);
            } catch (const UsageError& e) {
                throw ConfigError(detail::where(source, kv.first) + ": fixed." + key + ": " + e.what());
            }
            spec.fixed[key] = value;
        }
    }

    const auto axes = root["axes"];
    if (!axes.IsSequence() || axes.size() < 1 || axes.size() > 2)
        throw ConfigError(detail::where(source, axes) + ": 'axes' must list one or two axes");
    for (std::size_t i = 0; i < axes.size(); ++i) spec.axes.push_back(detail::parse_axis(source, axes[i], i));
    if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name)
        throw ConfigError(detail::where(source, axes[1]) + ": axes must name different parameters");

    spec.output = detail::scalar_as<std::string>(source, root["output"], "output");
    if (spec.output.empty()) throw ConfigError(detail::where(source, root["output"]) + ": 'output' is empty");
    return spec;
}

inline std::string run_sweep(const SweepSpec& spec)
{
    const auto& target = target_registry().at(spec.target);
    const ParameterSet base = spec.base_parameters();
    std::ostringstream out;
    std::vector<csv::Cell> header;
    for (const auto& a : spec.axes) header.emplace_back(a.name);
    for (const auto& c : target.columns) header.emplace_back(c);
    csv::write_row(out, header);

    auto emit = [&](const std::vector<double>& point) {
        ParameterSet p = base;
        for (std::size_t i = 0; i < point.size(); ++i) set_numeric_parameter(p, spec.axes[i].name, point[i]);
        std::vector<csv::Cell> row(point.begin(), point.end());
        for (double v : target.evaluate(p)) row.emplace_back(v);
        csv::write_row(out, row);
    };
    const auto first = spec.axes[0].values();
    if (spec.axes.size() == 1) {
        for (double x : first) emit({x});
    } else {
        const auto second = spec.axes[1].values();
        for (double x : first)
            for (double y : second) emit({x, y});
    }
    return out.str();
}

} // namespace eotrans::app
