#pragma once

// Figure reproductions as CSV tables. Every figure starts from the design
// point, applies its own defaults, then the caller's overrides.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../converter.hpp"
#include "../csv.hpp"
#include "../entanglement.hpp"
#include "../numeric.hpp"
#include "../qed_readout.hpp"
#include "../sensing.hpp"
#include "parameters.hpp"

namespace eotrans::app {

struct GridDefault {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
    bool log = false;
};

inline std::vector<double> resolve_grid(const ParameterSet& p, const GridDefault& d)
{
    const double lo = std::isnan(p.grid_min) ? d.min : p.grid_min;
    const double hi = std::isnan(p.grid_max) ? d.max : p.grid_max;
    const std::size_t n = p.grid_count ? static_cast<std::size_t>(p.grid_count) : d.count;
    if (n < 2) throw UsageError("grid_count must be at least 2");
    if (!(lo < hi)) throw UsageError("grid_min must be below grid_max");
    if (d.log && !(lo > 0.0)) throw UsageError("grid_min must be positive on a log grid");
    return d.log ? numeric::logspace(lo, hi, n) : numeric::linspace(lo, hi, n);
}

// Adds the configured pump power so the table has a row at the operating point.
inline std::vector<double> with_operating_power(std::vector<double> grid, double power)
{
    if (power >= grid.front() && power <= grid.back() && std::find(grid.begin(), grid.end(), power) == grid.end()) {
        grid.push_back(power);
        std::sort(grid.begin(), grid.end());
    }
    return grid;
}

namespace figures {

inline std::string coupling_table(const ParameterSet& p)
{
    const auto rows = sweep_optical_coupling(operating_point(p), resolve_grid(p, {0.1, 10.0, 401, true}));
    std::ostringstream out;
    out << "ratio,n_pump,cooperativity,efficiency\n";
    for (const auto& r : rows) csv::write_row(out, {r.ratio, r.pump_photons, r.cooperativity, r.efficiency});
    return out.str();
}

inline std::string power_table(const ParameterSet& p)
{
    const auto grid = with_operating_power(resolve_grid(p, {1e-6, 1e-1, 101, true}), p.design.pump_power_w);
    const auto rows = sweep_pump_power(operating_point(p), grid);
    std::ostringstream out;
    out << "power_W,n_pump,cooperativity,efficiency\n";
    for (const auto& r : rows) csv::write_row(out, {r.power, r.pump_photons, r.cooperativity, r.efficiency});
    return out.str();
}

inline std::string detuning_table(const ParameterSet& p)
{
    const auto op = operating_point(p);
    std::ostringstream out;
    out << "detuning_Hz,efficiency\n";
    for (double f : resolve_grid(p, {-3e6, 3e6, 601, false}))
        csv::write_row(out, {f, efficiency_detuned(op, hz_to_angular(f))});
    return out.str();
}

inline std::string dispersive_map(const ParameterSet& p)
{
    std::ostringstream out;
    out << "q_b,chi_Hz,efficiency\n";
    const auto chis = resolve_grid(p, {-500e3, 500e3, 201, false});
    for (double qb : numeric::logspace(1e4, 1e6, 21)) {
        auto d = p.design;
        d.q_b = qb;
        const auto op = presets::make_operating_point(d);
        for (double chi : chis) csv::write_row(out, {qb, chi, readout_efficiency(op, hz_to_angular(chi))});
    }
    return out.str();
}

inline std::string entanglement_table(const ParameterSet& p)
{
    const auto op = operating_point(p);
    const auto powers = resolve_grid(p, {1e-7, 1e-1, 121, true});
    R0Model model{p.r0_model, {}};
    if (model.kind == R0ModelKind::direct)
        for (double power : powers) model.r0_per_row.push_back(p.r0_per_w * power);
    const auto sweep = sweep_power(protocol(p, 0.0), op, powers, model);
    const bool mc = p.mc_attempts > 0;

    std::ostringstream out;
    out << "power_W,r0_per_s,rate_per_s,infidelity,scheme,r0_model";
    if (mc) out << ",rate_stderr,infidelity_stderr,attempts,seed";
    out << '\n';
    const CounterRng row_seeds(p.seed);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const auto& r = sweep.rows[i];
        std::vector<csv::Cell> cells{r.power, r.r0, r.rate, r.infidelity, to_string(sweep.scheme), to_string(sweep.model)};
        if (mc) {
            const std::uint64_t seed = row_seeds.bits(i);
            const auto m = monte_carlo(protocol(p, r.r0), p.mc_attempts, seed);
            cells = {r.power, r.r0, m.rate, m.fidelity_defined ? m.infidelity : std::nan(""), to_string(sweep.scheme),
                     to_string(sweep.model), m.rate_stderr, m.infidelity_stderr,
                     std::to_string(m.attempts), std::to_string(seed)};
        }
        csv::write_row(out, cells);
    }
    return out.str();
}

inline std::string noise_table(const ParameterSet& p)
{
    NoiseSweepConfig cfg;
    cfg.thermal_photons = p.thermal_photons;
    cfg.detuning = hz_to_angular(p.detuning_hz);
    cfg.convention = p.kappa_convention;
    cfg.bae_form = p.bae_form;
    const auto rows = sweep_noise_vs_power(cfg, operating_point(p), resolve_grid(p, {1e-6, 1.0, 121, true}));
    std::ostringstream out;
    out << "power_W,cooperativity,s_standard_over_sql,s_bae_over_sql,detuning_Hz\n";
    for (const auto& r : rows)
        csv::write_row(out, {r.power, r.cooperativity, r.standard_over_sql, r.bae_over_sql, angular_to_hz(r.detuning)});
    return out.str();
}

} // namespace figures

struct FigureDefinition {
    std::function<void(ParameterSet&)> defaults;
    std::function<std::string(const ParameterSet&)> table;
    bool stochastic = false; // only when Monte Carlo columns are requested
};

inline const std::map<std::string, FigureDefinition>& figure_registry()
{
    auto none = [](ParameterSet&) {};
    static const std::map<std::string, FigureDefinition> figs = {
        {"fig3c", {none, figures::coupling_table}},
        {"fig3d", {none, figures::coupling_table}},
        {"fig3e", {none, figures::coupling_table}},
        {"fig4a", {none, figures::power_table}},
        {"fig4b", {none, figures::power_table}},
        {"fig4c", {none, figures::detuning_table}},
        {"fig5b", {none, figures::dispersive_map}},
        {"fig6a", {none, figures::entanglement_table, true}},
        {"fig6b", {none, figures::entanglement_table, true}},
        {"fig7", {[](ParameterSet& p) { p.design.q_a = 1e8; }, figures::noise_table}},
    };
    return figs;
}

inline std::vector<std::string> figure_names()
{
    std::vector<std::string> names;
    for (const auto& [name, def] : figure_registry()) names.push_back(name);
    return names;
}

struct FigureRun {
    ParameterSet parameters;
    nlohmann::json config; // canonical, feeds the manifest digest
    std::string csv;
    bool stochastic = false;
};

inline FigureRun run_figure(const std::string& name, const std::vector<std::string>& overrides)
{
    const auto it = figure_registry().find(name);
    if (it == figure_registry().end()) throw UsageError("unknown figure '" + name + "'");
    FigureRun run;
    it->second.defaults(run.parameters);
    for (const auto& a : overrides) apply_assignment(run.parameters, a);
    run.config = {{"figure", name}, {"parameters", to_json(run.parameters)}};
    run.stochastic = it->second.stochastic && run.parameters.mc_attempts > 0;
    run.csv = it->second.table(run.parameters);
    return run;
}

} // namespace eotrans::app
