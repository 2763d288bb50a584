#pragma once

// Cross-module invariant suite behind `validate`.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../converter.hpp"
#include "../dynamics_oracle.hpp"
#include "../electrooptic.hpp"
#include "../entanglement.hpp"
#include "../numeric.hpp"
#include "../presets.hpp"
#include "../qed_readout.hpp"
#include "../sensing.hpp"
#include "manifest.hpp"

namespace eotrans::app {

/// abs: |obs - exp| <= tol; rel: |obs - exp| <= tol |exp|;
/// ge: obs >= exp - tol; le: obs <= exp + tol.
enum class Relation { abs, rel, ge, le };

inline const char* to_string(Relation r)
{
    switch (r) {
    case Relation::abs: return "abs";
    case Relation::rel: return "rel";
    case Relation::ge: return "ge";
    case Relation::le: return "le";
    }
    return "";
}

struct Check {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::abs;

    bool passed() const
    {
        if (std::isnan(observed)) return false;
        switch (relation) {
        case Relation::abs: return std::abs(observed - expected) <= tolerance;
        case Relation::rel: return std::abs(observed - expected) <= tolerance * std::abs(expected);
        case Relation::ge: return observed >= expected - tolerance;
        case Relation::le: return observed <= expected + tolerance;
        }
        return false;
    }
};

struct ValidateOptions {
    bool double_dielectric = false; // fault injection: count Q_d twice
};

struct ValidationReport {
    std::vector<Check> checks;
    ValidateOptions options;

    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
    }

    nlohmann::json to_json() const
    {
        nlohmann::json out;
        out["toolkit_version"] = toolkit_version;
        out["faults"] = nlohmann::json::array();
        if (options.double_dielectric) out["faults"].push_back("double-dielectric");
        auto& list = out["checks"] = nlohmann::json::array();
        for (const auto& c : checks)
            list.push_back({{"name", c.name}, {"observed", c.observed}, {"expected", c.expected},
                            {"tolerance", c.tolerance}, {"relation", to_string(c.relation)}, {"passed", c.passed()}});
        out["passed"] = passed();
        return out;
    }
};

namespace checks {

inline OperatingPoint random_point(std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> log_ratio(std::log(0.1), std::log(5.0));
    std::uniform_real_distribution<double> log_unit(0.0, std::log(10.0));
    std::uniform_real_distribution<double> log_c(std::log(0.01), std::log(2.0));
    const double ga0 = 1e6 * std::exp(log_unit(gen));
    const double gb0 = 1e5 * std::exp(log_unit(gen));
    const ModeParams a{1.2e15, ga0, ga0 * std::exp(log_ratio(gen))};
    const ModeParams b{5.6e10, gb0, gb0 * std::exp(log_ratio(gen))};
    const ModeParams pump{1.2e15 - 5.6e10, a.intrinsic_rate(), a.coupling_rate()};
    const OperatingPoint op{a, pump, b, 300.0, PumpDrive{1.0, 0.3 * ga0}};
    return op.with_pump_power(power_for_cooperativity(op, std::exp(log_c(gen))));
}

inline std::vector<Check> converter_checks()
{
    std::vector<Check> out;
    const auto design = presets::design_point();
    const auto calibrated = design.with_pump_power(power_for_cooperativity(design, 0.58));
    out.push_back({"efficiency_at_c_0.58", efficiency(calibrated).total_efficiency, 0.5, 0.005, Relation::abs});

    const auto grid = numeric::logspace(0.1, 10.0, 201);
    const auto best = optimal_optical_coupling(design, CouplingObjective::cooperativity, grid);
    out.push_back({"cooperativity_optimal_coupling_ratio", best.argument, 0.7, 0.1, Relation::abs});

    // Bandwidth approaches gamma_b (1 + C) when the optical mode is much broader.
    const ModeParams a{1.2e15, 1e9, 1e9};
    const ModeParams b{5.6e10, 1e5, 1e5};
    OperatingPoint wide{a, a, b, 300.0, PumpDrive{1.0, 0.0}};
    wide = wide.with_pump_power(power_for_cooperativity(wide, 0.58));
    out.push_back({"bandwidth_broadened_linewidth", bandwidth(wide) / (b.total_rate() * 1.58), 1.0, 0.05, Relation::rel});
    return out;
}

inline std::vector<Check> oracle_checks()
{
    std::mt19937_64 gen(20261015);
    std::uniform_real_distribution<double> shift(-3.0, 3.0);
    double plain = 0.0, dispersive = 0.0;
    for (int i = 0; i < 6; ++i) {
        const auto op = random_point(gen);
        const double horizon = 2000.0 * eotrans::detail::convergence_window(op);
        const double delta = shift(gen) * op.microwave().total_rate();
        const DriveTone drive{{1.0, 0.0}, delta};
        const auto r = integrate(op, {}, drive, horizon, 1e-10);
        const double closed = efficiency_detuned(op, delta);
        plain = std::max(plain, r.converged ? std::abs(conversion_efficiency(op, r, drive) / closed - 1.0) : INFINITY);

        const double chi = 3.0 * shift(gen) * op.microwave().total_rate();
        const DriveTone on{{1.0, 0.0}, 0.0};
        const auto d = integrate_dispersive(op, chi, on, horizon, 1e-10);
        const double closed_chi = readout_efficiency(op, chi);
        dispersive = std::max(dispersive,
                              d.converged ? std::abs(conversion_efficiency(op, d, on) / closed_chi - 1.0) : INFINITY);
    }
    return {{"oracle_detuned_efficiency_max_rel_error", plain, 0.0, 1e-6, Relation::le},
            {"oracle_dispersive_efficiency_max_rel_error", dispersive, 0.0, 1e-6, Relation::le}};
}

inline std::vector<Check> readout_checks()
{
    const auto op = presets::design_point();
    return {{"readout_half_width_ratio", readout_efficiency(op, readout_half_width(op)) / readout_efficiency(op, 0.0), 0.5,
             1e-9, Relation::abs}};
}

inline std::vector<Check> entanglement_checks()
{
    std::vector<Check> out;
    double worst_partition = 0.0, worst_order = INFINITY;
    for (double x : numeric::linspace(0.0, 5.0, 501)) {
        EntanglementProtocolParams p;
        p.generation_rate = x / p.attempt_duration;
        const auto& q = blue_sideband(p).probabilities;
        const double sum = q.at("p00") + q.at("p10") + q.at("p01") + q.at("p11") + q.at("p_multi_single") +
                           q.at("p_single_multi") + q.at("p_multi_multi");
        worst_partition = std::max(worst_partition, std::abs(sum - 1.0));
        if (x > 0.0 && x <= 2.0) {
            auto r = p;
            r.scheme = SidebandScheme::red;
            worst_order = std::min(worst_order, red_sideband(r).fidelity - blue_sideband(p).fidelity);
        }
    }
    out.push_back({"blue_partition_of_unity", worst_partition, 0.0, 1e-12, Relation::le});
    out.push_back({"red_minus_blue_fidelity_min", worst_order, 0.0, 0.0, Relation::ge});

    EntanglementProtocolParams p;
    p.generation_rate = 1e4;
    const auto exact = blue_sideband(p);
    out.push_back({"blue_infidelity_at_0.01", exact.infidelity, 0.00997, 1e-4, Relation::abs});
    const auto mc = monte_carlo(p, 200000, 1);
    const double heralded = 200000.0 * (1.0 - exact.probabilities.at("p00"));
    const double se = std::sqrt(exact.fidelity * exact.infidelity / heralded);
    out.push_back({"monte_carlo_infidelity_z", std::abs(mc.infidelity - exact.infidelity) / se, 0.0, 4.0, Relation::le});
    return out;
}

inline std::vector<Check> sensing_checks()
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double violations = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SensingParams s;
        s.kappa_a = std::pow(10.0, 5.0 + 4.0 * u(gen));
        s.kappa_b = std::pow(10.0, 3.0 + 4.0 * u(gen));
        s.thermal_photons = 10.0 * u(gen);
        s.pump_strength = std::pow(10.0, 6.0 + 24.0 * u(gen));
        const double delta = (2.0 * u(gen) - 1.0) * std::pow(10.0, 3.0 + 6.0 * u(gen));
        const auto f = noise_floors(s, delta);
        if (noise_standard(s, delta) < (f.rf + f.sql) * (1.0 - 1e-12)) violations += 1.0;
    }
    SensingParams s;
    s.kappa_a = 1e8;
    s.kappa_b = 1e6;
    s.pump_strength = optimal_pump_strength(s, 0.0);
    const double minimum = noise_standard(s, 0.0);
    const auto at_threshold = s.with_cooperativity(s.kappa_a / s.kappa_b);
    const auto floors = noise_floors(at_threshold, 0.0);
    return {{"sensing_floor_violations", violations, 0.0, 0.0, Relation::le},
            {"sensing_pump_minimum_over_kappa_b", minimum / s.kappa_b, 4.0, 1e-9, Relation::rel},
            {"bae_threshold_over_floor", noise_bae(at_threshold, 0.0) / (floors.rf + floors.sql), 1.0, 1e-9,
             Relation::rel}};
}

inline std::vector<Check> electrooptic_checks(const ValidateOptions& opts)
{
    std::vector<Check> out;
    const auto uniform = sample_profile([](double) { return 1e10; }, 64);
    const double w_opt = hz_to_angular(192.43e12);
    const double g = g_eo_from_profile(uniform, {}, w_opt, w_opt, hz_to_angular(8.93e9)).magnitude();
    out.push_back({"g_eo_uniform_field_Hz", angular_to_hz(g), 88.0, 0.01, Relation::rel});
    out.push_back({"dielectric_q", dielectric_q(0.96, 1e-5), 1.0417e5, 1e-3, Relation::rel});

    QBudget only_dielectric;
    only_dielectric.participation = 0.96;
    only_dielectric.loss_tangent = 1e-5;
    only_dielectric.count_dielectric_twice = opts.double_dielectric;
    out.push_back({"loaded_q_dielectric_only", loaded_q(only_dielectric) / dielectric_q(0.96, 1e-5), 1.0, 1e-12,
                   Relation::rel});

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double bound_violations = 0.0;
    for (int i = 0; i < 1000; ++i) {
        QBudget b;
        b.participation = 0.05 + 0.95 * u(gen);
        b.loss_tangent = std::pow(10.0, -7.0 + 4.0 * u(gen));
        b.intrinsic_q = std::pow(10.0, 4.0 + 6.0 * u(gen));
        b.input_coupler_q = std::pow(10.0, 4.0 + 6.0 * u(gen));
        b.output_coupler_q = std::pow(10.0, 4.0 + 6.0 * u(gen));
        b.count_dielectric_twice = opts.double_dielectric;
        const double smallest = std::min({dielectric_q(b.participation, b.loss_tangent), b.intrinsic_q,
                                          b.input_coupler_q, b.output_coupler_q});
        if (loaded_q(b) > smallest * (1.0 + 1e-12)) bound_violations += 1.0;
    }
    out.push_back({"loaded_q_upper_bound_violations", bound_violations, 0.0, 0.0, Relation::le});
    return out;
}

} // namespace checks

inline ValidationReport validate(const ValidateOptions& opts = {})
{
    ValidationReport report;
    report.options = opts;
    auto add = [&](std::vector<Check> more) { report.checks.insert(report.checks.end(), more.begin(), more.end()); };
    add(checks::converter_checks());
    add(checks::oracle_checks());
    add(checks::readout_checks());
    add(checks::entanglement_checks());
    add(checks::sensing_checks());
    add(checks::electrooptic_checks(opts));
    return report;
}

} // namespace eotrans::app
