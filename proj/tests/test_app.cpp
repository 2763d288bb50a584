#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "eotrans/app/digest.hpp"
#include "eotrans/app/figures.hpp"
#include "eotrans/app/manifest.hpp"
#include "eotrans/app/sweep.hpp"
#include "eotrans/app/validate.hpp"

using namespace eotrans;
using namespace eotrans::app;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string header_of(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

std::vector<double> column(const std::vector<std::vector<std::string>>& rows, std::size_t index)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(std::stod(rows[i].at(index)));
    return out;
}

} // namespace

TEST(Parameters, AssignmentsUseBoundaryUnits)
{
    ParameterSet p;
    apply_assignment(p, "q_b=2e5");
    apply_assignment(p, "pump_detuning_Hz=5e6");
    apply_assignment(p, "scheme=red");
    apply_assignment(p, "q_convention=loaded");
    EXPECT_EQ(p.design.q_b, 2e5);
    EXPECT_EQ(p.scheme, SidebandScheme::red);
    EXPECT_NEAR(operating_point(p).pump().detuning, two_pi * 5e6, 1e-6);
    EXPECT_EQ(to_json(p).at("q_convention"), "loaded");
}

TEST(Parameters, RejectsMalformedAssignments)
{
    ParameterSet p;
    EXPECT_THROW(apply_assignment(p, "q_b"), UsageError);
    EXPECT_THROW(apply_assignment(p, "=3"), UsageError);
    EXPECT_THROW(apply_assignment(p, "unknown=3"), UsageError);
    EXPECT_THROW(apply_assignment(p, "q_b=abc"), UsageError);
    EXPECT_THROW(apply_assignment(p, "q_b=1e5x"), UsageError);
    EXPECT_THROW(apply_assignment(p, "scheme=green"), UsageError);
    EXPECT_THROW(apply_assignment(p, "mc_attempts=1.5"), UsageError);
}

TEST(Figures, HeadersAreExact)
{
    const std::map<std::string, std::string> expected = {
        {"fig3c", "ratio,n_pump,cooperativity,efficiency"},
        {"fig3d", "ratio,n_pump,cooperativity,efficiency"},
        {"fig3e", "ratio,n_pump,cooperativity,efficiency"},
        {"fig4a", "power_W,n_pump,cooperativity,efficiency"},
        {"fig4b", "power_W,n_pump,cooperativity,efficiency"},
        {"fig4c", "detuning_Hz,efficiency"},
        {"fig5b", "q_b,chi_Hz,efficiency"},
        {"fig6a", "power_W,r0_per_s,rate_per_s,infidelity,scheme,r0_model"},
        {"fig6b", "power_W,r0_per_s,rate_per_s,infidelity,scheme,r0_model"},
        {"fig7", "power_W,cooperativity,s_standard_over_sql,s_bae_over_sql,detuning_Hz"},
    };
    ASSERT_EQ(figure_names().size(), expected.size());
    for (const auto& [name, header] : expected) EXPECT_EQ(header_of(run_figure(name, {}).csv), header) << name;
}

TEST(Figures, MonteCarloColumnsWhenRequested)
{
    const auto run = run_figure("fig6a", {"mc_attempts=2000", "grid_count=3"});
    EXPECT_EQ(header_of(run.csv),
              "power_W,r0_per_s,rate_per_s,infidelity,scheme,r0_model,rate_stderr,infidelity_stderr,attempts,seed");
    EXPECT_TRUE(run.stochastic);
    EXPECT_EQ(parse_csv(run.csv).size(), 4u);
}

TEST(Figures, OperatingPowerRowMatchesEfficiencyIdentity)
{
    const auto rows = parse_csv(run_figure("fig4b", {}).csv);
    const auto op = presets::design_point();
    const double extraction = op.optical_signal().extraction_ratio() * op.microwave().extraction_ratio();
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::stod(rows[i][0]) != 140e-6) continue;
        found = true;
        const double c = std::stod(rows[i][2]);
        const double eta = std::stod(rows[i][3]);
        EXPECT_NEAR(eta, extraction * 4.0 * c / ((1.0 + c) * (1.0 + c)), 1e-12);
    }
    EXPECT_TRUE(found);
}

TEST(Figures, CooperativityPeaksNearSlightUndercoupling)
{
    const auto rows = parse_csv(run_figure("fig3d", {}).csv);
    const auto ratio = column(rows, 0);
    const auto c = column(rows, 2);
    const auto best = std::max_element(c.begin(), c.end()) - c.begin();
    EXPECT_GE(ratio[best], 0.6);
    EXPECT_LE(ratio[best], 0.8);
}

TEST(Figures, DirectModelInfidelityIncreasesWithPower)
{
    const auto rows = parse_csv(run_figure("fig6b", {"r0_model=direct"}).csv);
    const auto inf = column(rows, 3);
    for (std::size_t i = 1; i < inf.size(); ++i) EXPECT_GE(inf[i], inf[i - 1]);
    EXPECT_EQ(rows[1][5], "direct");
}

TEST(Figures, Fig7UsesHigherOpticalQUnlessOverridden)
{
    EXPECT_EQ(run_figure("fig7", {}).parameters.design.q_a, 1e8);
    EXPECT_EQ(run_figure("fig7", {"q_a=1e7"}).parameters.design.q_a, 1e7);
}

TEST(Figures, GridOverridesAndValidation)
{
    const auto rows = parse_csv(run_figure("fig4c", {"grid_min=-1e5", "grid_max=1e5", "grid_count=5"}).csv);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[1][0], "-100000");
    EXPECT_EQ(rows[3][0], "0");
    EXPECT_THROW(run_figure("fig4c", {"grid_min=1", "grid_max=0"}), UsageError);
    EXPECT_THROW(run_figure("fig4a", {"grid_min=-1"}), UsageError);
    EXPECT_THROW(run_figure("fig9", {}), UsageError);
}

TEST(Figures, Deterministic)
{
    for (const auto& name : figure_names()) EXPECT_EQ(run_figure(name, {}).csv, run_figure(name, {}).csv) << name;
    const auto a = run_figure("fig6a", {"mc_attempts=5000", "grid_count=4", "seed=9"});
    const auto b = run_figure("fig6a", {"mc_attempts=5000", "grid_count=4", "seed=9"});
    EXPECT_EQ(a.csv, b.csv);
}

TEST(Sweep, PassthroughReturnsAxisVerbatim)
{
    const auto spec = parse_sweep_spec("schema_version: 1\ntarget: passthrough\n"
                                       "axes:\n  - {name: pump_power_W, min: 1e-6, max: 1e-2, count: 5, scale: log}\n"
                                       "output: p.csv\n",
                                       "inline");
    const auto rows = parse_csv(run_sweep(spec));
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], std::vector<std::string>{"pump_power_W"});
    const auto grid = numeric::logspace(1e-6, 1e-2, 5);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(std::stod(rows[i + 1][0]), grid[i]);
}

TEST(Sweep, TwoAxesAreAxisMajor)
{
    const auto spec = parse_sweep_spec("schema_version: 1\ntarget: passthrough\naxes:\n"
                                       "  - {name: q_b, min: 1, max: 3, count: 3}\n"
                                       "  - {name: chi_Hz, min: 0, max: 1, count: 2}\n"
                                       "output: o.csv\n",
                                       "inline");
    EXPECT_EQ(run_sweep(spec), "q_b,chi_Hz\n1,0\n1,1\n2,0\n2,1\n3,0\n3,1\n");
}

TEST(Sweep, BandwidthWidensAsMicrowaveQDecreases)
{
    const auto spec = parse_sweep_spec(read_file(std::string(EOTRANS_SOURCE_DIR) + "/configs/bandwidth_vs_qb.yaml"),
                                       "bandwidth_vs_qb.yaml");
    const auto rows = parse_csv(run_sweep(spec));
    const auto qb = column(rows, 0);
    const auto fwhm = column(rows, 1);
    for (std::size_t i = 1; i < qb.size(); ++i) {
        ASSERT_GT(qb[i], qb[i - 1]);
        EXPECT_LT(fwhm[i], fwhm[i - 1]);
    }
}

TEST(Sweep, SampleConfigsParseAndRun)
{
    for (const char* name : {"bandwidth_vs_qb", "efficiency_map", "herald_monte_carlo", "oracle_check"}) {
        const std::string path = std::string(EOTRANS_SOURCE_DIR) + "/configs/" + name + ".yaml";
        const auto spec = parse_sweep_spec(read_file(path), path);
        const std::string first = run_sweep(spec);
        EXPECT_EQ(first, run_sweep(spec)) << name;
    }
}

TEST(Sweep, OracleTargetAgreesWithClosedForm)
{
    const auto spec = parse_sweep_spec(read_file(std::string(EOTRANS_SOURCE_DIR) + "/configs/oracle_check.yaml"), "o");
    const auto rows = parse_csv(run_sweep(spec));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double td = std::stod(rows[i][1]);
        const double cf = std::stod(rows[i][2]);
        EXPECT_NEAR(td, cf, 1e-6 * cf);
    }
}

TEST(Sweep, DigestIgnoresFormatting)
{
    const auto a = parse_sweep_spec("schema_version: 1\ntarget: herald\nfixed: {seed: 3, r0_per_s: 1e4}\n"
                                    "axes: [{name: reset_time_s, min: 1e-7, max: 1e-5, count: 3, scale: log}]\n"
                                    "output: h.csv\n",
                                    "a");
    const auto b = parse_sweep_spec("# comment\nschema_version: 1\noutput: h.csv\ntarget: herald\n"
                                    "fixed:\n  r0_per_s: 1e4\n  seed: 3\n"
                                    "axes:\n  - name: reset_time_s\n    scale: log\n    min: 1e-7\n    max: 1e-5\n    count: 3\n",
                                    "b");
    RunManifest ma, mb;
    ma.config = a.canonical();
    mb.config = b.canonical();
    EXPECT_EQ(ma.config_digest(), mb.config_digest());
    auto c = a;
    c.axes[0].count = 4;
    RunManifest mc;
    mc.config = c.canonical();
    EXPECT_NE(ma.config_digest(), mc.config_digest());
}

namespace {

std::string config_error(const std::string& text)
{
    try {
        parse_sweep_spec(text, "cfg.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Sweep, DiagnosticsNameLineAndField)
{
    const std::string head = "schema_version: 1\ntarget: efficiency\n";
    EXPECT_EQ(config_error(head + "axes:\n  - {name: q_b, min: 1e4, max: 1e6, count: 1}\noutput: o.csv\n"),
              "cfg.yaml:4: axes[0].count must be at least 2");
    EXPECT_EQ(config_error(head + "axes:\n  - {name: q_b, min: 0, max: 1e6, count: 3, scale: log}\noutput: o.csv\n"),
              "cfg.yaml:4: axes[0].min must be positive on a log scale");
    EXPECT_EQ(config_error(head + "axes:\n  - {name: q_b, min: 5, max: 1, count: 3}\noutput: o.csv\n"),
              "cfg.yaml:4: axes[0] needs min < max");
    EXPECT_EQ(config_error(head + "axes:\n  - {name: scheme, min: 0, max: 1, count: 3}\noutput: o.csv\n"),
              "cfg.yaml:4: axes[0].name 'scheme' is not a numeric parameter");
    EXPECT_EQ(config_error(head + "axes:\n  - {name: q_b, min: 1, max: 2, count: 3, scale: cubic}\noutput: o.csv\n"),
              "cfg.yaml:4: axes[0].scale must be linear or log");
    EXPECT_EQ(config_error("schema_version: 1\ntarget: nothing\naxes: []\noutput: o\n"),
              "cfg.yaml:2: unknown target 'nothing'");
    EXPECT_EQ(config_error("schema_version: 2\ntarget: efficiency\naxes: []\noutput: o\n"),
              "cfg.yaml:1: unsupported schema_version 2");
    EXPECT_EQ(config_error(head + "fixed:\n  q_b: fast\naxes: []\noutput: o\n"),
              "cfg.yaml:4: fixed.q_b: parameter 'q_b': 'fast' is not a number");
    EXPECT_EQ(config_error(head + "extra: 1\naxes: []\noutput: o\n"), "cfg.yaml:3: unknown key 'extra'");
    EXPECT_EQ(config_error(head + "axes: []\noutput: o\n"), "cfg.yaml:3: 'axes' must list one or two axes");
    EXPECT_EQ(config_error(head + "output: o\n"), "cfg.yaml: 'axes' is required");
    EXPECT_EQ(config_error("schema_version: 1\ntarget: [unclosed\n").rfind("cfg.yaml:", 0), 0u);
}

TEST(Sweep, MonteCarloTargetNeedsAttempts)
{
    const auto spec = parse_sweep_spec("schema_version: 1\ntarget: herald_monte_carlo\n"
                                       "axes: [{name: r0_per_s, min: 1, max: 2, count: 2}]\noutput: o.csv\n",
                                       "m");
    EXPECT_TRUE(spec.stochastic());
    EXPECT_THROW(run_sweep(spec), UsageError);
}

TEST(Digest, KnownVector)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, RecordsConfigSeedAndOutputs)
{
    RunManifest m;
    m.command = "figure";
    m.config = {{"figure", "fig6a"}};
    m.seed = 42;
    m.outputs.push_back({"x.csv", sha256_hex("data"), 4});
    const auto j = m.to_json();
    EXPECT_EQ(j.at("toolkit_version"), toolkit_version);
    EXPECT_EQ(j.at("config_digest"), sha256_hex(m.config.dump()));
    EXPECT_EQ(j.at("seed"), 42);
    EXPECT_EQ(j.at("rng_algorithm"), "splitmix64-counter/1");
    EXPECT_EQ(j.at("outputs").at(0).at("bytes"), 4);
    m.seed.reset();
    EXPECT_TRUE(m.to_json().at("seed").is_null());
}

TEST(Validate, FreshSuitePasses)
{
    const auto report = validate();
    EXPECT_TRUE(report.passed());
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed()) << c.name << " observed " << c.observed;
    const auto j = report.to_json();
    for (const auto& c : j.at("checks")) {
        EXPECT_TRUE(c.contains("name"));
        EXPECT_TRUE(c.contains("tolerance"));
        EXPECT_TRUE(c.contains("observed"));
    }
}

TEST(Validate, DoubleDielectricFaultTripsOnlyLoadedQ)
{
    const auto report = validate({true});
    EXPECT_FALSE(report.passed());
    for (const auto& c : report.checks) EXPECT_EQ(c.passed(), c.name != "loaded_q_dielectric_only") << c.name;
}
