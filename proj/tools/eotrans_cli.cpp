// eotrans_cli: figures, sweeps, electro-optic coupling from a field profile,
// and the invariant suite.
//
// Exit codes: 0 success, 1 validation failure, 2 usage/config error, 3 I/O error.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eotrans/app/digest.hpp"
#include "eotrans/app/figures.hpp"
#include "eotrans/app/manifest.hpp"
#include "eotrans/app/sweep.hpp"
#include "eotrans/app/validate.hpp"
#include "eotrans/electrooptic.hpp"

namespace fs = std::filesystem;
using namespace eotrans;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string join(const std::string& dir, const std::string& file)
{
    if (dir.empty() || fs::path(file).is_absolute()) return file;
    return (fs::path(dir) / file).string();
}

void ensure_directory(const std::string& dir)
{
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw app::IoError("cannot create directory '" + dir + "': " + ec.message());
}

int run_figure(const std::string& name, const std::vector<std::string>& sets, const std::string& out_dir)
{
    const auto start = std::chrono::steady_clock::now();
    const auto run = app::run_figure(name, sets);
    ensure_directory(out_dir);
    const std::string path = join(out_dir, name + ".csv");
    app::RunManifest m;
    m.command = "figure";
    m.config = run.config;
    if (run.stochastic) m.seed = run.parameters.seed;
    m.outputs.push_back(app::write_output(path, run.csv));
    m.wall_time_s = seconds_since(start);
    app::write_manifest(app::manifest_path_for(path), m);
    std::cout << path << '\n';
    return exit_ok;
}

int run_sweep(const std::string& config_path, const std::string& out_dir)
{
    const auto start = std::chrono::steady_clock::now();
    const auto spec = app::parse_sweep_spec(app::read_file(config_path), config_path);
    const std::string csv = app::run_sweep(spec);
    const std::string path = join(out_dir, spec.output);
    ensure_directory(fs::path(path).parent_path().string());
    app::RunManifest m;
    m.command = "sweep";
    m.config = spec.canonical();
    if (spec.stochastic()) m.seed = spec.base_parameters().seed;
    m.outputs.push_back(app::write_output(path, csv));
    m.wall_time_s = seconds_since(start);
    app::write_manifest(app::manifest_path_for(path), m);
    std::cout << path << '\n';
    return exit_ok;
}

int run_geo(const std::string& profile_path, double energy, double optical_hz, double microwave_hz)
{
    std::istringstream in(app::read_file(profile_path));
    const auto profile = read_field_profile(in, energy);
    const double wa = hz_to_angular(optical_hz);
    const auto g = g_eo_from_profile(profile, {}, wa, wa, hz_to_angular(microwave_hz));
    nlohmann::json out;
    out["profile"] = profile_path;
    out["samples"] = profile.samples().size();
    out["stored_energy_J"] = energy;
    out["loop_integral_V_per_m"] = profile.loop_integral();
    out["g_eo_Hz"] = angular_to_hz(g.signed_value);
    out["g_eo_magnitude_Hz"] = angular_to_hz(g.magnitude());
    std::cout << out.dump(2) << '\n';
    return exit_ok;
}

int run_validate(const std::vector<std::string>& faults, const std::string& report_path)
{
    app::ValidateOptions opts;
    for (const auto& f : faults) {
        if (f == "double-dielectric") opts.double_dielectric = true;
        else throw app::UsageError("unknown fault '" + f + "'");
    }
    const auto report = app::validate(opts);
    const std::string text = report.to_json().dump(2) + "\n";
    if (!report_path.empty()) app::write_file(report_path, text);
    std::cout << text;
    return report.passed() ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"Electro-optic transducer modeling toolkit"};
    cli.require_subcommand(1);
    cli.set_version_flag("--version", std::string("eotrans ") + app::toolkit_version);

    std::string figure_name, out_dir;
    std::vector<std::string> sets;
    auto* figure = cli.add_subcommand("figure", "Write a figure's CSV table and manifest");
    figure->add_option("name", figure_name, "Figure name")->required()->check(CLI::IsMember(app::figure_names()));
    figure->add_option("--set", sets, "Parameter override key=value (repeatable)");
    figure->add_option("--out", out_dir, "Output directory");

    std::string config_path, sweep_out;
    auto* sweep = cli.add_subcommand("sweep", "Run a YAML sweep config");
    sweep->add_option("config", config_path, "Sweep config")->required();
    sweep->add_option("--out", sweep_out, "Directory for relative output paths");

    std::string profile_path;
    double energy = 1.0, optical_hz = 192.43e12, microwave_hz = 8.93e9;
    auto* geo = cli.add_subcommand("geo", "Electro-optic coupling rate from a field profile");
    geo->add_option("profile", profile_path, "CSV of phi_degrees,field_V_per_m")->required();
    geo->add_option("--energy", energy, "Stored microwave energy, J")->capture_default_str();
    geo->add_option("--optical-frequency-hz", optical_hz, "Pump and signal frequency")->capture_default_str();
    geo->add_option("--microwave-frequency-hz", microwave_hz, "Microwave frequency")->capture_default_str();

    std::vector<std::string> faults;
    std::string report_path;
    auto* validate = cli.add_subcommand("validate", "Run the invariant suite");
    validate->add_option("--fault", faults, "Inject a fault (double-dielectric)");
    validate->add_option("--report", report_path, "Also write the JSON report here");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return exit_usage;
    }

    try {
        if (*figure) return run_figure(figure_name, sets, out_dir);
        if (*sweep) return run_sweep(config_path, sweep_out);
        if (*geo) return run_geo(profile_path, energy, optical_hz, microwave_hz);
        if (*validate) return run_validate(faults, report_path);
    } catch (const app::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const app::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) { // InvalidParameter, InvalidProfile, InvalidThreshold
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
