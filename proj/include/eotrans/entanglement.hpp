#pragma once

// Counting statistics of optically heralded entanglement between two remote
// transducers, for blue- and red-sideband pumping, plus a Monte Carlo
// simulation of the underlying Poisson process used to check the closed
// forms.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "converter.hpp"
#include "core_model.hpp"

namespace eotrans {

enum class SidebandScheme { blue, red };

inline const char* to_string(SidebandScheme s) { return s == SidebandScheme::blue ? "blue" : "red"; }

struct EntanglementProtocolParams {
    double generation_rate = 0.0;   // r_0, 1/s
    double attempt_duration = 1e-6; // dt, s
    double reset_time = 1e-6;       // t_r, s
    SidebandScheme scheme = SidebandScheme::blue;

    void validate() const
    {
        if (!(generation_rate >= 0.0) || !std::isfinite(generation_rate))
            throw InvalidParameter("generation rate must be non-negative");
        if (!(attempt_duration > 0.0)) throw InvalidParameter("attempt duration must be positive");
        if (!(reset_time >= 0.0)) throw InvalidParameter("reset time must be non-negative");
    }

    /// Mean number of generation events per cavity and attempt, r_0 dt.
    double mean_events() const { return generation_rate * attempt_duration; }
    double cycle_time() const { return attempt_duration + reset_time; }
};

/// Labelled probabilities. Blue: p0, p1 (per cavity), p00, p10, p01, p11,
/// p_multi_single, p_single_multi, p_multi_multi. Red: p_click, p_no_click,
/// p00 (both click), p10, p01 (one click), p11 (no click).
using ProbabilityMap = std::map<std::string, double>;

struct HeraldOutcome {
    double rate = 0.0; // entangled pairs per second
    double fidelity = 0.0;
    double infidelity = 0.0;
    ProbabilityMap probabilities;
};

struct MonteCarloOutcome : HeraldOutcome {
    double rate_stderr = 0.0;
    double infidelity_stderr = 0.0;
    std::uint64_t attempts = 0;
    std::uint64_t seed = 0;
    std::uint64_t heralded_events = 0; // denominator of the empirical fidelity
    std::map<std::string, std::uint64_t> counts;
    bool fidelity_defined = false;
};

inline HeraldOutcome blue_sideband(const EntanglementProtocolParams& params)
{
    params.validate();
    if (params.scheme != SidebandScheme::blue) throw InvalidParameter("blue_sideband: scheme must be blue");
    const double x = params.mean_events();
    const double p0 = std::exp(-x);
    const double p1 = x * std::exp(-x);
    const double multi = -std::expm1(-x) - p1; // 1 - P0 - P1 without cancellation
    HeraldOutcome out;
    auto& p = out.probabilities;
    p["p0"] = p0;
    p["p1"] = p1;
    p["p00"] = p0 * p0;
    p["p10"] = p1 * p0;
    p["p01"] = p1 * p0;
    p["p11"] = p1 * p1;
    p["p_multi_single"] = multi * (p0 + p1);
    p["p_single_multi"] = multi * (p0 + p1);
    p["p_multi_multi"] = multi * multi;
    const double good = p["p10"] + p["p01"];
    const double bad = p["p11"] + p["p_multi_single"] + p["p_single_multi"] + p["p_multi_multi"];
    out.rate = 2.0 * params.generation_rate * std::exp(-x) * params.attempt_duration / params.cycle_time();
    if (good + bad > 0.0) {
        out.fidelity = good / (good + bad);
        out.infidelity = bad / (good + bad);
    } else {
        out.fidelity = 1.0; // r_0 dt -> 0 limit
        out.infidelity = 0.0;
    }
    return out;
}

/// Red sideband: both cavities start with one microwave photon; a click
/// (probability P_0 = 1 - e^{-r_0 dt}) marks a conversion. Only the
/// two-click outcome P00 = P_0^2 degrades the heralded state.
inline HeraldOutcome red_sideband(const EntanglementProtocolParams& params)
{
    params.validate();
    if (params.scheme != SidebandScheme::red) throw InvalidParameter("red_sideband: scheme must be red");
    const double x = params.mean_events();
    const double p_click = -std::expm1(-x);
    const double p_no_click = std::exp(-x);
    HeraldOutcome out;
    auto& p = out.probabilities;
    p["p_click"] = p_click;
    p["p_no_click"] = p_no_click;
    p["p00"] = p_click * p_click;
    p["p10"] = p_no_click * p_click;
    p["p01"] = p_no_click * p_click;
    p["p11"] = p_no_click * p_no_click;
    const double good = p["p10"] + p["p01"];
    const double bad = p["p00"];
    // Same attempt accounting as the blue scheme, with the per-cavity
    // single-event probability p_click.
    out.rate = 2.0 * p_click / params.cycle_time();
    if (good + bad > 0.0) {
        out.fidelity = good / (good + bad);
        out.infidelity = bad / (good + bad);
    } else {
        out.fidelity = 1.0;
        out.infidelity = 0.0;
    }
    return out;
}

inline HeraldOutcome herald_outcome(const EntanglementProtocolParams& params)
{
    return params.scheme == SidebandScheme::blue ? blue_sideband(params) : red_sideband(params);
}

/// Counter-based generator: draw k of a stream is mix64(seed + (k+1) * golden),
/// the SplitMix64 finalizer applied to a counter. Any draw can be computed
/// independently, so partitioned runs reproduce the serial one exactly.
class CounterRng {
public:
    static constexpr const char* algorithm = "splitmix64-counter/1";

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const
    {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1].
    double uniform(std::uint64_t counter) const
    {
        return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
};

namespace detail {

// Events of a rate-r Poisson process inside [0, dt], capped at 2 (the classes
// only distinguish 0, 1 and more than 1). Uses draws counter, counter+1.
inline int poisson_events_capped(const CounterRng& rng, std::uint64_t counter, double rate, double dt)
{
    if (rate <= 0.0) return 0;
    double t = -std::log(rng.uniform(counter)) / rate;
    if (t > dt) return 0;
    t += -std::log(rng.uniform(counter + 1)) / rate;
    return t > dt ? 1 : 2;
}

} // namespace detail

inline constexpr std::uint64_t draws_per_attempt = 4;

/// Monte Carlo of `attempts` independent protocol rounds. Blue: photon
/// emission in each cavity is a Poisson process of rate r_0 over dt. Red:
/// each cavity's stored photon converts after an exponential waiting time of
/// rate r_0; a conversion inside dt is a click.
inline MonteCarloOutcome monte_carlo(const EntanglementProtocolParams& params, std::uint64_t attempts,
                                     std::uint64_t seed)
{
    params.validate();
    if (attempts == 0) throw InvalidParameter("monte_carlo: attempts must be at least 1");
    const CounterRng rng(seed);
    const double r0 = params.generation_rate;
    const double dt = params.attempt_duration;

    MonteCarloOutcome out;
    out.attempts = attempts;
    out.seed = seed;
    auto& n = out.counts;
    double single_sum = 0.0, single_sq_sum = 0.0; // per-attempt single-event cavity count

    if (params.scheme == SidebandScheme::blue) {
        std::uint64_t c00 = 0, c10 = 0, c01 = 0, c11 = 0, cms = 0, csm = 0, cmm = 0, cav0 = 0, cav1 = 0;
        for (std::uint64_t i = 0; i < attempts; ++i) {
            const std::uint64_t base = i * draws_per_attempt;
            const int m = detail::poisson_events_capped(rng, base, r0, dt);
            const int k = detail::poisson_events_capped(rng, base + 2, r0, dt);
            cav0 += (m == 0) + (k == 0);
            cav1 += (m == 1) + (k == 1);
            const double singles = (m == 1) + (k == 1);
            single_sum += singles;
            single_sq_sum += singles * singles;
            if (m == 0 && k == 0) ++c00;
            else if (m == 1 && k == 0) ++c10;
            else if (m == 0 && k == 1) ++c01;
            else if (m == 1 && k == 1) ++c11;
            else if (m > 1 && k <= 1) ++cms;
            else if (m <= 1 && k > 1) ++csm;
            else ++cmm;
        }
        n = {{"p00", c00}, {"p10", c10}, {"p01", c01}, {"p11", c11},
             {"p_multi_single", cms}, {"p_single_multi", csm}, {"p_multi_multi", cmm}};
        const double total = static_cast<double>(attempts);
        for (const auto& [label, count] : n) out.probabilities[label] = static_cast<double>(count) / total;
        out.probabilities["p0"] = static_cast<double>(cav0) / (2.0 * total);
        out.probabilities["p1"] = static_cast<double>(cav1) / (2.0 * total);
        out.heralded_events = attempts - c00;
        const std::uint64_t good = c10 + c01;
        if (out.heralded_events > 0) {
            out.fidelity_defined = true;
            out.fidelity = static_cast<double>(good) / static_cast<double>(out.heralded_events);
        }
    } else {
        std::uint64_t c00 = 0, c10 = 0, c01 = 0, c11 = 0, clicks = 0;
        for (std::uint64_t i = 0; i < attempts; ++i) {
            const std::uint64_t base = i * draws_per_attempt;
            const bool click_a = r0 > 0.0 && -std::log(rng.uniform(base)) / r0 <= dt;
            const bool click_b = r0 > 0.0 && -std::log(rng.uniform(base + 2)) / r0 <= dt;
            clicks += click_a + click_b;
            const double singles = static_cast<double>(click_a) + static_cast<double>(click_b);
            single_sum += singles;
            single_sq_sum += singles * singles;
            // Labels follow the microwave occupation after the attempt: a
            // click empties its cavity.
            if (click_a && click_b) ++c00;
            else if (!click_a && click_b) ++c10;
            else if (click_a && !click_b) ++c01;
            else ++c11;
        }
        n = {{"p00", c00}, {"p10", c10}, {"p01", c01}, {"p11", c11}};
        const double total = static_cast<double>(attempts);
        for (const auto& [label, count] : n) out.probabilities[label] = static_cast<double>(count) / total;
        out.probabilities["p_click"] = static_cast<double>(clicks) / (2.0 * total);
        out.probabilities["p_no_click"] = 1.0 - out.probabilities["p_click"];
        out.heralded_events = c00 + c10 + c01;
        if (out.heralded_events > 0) {
            out.fidelity_defined = true;
            out.fidelity = static_cast<double>(c10 + c01) / static_cast<double>(out.heralded_events);
        }
    }

    const double total = static_cast<double>(attempts);
    const double mean_singles = single_sum / total;
    const double var_singles = std::max(0.0, single_sq_sum / total - mean_singles * mean_singles);
    out.rate = mean_singles / params.cycle_time();
    out.rate_stderr = std::sqrt(var_singles / total) / params.cycle_time();
    if (out.fidelity_defined) {
        out.infidelity = 1.0 - out.fidelity;
        const double h = static_cast<double>(out.heralded_events);
        out.infidelity_stderr = std::sqrt(out.fidelity * out.infidelity / h);
    } else {
        out.fidelity = 0.0;
        out.infidelity = 0.0;
    }
    return out;
}

/// How the generation rate r_0 follows the pump power.
enum class R0ModelKind { direct, cooperativity_scaled };

inline const char* to_string(R0ModelKind k) { return k == R0ModelKind::direct ? "direct" : "cooperativity_scaled"; }

struct R0Model {
    R0ModelKind kind = R0ModelKind::direct;
    std::vector<double> r0_per_row; // used by `direct`, one value per power
};

struct EntanglementSweepRow {
    double power = 0.0;
    double r0 = 0.0;
    double rate = 0.0;
    double infidelity = 0.0;
};

struct EntanglementSweep {
    std::vector<EntanglementSweepRow> rows;
    SidebandScheme scheme = SidebandScheme::blue;
    R0ModelKind model = R0ModelKind::direct;
};

/// cooperativity_scaled heuristic: r_0 = C(P) g_a g_b / (g_a + g_b).
inline double cooperativity_scaled_r0(const OperatingPoint& op)
{
    const double ga = op.optical_signal().total_rate();
    const double gb = op.microwave().total_rate();
    return cooperativity(op) * ga * gb / (ga + gb);
}

inline EntanglementSweep sweep_power(const EntanglementProtocolParams& base, const OperatingPoint& op,
                                     const std::vector<double>& powers, const R0Model& model)
{
    if (powers.empty()) throw InvalidParameter("entanglement sweep: empty power list");
    if (model.kind == R0ModelKind::direct && model.r0_per_row.size() != powers.size())
        throw InvalidParameter("entanglement sweep: direct model needs one r0 per power");
    EntanglementSweep out;
    out.scheme = base.scheme;
    out.model = model.kind;
    out.rows.reserve(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!(powers[i] >= 0.0)) throw InvalidParameter("entanglement sweep: powers must be non-negative");
        EntanglementProtocolParams p = base;
        p.generation_rate = model.kind == R0ModelKind::direct ? model.r0_per_row[i]
                                                               : cooperativity_scaled_r0(op.with_pump_power(powers[i]));
        const auto h = herald_outcome(p);
        out.rows.push_back({powers[i], p.generation_rate, h.rate, h.infidelity});
    }
    return out;
}

} // namespace eotrans
