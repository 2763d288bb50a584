#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eotrans/converter.hpp"
#include "eotrans/presets.hpp"
#include "oracles.hpp"

using namespace eotrans;

namespace {

constexpr double hbar = PhysicalConstants::reduced_planck;

// Operating point with direct control over every rate. The pump frequency is
// fixed so that P / (hbar w_p) equals `flux`.
OperatingPoint make_op(double ga0, double gac, double gb0, double gbc, double g, double flux, double delta_p = 0.0)
{
    const double wp = 1e15;
    const ModeParams a{1.0e15 + 5e10, ga0, gac};
    const ModeParams p{wp, ga0, gac};
    const ModeParams b{5e10, gb0, gbc};
    return {a, p, b, g, PumpDrive{flux * hbar * wp, delta_p}};
}

OperatingPoint with_cooperativity(const OperatingPoint& op, double c)
{
    return op.with_pump_power(power_for_cooperativity(op, c));
}

} // namespace

TEST(PumpPhotonNumber, Examples)
{
    EXPECT_EQ(pump_photon_number(make_op(1e8, 1e8, 1e6, 1e6, 1.0, 0.0)), 0.0);
    const auto op = make_op(1e8, 1e8, 1e6, 1e6, 1.0, 1e15);
    EXPECT_NEAR(pump_photon_number(op), 1e7, 1e-9 * 1e7);
    EXPECT_NEAR(pump_photon_number(op.with_pump_power(2 * op.pump().power)), 2 * pump_photon_number(op),
                1e-12 * 2e7);
}

TEST(PumpPhotonNumber, OwnPumpLinewidthOverride)
{
    const ModeParams a{1e15, 1e8, 1e8};
    const ModeParams p{1e15, 3e8, 1e8};
    const ModeParams b{5e10, 1e6, 1e6};
    const double power = 1e15 * hbar * 1e15;
    const OperatingPoint shared{a, p, b, 1.0, {power, 0.0}};
    const OperatingPoint own{a, p, b, 1.0, {power, 0.0}, PumpLinewidth::own_mode};
    EXPECT_NEAR(pump_photon_number(shared), 1e7, 1e-3);
    EXPECT_NEAR(pump_photon_number(own), 1e8 * 1e15 / (2e8 * 2e8), 1e-3);
}

TEST(Cooperativity, Examples)
{
    EXPECT_EQ(cooperativity(make_op(1e8, 1e8, 1e6, 1e6, 0.0, 1e15)), 0.0);
    // n_p = 1e7 with gamma_a = 4e8 (gamma_ac = 2e8): flux = 1e7 (2e8)^2 / 2e8.
    const auto op = make_op(2e8, 2e8, 1e6, 1e6, 300.0, 2e15);
    ASSERT_NEAR(pump_photon_number(op), 1e7, 1e-3);
    EXPECT_NEAR(cooperativity(op), 4.5e-3, 1e-5);
    EXPECT_NEAR(cooperativity(op.with_pump_power(3 * op.pump().power)), 3 * cooperativity(op), 1e-15);
}

TEST(Efficiency, Examples)
{
    // Unity internal efficiency at C = 1 with lossless modes.
    const auto lossless = with_cooperativity(make_op(0.0, 2e8, 0.0, 1e6, 300.0, 1e15), 1.0);
    EXPECT_NEAR(efficiency(lossless).total_efficiency, 1.0, 1e-12);

    const auto design = with_cooperativity(make_op(1e8, 2.3e8, 1e6, 3.4e6, 300.0, 1e15), 0.58);
    const auto r = efficiency(design);
    EXPECT_NEAR(r.cooperativity, 0.58, 1e-12);
    EXPECT_NEAR(r.total_efficiency, 0.5005, 0.002);
    EXPECT_LE(r.total_efficiency, r.internal_efficiency);

    const auto off = make_op(1e8, 2.3e8, 1e6, 3.4e6, 300.0, 0.0);
    EXPECT_EQ(efficiency(off).total_efficiency, 0.0);
}

TEST(InternalEfficiency, SymmetricUnderInversionAndPeaksAtOne)
{
    EXPECT_EQ(internal_efficiency(1.0), 1.0);
    for (double c = 0.01; c < 50.0; c *= 1.37) {
        EXPECT_NEAR(internal_efficiency(c), internal_efficiency(1.0 / c), 1e-14);
        EXPECT_LE(internal_efficiency(c), 1.0);
    }
}

TEST(EfficiencyDetuned, ReducesToOnResonance)
{
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const auto op = with_cooperativity(make_op(1e7 * u(gen), 1e7 * u(gen), 1e5 * u(gen), 1e5 * u(gen), 100.0, 1e15),
                                           0.4 * u(gen));
        const double eta0 = efficiency(op).total_efficiency;
        EXPECT_NEAR(efficiency_detuned(op, 0.0), eta0, 1e-12 * eta0);
    }
}

TEST(EfficiencyDetuned, MatchesDirectLinearSolve)
{
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
        const auto op = with_cooperativity(make_op(1e7 * u(gen), 1e7 * u(gen), 1e5 * u(gen), 1e5 * u(gen), 100.0, 1e15),
                                           0.4 * u(gen));
        const double delta = d(gen) * op.microwave().total_rate();
        const double expected = oracles::detuned_efficiency_by_linear_solve(
            op.optical_signal().coupling_rate(), op.optical_signal().total_rate(), op.microwave().coupling_rate(),
            op.microwave().total_rate(), std::sqrt(enhanced_coupling_sq(op)), delta);
        EXPECT_NEAR(efficiency_detuned(op, delta), expected, 1e-10 * expected);
    }
}

TEST(EfficiencyDetuned, TailsDecayMonotonically)
{
    const auto op = with_cooperativity(make_op(1e8, 1e8, 1e6, 1e6, 300.0, 1e15), 0.5);
    const double beyond = 2.0 * op.optical_signal().total_rate();
    double prev = efficiency_detuned(op, beyond);
    for (double d = beyond * 1.5; d < 1e4 * beyond; d *= 1.5) {
        const double now = efficiency_detuned(op, d);
        EXPECT_LT(now, prev);
        EXPECT_EQ(now, efficiency_detuned(op, -d));
        prev = now;
    }
    EXPECT_LT(prev, 1e-12);
}

TEST(EfficiencyDetuned, Reciprocity)
{
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double ga0 = 1e6 * u(gen), gac = 1e6 * u(gen), gb0 = 1e6 * u(gen), gbc = 1e6 * u(gen);
        const auto op = make_op(ga0, gac, gb0, gbc, 100.0, 1e15);
        auto swapped = make_op(gb0, gbc, ga0, gac, 100.0, 1e15);
        // Keep G fixed: n_p depends on the optical linewidth.
        swapped = swapped.with_g_eo(100.0 * std::sqrt(pump_photon_number(op) / pump_photon_number(swapped)));
        ASSERT_NEAR(enhanced_coupling_sq(swapped), enhanced_coupling_sq(op), 1e-10 * enhanced_coupling_sq(op));
        const double delta = u(gen) * 1e6;
        const double e1 = efficiency_detuned(op, delta);
        EXPECT_NEAR(efficiency_detuned(swapped, delta), e1, 1e-10 * e1);
    }
}

TEST(Efficiency, ExtractionBound)
{
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 500; ++i) {
        const auto op = with_cooperativity(make_op(1e7 * u(gen), 1e7 * u(gen), 1e5 * u(gen), 1e5 * u(gen), 100.0, 1e15),
                                           u(gen));
        const double bound = op.optical_signal().extraction_ratio() * op.microwave().extraction_ratio();
        EXPECT_LE(efficiency(op).total_efficiency, bound * (1 + 1e-14));
    }
}

TEST(Bandwidth, SingleLorentzianLimit)
{
    const auto op = with_cooperativity(make_op(1e9, 1e9, 1e5, 1e5, 300.0, 1e15), 1e-4);
    const double gb = op.microwave().total_rate();
    EXPECT_NEAR(bandwidth(op), gb, 0.01 * gb);
}

TEST(Bandwidth, BroadenedByCooperativityAndMatchesScanOracle)
{
    const auto op = with_cooperativity(make_op(1e9, 1e9, 1e5, 1e5, 300.0, 1e15), 0.58);
    const double gb = op.microwave().total_rate();
    const double fwhm = bandwidth(op);
    EXPECT_NEAR(fwhm, 1.58 * gb, 0.05 * 1.58 * gb);

    const double peak = efficiency_detuned(op, 0.0);
    const double upper =
        oracles::half_max_by_scan([&](double d) { return efficiency_detuned(op, d); }, 0.5 * peak, 10 * gb);
    EXPECT_NEAR(0.5 * fwhm, upper, 1e-7 * upper);
}

TEST(Bandwidth, Symmetric)
{
    const auto op = with_cooperativity(make_op(3e8, 2e8, 1e6, 4e6, 300.0, 1e15), 0.9);
    const auto edges = bandwidth_edges(op);
    EXPECT_NEAR(-edges.lower, edges.upper, 1e-9 * edges.upper);
}

TEST(Bandwidth, UndefinedForZeroPeak)
{
    EXPECT_THROW(bandwidth(make_op(1e8, 1e8, 1e6, 1e6, 300.0, 0.0)), UndefinedBandwidth);
}

TEST(CouplingSweep, PumpPhotonArgmaxAtStationaryPoint)
{
    for (double dp_over_g0 : {0.0, 0.2, 0.52, 1.5}) {
        const auto op = make_op(1e8, 1e8, 1e6, 1e6, 300.0, 1e15, dp_over_g0 * 1e8);
        const auto best =
            optimal_optical_coupling(op, CouplingObjective::pump_photons, numeric::linspace(0.0, 8.0, 161));
        const double expected = std::sqrt(1.0 + 4.0 * dp_over_g0 * dp_over_g0);
        EXPECT_NEAR(best.argument, expected, 1e-3 * expected);
        EXPECT_NEAR(pump_photon_optimal_ratio(op), expected, 1e-15 * expected);
    }
}

TEST(CouplingSweep, CooperativityArgmaxForDesignPoint)
{
    const auto op = presets::design_point();
    const auto best = optimal_optical_coupling(op, CouplingObjective::cooperativity, numeric::linspace(0.05, 5.0, 100));
    EXPECT_GE(best.argument, 0.6);
    EXPECT_LE(best.argument, 0.8);
}

TEST(CouplingSweep, UncoupledRowIsZero)
{
    const auto rows = sweep_optical_coupling(presets::design_point(), {0.0, 1.0});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].pump_photons, 0.0);
    EXPECT_EQ(rows[0].cooperativity, 0.0);
    EXPECT_EQ(rows[0].efficiency, 0.0);
    EXPECT_GT(rows[1].cooperativity, 0.0);
    EXPECT_THROW(sweep_optical_coupling(presets::design_point(), {}), InvalidParameter);
    EXPECT_THROW(sweep_optical_coupling(presets::design_point(), {-1.0}), InvalidParameter);
}

TEST(PowerSweep, LinearCooperativityAndMonotoneEfficiency)
{
    const auto op = presets::design_point();
    const double p_unity = power_for_cooperativity(op, 1.0);
    const auto powers = numeric::linspace(0.0, p_unity, 50);
    const auto rows = sweep_pump_power(op, powers);
    EXPECT_EQ(rows[0].pump_photons, 0.0);
    EXPECT_EQ(rows[0].cooperativity, 0.0);
    EXPECT_EQ(rows[0].efficiency, 0.0);
    const double slope = rows.back().cooperativity / rows.back().power;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].cooperativity / rows[i].power, slope, 1e-12 * slope);
        EXPECT_GT(rows[i].efficiency, rows[i - 1].efficiency);
    }
}
