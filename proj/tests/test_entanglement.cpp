#include <gtest/gtest.h>

#include <cmath>

#include "eotrans/entanglement.hpp"
#include "eotrans/numeric.hpp"
#include "eotrans/presets.hpp"

using namespace eotrans;

namespace {

EntanglementProtocolParams protocol(double r0, SidebandScheme scheme)
{
    EntanglementProtocolParams p;
    p.generation_rate = r0;
    p.scheme = scheme;
    return p;
}

} // namespace

TEST(BlueSideband, ValuesAtSmallMeanEvents)
{
    const auto h = blue_sideband(protocol(1e4, SidebandScheme::blue));
    EXPECT_NEAR(h.rate, 9900.5, 0.1);
    EXPECT_NEAR(h.infidelity, 0.00997, 1e-4);
    EXPECT_NEAR(h.fidelity + h.infidelity, 1.0, 1e-15);
}

TEST(BlueSideband, WeakGenerationLimit)
{
    const auto h = blue_sideband(protocol(1e-3, SidebandScheme::blue));
    EXPECT_NEAR(h.fidelity, 1.0, 1e-8);
    EXPECT_NEAR(h.rate, 2.0 * 1e-3 * 0.5, 1e-12);
    const auto zero = blue_sideband(protocol(0.0, SidebandScheme::blue));
    EXPECT_EQ(zero.rate, 0.0);
    EXPECT_EQ(zero.fidelity, 1.0);
}

TEST(BlueSideband, StrongGenerationLimit)
{
    const auto h = blue_sideband(protocol(1e8, SidebandScheme::blue));
    EXPECT_LT(h.rate, 1e-30);
    EXPECT_GT(h.infidelity, 0.999);
}

TEST(BlueSideband, RateMaximalAtUnitMeanEvents)
{
    auto rate = [](double log_r0) { return blue_sideband(protocol(std::exp(log_r0), SidebandScheme::blue)).rate; };
    const auto best = numeric::golden_section_maximize(rate, std::log(1e3), std::log(1e9), 1e-10);
    EXPECT_NEAR(std::exp(best.argument), 1e6, 1e3);
}

TEST(BlueSideband, PartitionOfUnity)
{
    for (double r0 : {0.0, 1e2, 1e4, 1e6, 3e6, 1e7}) {
        const auto& p = blue_sideband(protocol(r0, SidebandScheme::blue)).probabilities;
        const double sum = p.at("p00") + p.at("p10") + p.at("p01") + p.at("p11") + p.at("p_multi_single") +
                           p.at("p_single_multi") + p.at("p_multi_multi");
        EXPECT_NEAR(sum, 1.0, 1e-12) << "r0 " << r0;
    }
}

TEST(BlueSideband, InfidelityIncreasesWithGeneration)
{
    double previous = 0.0;
    for (double r0 = 1e3; r0 < 1e7; r0 *= 1.5) {
        const double inf = blue_sideband(protocol(r0, SidebandScheme::blue)).infidelity;
        EXPECT_GT(inf, previous);
        previous = inf;
    }
}

TEST(RedSideband, ValuesAtSmallMeanEvents)
{
    const auto h = red_sideband(protocol(1e4, SidebandScheme::red));
    EXPECT_NEAR(h.fidelity, 0.99500, 1e-4);
}

TEST(RedSideband, PartitionOfUnity)
{
    for (double r0 : {0.0, 1e2, 1e4, 1e6, 1e7}) {
        const auto& p = red_sideband(protocol(r0, SidebandScheme::red)).probabilities;
        EXPECT_NEAR(p.at("p00") + p.at("p10") + p.at("p01") + p.at("p11"), 1.0, 1e-12);
        EXPECT_NEAR(p.at("p_click") + p.at("p_no_click"), 1.0, 1e-12);
    }
}

TEST(RedSideband, AtLeastAsFaithfulAsBlue)
{
    for (double r0 = 1e2; r0 < 1e8; r0 *= 3.0) {
        const double red = red_sideband(protocol(r0, SidebandScheme::red)).fidelity;
        const double blue = blue_sideband(protocol(r0, SidebandScheme::blue)).fidelity;
        EXPECT_GE(red, blue) << "r0 " << r0;
    }
}

TEST(RedSideband, FidelityDecreasesWithGeneration)
{
    double previous = 1.0;
    for (double r0 = 1e3; r0 < 1e7; r0 *= 1.5) {
        const double f = red_sideband(protocol(r0, SidebandScheme::red)).fidelity;
        EXPECT_LT(f, previous);
        previous = f;
    }
}

TEST(Protocol, RejectsBadParameters)
{
    auto p = protocol(-1.0, SidebandScheme::blue);
    EXPECT_THROW(blue_sideband(p), InvalidParameter);
    p = protocol(1e4, SidebandScheme::blue);
    p.attempt_duration = 0.0;
    EXPECT_THROW(blue_sideband(p), InvalidParameter);
    EXPECT_THROW(red_sideband(protocol(1e4, SidebandScheme::blue)), InvalidParameter);
    EXPECT_THROW(monte_carlo(protocol(1e4, SidebandScheme::blue), 0, 1), InvalidParameter);
}

class MonteCarloAgreement : public ::testing::TestWithParam<std::tuple<SidebandScheme, double>> {};

TEST_P(MonteCarloAgreement, WithinFourStandardErrors)
{
    const auto [scheme, x] = GetParam();
    const auto params = protocol(x / 1e-6, scheme);
    const std::uint64_t n = 1000000;
    const auto mc = monte_carlo(params, n, 20261015);
    const auto exact = herald_outcome(params);

    // Standard errors from the exact probabilities, not the sample.
    const double single = scheme == SidebandScheme::blue ? exact.probabilities.at("p1")
                                                         : exact.probabilities.at("p_click");
    const double rate_se = std::sqrt(2.0 * single * (1.0 - single) / n) / params.cycle_time();
    EXPECT_NEAR(mc.rate, exact.rate, 4.0 * rate_se);

    ASSERT_TRUE(mc.fidelity_defined);
    const double heralded = n * (1.0 - (scheme == SidebandScheme::blue ? exact.probabilities.at("p00")
                                                                       : exact.probabilities.at("p11")));
    const double inf_se = std::sqrt(exact.fidelity * exact.infidelity / heralded);
    EXPECT_NEAR(mc.infidelity, exact.infidelity, 4.0 * inf_se + 1e-12);

    for (const auto& [label, count] : mc.counts) {
        const double p = exact.probabilities.at(label);
        const double se = std::sqrt(p * (1.0 - p) / n);
        EXPECT_NEAR(static_cast<double>(count) / n, p, 4.0 * se) << label;
    }
}

INSTANTIATE_TEST_SUITE_P(Schemes, MonteCarloAgreement,
                         ::testing::Combine(::testing::Values(SidebandScheme::blue, SidebandScheme::red),
                                            ::testing::Values(0.001, 0.01, 0.1, 1.0)));

TEST(MonteCarlo, DeterministicForSeed)
{
    const auto params = protocol(1e5, SidebandScheme::blue);
    const auto a = monte_carlo(params, 20000, 7);
    const auto b = monte_carlo(params, 20000, 7);
    const auto c = monte_carlo(params, 20000, 8);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.rate, b.rate);
    EXPECT_NE(a.counts, c.counts);
}

TEST(MonteCarlo, ZeroGenerationNeverHeralds)
{
    const auto mc = monte_carlo(protocol(0.0, SidebandScheme::blue), 1000, 3);
    EXPECT_EQ(mc.rate, 0.0);
    EXPECT_FALSE(mc.fidelity_defined);
    EXPECT_EQ(mc.counts.at("p00"), 1000u);
}

TEST(CounterRng, UniformInHalfOpenUnitInterval)
{
    const CounterRng rng(42);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < 100000; ++k) {
        const double u = rng.uniform(k);
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(EntanglementSweep, CooperativityScaledRateHasInteriorMaximum)
{
    const auto op = presets::design_point();
    const auto powers = numeric::logspace(1e-6, 1.0, 61);
    const auto sweep = sweep_power(protocol(0.0, SidebandScheme::blue), op, powers,
                                   {R0ModelKind::cooperativity_scaled, {}});
    std::size_t best = 0;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i)
        if (sweep.rows[i].rate > sweep.rows[best].rate) best = i;
    EXPECT_GT(best, 0u);
    EXPECT_LT(best, sweep.rows.size() - 1);
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) EXPECT_GE(sweep.rows[i].infidelity, sweep.rows[i - 1].infidelity);
}

TEST(EntanglementSweep, ZeroPowerGivesZeroRate)
{
    const auto op = presets::design_point();
    const auto sweep = sweep_power(protocol(0.0, SidebandScheme::red), op, {0.0, 1e-4},
                                   {R0ModelKind::cooperativity_scaled, {}});
    EXPECT_EQ(sweep.rows[0].r0, 0.0);
    EXPECT_EQ(sweep.rows[0].rate, 0.0);
    EXPECT_GT(sweep.rows[1].rate, 0.0);
}

TEST(EntanglementSweep, DirectModelNeedsOneRatePerPower)
{
    const auto op = presets::design_point();
    EXPECT_THROW(sweep_power(protocol(0.0, SidebandScheme::blue), op, {1e-4, 2e-4}, {R0ModelKind::direct, {1e4}}),
                 InvalidParameter);
    const auto s = sweep_power(protocol(0.0, SidebandScheme::blue), op, {1e-4}, {R0ModelKind::direct, {1e4}});
    EXPECT_NEAR(s.rows[0].rate, 9900.5, 0.1);
}
