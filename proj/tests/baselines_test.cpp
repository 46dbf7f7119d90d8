#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ehcontract/baselines.hpp"
#include "ehcontract/contract_solver.hpp"
#include "ehcontract/scenario.hpp"
#include "test_support.hpp"

using namespace ehc;


TEST(CompleteInfo, LambdaExample) {
    const double root = test::bisect([](double l) { return l * (1 + l) - 1 / (2 * std::log(2.0)); }, 0, 2);
    EXPECT_NEAR(complete_info_lambda(1.0, 1.0, 1.0), root, 1e-14);
    EXPECT_NEAR(complete_info_lambda(1.0, 1.0, 1.0), 0.48552, 1e-4);
}

TEST(CompleteInfo, EmptyMarket) {
    const TypeProfile p({1.0, 2.0});
    const auto s = complete_info_contract(Composition{{0, 0}}, p, 1.0, 1.0);
    EXPECT_EQ(s.welfare, 0.0);
    EXPECT_EQ(s.lambda, 0.0);
    for (double q : s.q) EXPECT_EQ(q, 0.0);
    EXPECT_EQ(expected_complete_info_welfare(p, 1.0, 1.0, 0), 0.0);
}

TEST(CompleteInfo, ClosedFormMatchesNumericMaximization) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> cnt(0, 3);
    int checked = 0;
    while (checked < 100) {
        const std::size_t k = 1 + checked % 4;
        const auto theta = test::random_ladder(rng, k);
        const TypeProfile p(theta);
        Composition n{std::vector<int>(k)};
        int total = 0;
        for (auto& v : n.counts) total += (v = cnt(rng));
        if (total == 0) continue;
        const double gamma = 0.1 + 4.9 * std::generate_canonical<double, 53>(rng);
        const double w = 0.5 + 1.5 * std::generate_canonical<double, 53>(rng);

        const auto s = complete_info_contract(n, p, gamma, w);
        const auto q = test::coordinate_ascent_welfare(n, theta, gamma, w);
        for (std::size_t j = 0; j < k; ++j) {
            EXPECT_DOUBLE_EQ(s.pi[j], s.q[j] * s.q[j] / theta[j]);  // full surplus extraction
            EXPECT_NEAR(s.q[j], s.lambda * theta[j], 1e-15 * s.q[j]);
            if (n[j] > 0) {
                EXPECT_NEAR(s.q[j], q[j], 1e-8 * q[j]);
            }
        }
        const double numeric = social_welfare(n, Contract::from(q, q), p, gamma, w);
        EXPECT_NEAR(s.welfare, numeric, 1e-8 * std::abs(numeric));
        ++checked;
    }
}

TEST(CompleteInfo, UpperBoundsContractPerRealization) {
    ScenarioConfig c;
    const UnitScale u{c.power_scale};
    const TypeProfile p = u.profile(build_type_ladder(c));
    const double g = u.gamma(150.0);
    const SolveResult r = solve(p, g, 1.0, 2);
    ASSERT_TRUE(r.ok());
    for (const auto& comp : enumerate_compositions(2, 5)) {
        EXPECT_GE(complete_info_contract(comp, p, g, 1.0).welfare,
                  social_welfare(comp, r.contract, p, g, 1.0) - 1e-15);
    }
}

TEST(CompleteInfo, SingleTypeExpectation) {
    const TypeProfile p({2.0});
    EXPECT_DOUBLE_EQ(expected_complete_info_welfare(p, 1.5, 1.0, 3),
                     complete_info_contract(Composition{{3}}, p, 1.5, 1.0).welfare);
}

TEST(CompleteInfo, NondecreasingInGamma) {
    const TypeProfile p({0.5, 1.0, 2.0, 4.0});
    double prev = -1.0;
    for (double g = 0.0; g <= 10.0; g += 0.25) {
        const double v = expected_complete_info_welfare(p, g, 1.0, 3);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(LinearPricing, ZeroGammaMeansZeroPrice) {
    const auto s = linear_pricing_optimize(TypeProfile(std::vector<double>{1.0, 2.0}), 0.0, 1.0, 2);
    EXPECT_EQ(s.price, 0.0);
    EXPECT_EQ(s.expected_dap_utility, 0.0);
    EXPECT_EQ(s.expected_welfare, 0.0);
}

TEST(LinearPricing, BestResponsesAreStrictMaximizers) {
    const TypeProfile p({0.5, 1.0, 2.0});
    const auto s = linear_pricing_optimize(p, 2.0, 1.0, 3);
    ASSERT_GT(s.price, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        EXPECT_DOUBLE_EQ(s.q_response[k], s.price * p.theta(k) / 2);
        auto u = [&](double q) { return s.price * q - q * q / p.theta(k); };
        EXPECT_LT(u(s.q_response[k] + 1e-4), u(s.q_response[k]));
        EXPECT_LT(u(s.q_response[k] - 1e-4), u(s.q_response[k]));
        EXPECT_GE(u(s.q_response[k]), 0.0);  // participation is automatic
    }
}

TEST(LinearPricing, StationaryAtOptimum) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        const std::size_t k = 1 + i % 5;
        const TypeProfile p(test::random_ladder(rng, k));
        const CountDistribution d(1 + i % 4, static_cast<int>(k));
        const double g = 0.2 + i * 0.3;
        const auto s = linear_pricing_optimize(d, p, g, 1.0);
        EXPECT_GE(s.price, 0.0);
        if (s.price > 0.0) {
            EXPECT_LE(std::abs(linear_pricing_utility_derivative(s.price, d, p, g, 1.0)), 1e-6);
        }
        // no grid price does better
        for (double x = 0.0; x <= 3.0 * s.price + 1.0; x += 0.01 * (s.price + 0.01))
            EXPECT_LE(linear_pricing_expected_utility(x, d, p, g, 1.0), s.expected_dap_utility + 1e-12);
    }
}

TEST(LinearPricing, TableOneRegimeStationary) {
    ScenarioConfig c;
    const UnitScale u{c.power_scale};
    const TypeProfile p = u.profile(build_type_ladder(c));
    const CountDistribution d(2, 5);
    for (double g_mw : {80.0, 150.0, 222.2}) {
        const auto s = linear_pricing_optimize(d, p, u.gamma(g_mw), 1.0);
        EXPECT_GT(s.price, 0.0);
        EXPECT_LE(std::abs(linear_pricing_utility_derivative(s.price, d, p, u.gamma(g_mw), 1.0)), 1e-6);
    }
}

TEST(Baselines, WelfareOrdering) {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 20; ++i) {
        const int k = 2 + i % 4, n = 1 + i % 3;
        // evenly spaced ladders keep the relaxed optimum monotone
        const double lo = 0.2 + std::generate_canonical<double, 53>(rng);
        std::vector<double> theta(k);
        for (int j = 0; j < k; ++j) theta[j] = lo * (1 + j);
        const TypeProfile p(theta);
        const CountDistribution d(n, k);
        const double g = 0.3 + 0.4 * i;
        const SolveResult r = solve(p, g, 1.0, n);
        ASSERT_TRUE(r.ok()) << to_string(r.status);
        const double complete = expected_complete_info_welfare(d, p, g, 1.0);
        const double contract = expected_social_welfare(d, r.contract, p, g, 1.0);
        const double linear = linear_pricing_optimize(d, p, g, 1.0).expected_welfare;
        EXPECT_GE(complete - contract, -1e-8);
        EXPECT_GE(contract - linear, -1e-8);
    }
}
