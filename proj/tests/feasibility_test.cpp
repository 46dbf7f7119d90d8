#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ehcontract/contract_solver.hpp"
#include "ehcontract/feasibility.hpp"
#include "ehcontract/scenario.hpp"
#include "test_support.hpp"

using namespace ehc;

namespace {

const TypeProfile kTwo({1.0, 2.0});
const Contract kTwoContract = Contract::from(std::vector<double>{1, 2}, std::vector<double>{1, 2.5});

SolveResult solve_table_one(int n, int k, double gamma_mw = 125.0) {
    ScenarioConfig c;
    c.n_eaps = n;
    c.k_types = k;
    const UnitScale u{c.power_scale};
    return solve(u.profile(build_type_ladder(c)), u.gamma(gamma_mw), c.bandwidth, n);
}

TypeProfile table_one_profile(int k) {
    ScenarioConfig c;
    c.k_types = k;
    return UnitScale{c.power_scale}.profile(build_type_ladder(c));
}

}  // namespace

TEST(CheckIr, Examples) {
    for (double s : check_ir(Contract{std::vector<ContractItem>(3)}, TypeProfile(std::vector<double>{1, 2, 3})))
        EXPECT_EQ(s, 0.0);
    const auto s = check_ir(kTwoContract, kTwo);
    EXPECT_DOUBLE_EQ(s[0], 0.0);
    EXPECT_DOUBLE_EQ(s[1], 0.5);
}

TEST(CheckIc, Examples) {
    const auto m = check_ic(kTwoContract, kTwo);
    EXPECT_DOUBLE_EQ(m[1][0], 0.0);
    EXPECT_DOUBLE_EQ(m[0][1], 1.5);
    EXPECT_EQ(m[0][0], 0.0);
    EXPECT_EQ(m[1][1], 0.0);

    const Contract same{std::vector<ContractItem>(4, ContractItem{1.0, 2.0})};
    for (const auto& row : check_ic(same, TypeProfile(std::vector<double>{1, 2, 3, 4})))
        for (double v : row) EXPECT_EQ(v, 0.0);
}

TEST(CheckSelfReveal, Examples) {
    for (bool b : check_self_reveal(kTwoContract, kTwo)) EXPECT_TRUE(b);
    EXPECT_TRUE(check_self_reveal(Contract{{{0.3, 0.2}}}, TypeProfile(std::vector<double>{1.0}))[0]);

    // type 1 prefers type 2's item here
    const Contract bad = Contract::from(std::vector<double>{1, 1}, std::vector<double>{1, 2});
    const auto r = check_self_reveal(bad, kTwo);
    EXPECT_FALSE(r[0]);
    EXPECT_TRUE(r[1]);
}

TEST(VerifyContract, ReportsWorstSlack) {
    const Contract bad = Contract::from(std::vector<double>{1, 1}, std::vector<double>{1, 2});
    const auto rep = verify_contract(bad, kTwo);
    EXPECT_FALSE(rep.feasible());
    EXPECT_TRUE(rep.ir_ok());
    EXPECT_FALSE(rep.ic_ok());
    EXPECT_DOUBLE_EQ(rep.min_slack, -1.0);
    EXPECT_FALSE(rep.self_reveal);

    const auto good = verify_contract(kTwoContract, kTwo);
    EXPECT_TRUE(good.feasible());
    EXPECT_TRUE(good.monotone_q);
    EXPECT_TRUE(good.monotone_pi);
    EXPECT_EQ(good.min_slack, 0.0);
}

TEST(VerifyContract, SolverOutputN5K10) {
    const SolveResult r = solve_table_one(5, 10);
    ASSERT_TRUE(r.ok());
    const TypeProfile p = table_one_profile(10);
    const auto rep = verify_contract(r.contract, p);
    EXPECT_NEAR(rep.ir_slacks[0], 0.0, 1e-10);
    for (double s : rep.ir_slacks) EXPECT_GE(s, -1e-9);
    int off_diagonal = 0;
    for (std::size_t k = 0; k < 10; ++k)
        for (std::size_t j = 0; j < 10; ++j) {
            if (j == k) continue;
            ++off_diagonal;
            EXPECT_GE(rep.ic_slack_matrix[k][j], -1e-9);
        }
    EXPECT_EQ(off_diagonal, 90);
    for (std::size_t k = 1; k < 10; ++k)
        EXPECT_NEAR(rep.ic_slack_matrix[k][k - 1], 0.0, 1e-12);  // LDIC binds
    EXPECT_TRUE(rep.feasible());
    EXPECT_TRUE(rep.self_reveal);
    EXPECT_TRUE(rep.monotone_q && rep.monotone_pi);
}

TEST(VerifyContract, SolverSelfRevealsForType6) {
    const SolveResult r = solve_table_one(5, 10);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(check_self_reveal(r.contract, table_one_profile(10))[5]);
}

// Conclusions of the ordering lemmas, on solver outputs.
TEST(SolverOutputs, RewardOrderFollowsPowerOrder) {
    for (auto [n, k] : {std::pair{2, 5}, {5, 10}, {3, 4}, {1, 6}}) {
        for (double g : {80.0, 150.0, 222.2}) {
            const SolveResult r = solve_table_one(n, k, g);
            ASSERT_TRUE(r.ok());
            const auto& it = r.contract.items;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    EXPECT_EQ(it[i].pi > it[j].pi, it[i].q > it[j].q);
                    if (i > j) {
                        EXPECT_GE(it[i].pi, it[j].pi);
                    }
                }
        }
    }
}

TEST(LocalIcProperty, ImpliesFullIc) {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 2 + rep % 9;
        const TypeProfile p(test::random_ladder(rng, k));
        const Contract c = test::random_local_ic_contract(rng, std::vector<double>(p.thetas().begin(), p.thetas().end()));
        const auto m = check_ic(c, p);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j) {
                    EXPECT_GE(m[i][j], -1e-9) << "rep " << rep;
                }
    }
}

TEST(BottomIrProperty, FullIcAndBottomIrImplyAllIr) {
    std::mt19937_64 rng(103);
    int tested = 0;
    while (tested < 1000) {
        const std::size_t k = 2 + tested % 9;
        const auto theta = test::random_ladder(rng, k);
        const TypeProfile p(theta);
        Contract c = test::random_local_ic_contract(rng, theta);
        // lower the whole reward schedule until type 1's IR binds or is slightly slack
        const double shift = c.items[0].pi - c.items[0].q * c.items[0].q / theta[0];
        const double keep = 0.1 * std::generate_canonical<double, 53>(rng);
        for (auto& it : c.items) it.pi -= shift - keep;
        const auto rep = verify_contract(c, p);
        if (!rep.ic_ok() || rep.ir_slacks[0] < 0.0) continue;
        for (double s : rep.ir_slacks) EXPECT_GE(s, -1e-9);
        ++tested;
    }
}

TEST(BruteForce, ScalarMatchesSolver) {
    const TypeProfile p({1.0});
    const SolveResult r = solve(p, 1.0, 1.0, 1);
    const auto g = brute_force_best_contract(p, 1.0, 1.0, 1);
    EXPECT_LE(g.final_step, 1e-3);
    EXPECT_LE(std::abs(g.objective - r.objective), 1e-4);
    EXPECT_GE(r.objective, g.objective - 1e-12);
}

TEST(BruteForce, TwoTypesGapSmall) {
    std::mt19937_64 rng(107);
    for (int i = 0; i < 5; ++i) {
        const TypeProfile p(test::random_ladder(rng, 2, 0.5, 3.0));
        const SolveResult r = solve(p, 1.0 + i, 1.0, 2);
        ASSERT_TRUE(r.ok());
        const auto g = brute_force_best_contract(p, 1.0 + i, 1.0, 2);
        EXPECT_LE(g.objective - r.objective, 1e-3);
        EXPECT_LE(r.objective - g.objective, 1e-3);
    }
}

TEST(BruteForce, ReproducesSolverPointExactly) {
    const TypeProfile p({0.7, 1.9});
    const SolveResult r = solve(p, 2.0, 1.0, 2);
    GridSearchConfig cfg;
    cfg.points_per_dim = 3;
    cfg.min_step = 1e9;  // single coarse level
    cfg.extra_points = {r.contract.q()};
    const auto g = brute_force_best_contract(p, 2.0, 1.0, 2, cfg);
    EXPECT_EQ(g.objective, r.objective);
    EXPECT_EQ(g.contract.q(), r.contract.q());
}

TEST(BruteForce, RefusesLargeK) {
    EXPECT_THROW(brute_force_best_contract(TypeProfile(std::vector<double>{1, 2, 3, 4}), 1.0, 1.0, 2),
                 std::invalid_argument);
}
