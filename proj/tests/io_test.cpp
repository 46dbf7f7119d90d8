#include <random>
#include <string>

#include <gtest/gtest.h>

#include "ehcontract/io.hpp"

using namespace ehc;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, DefaultsFromTableOne) {
    const RunConfig c = parse_config_text(R"({"n_eaps": 2, "k_types": 5})");
    EXPECT_EQ(c.scenario.eta, 0.5);
    EXPECT_EQ(c.scenario.bandwidth, 1.0);
    EXPECT_EQ(c.scenario.noise, 1e-8);
    EXPECT_EQ(c.scenario.a_range, (Range{0.1, 1.0}));
    EXPECT_EQ(c.scenario.d_ms_range, (Range{5.0, 10.0}));
    EXPECT_EQ(c.scenario.d_as_range, (Range{15.0, 25.0}));
    EXPECT_NEAR(c.resolved_gamma(), 125.0, 1e-9);
    const auto grid = c.resolved_gamma_grid();
    EXPECT_EQ(grid.size(), 15u);
    EXPECT_NEAR(grid.front(), 80.0, 1e-9);
    EXPECT_NEAR(grid.back(), 222.22222222, 1e-6);
    EXPECT_EQ(c.probe_types, (std::vector<int>{3}));
}

TEST(Config, DefaultProbesClipToTypeCount) {
    EXPECT_EQ(parse_config_text(R"({"n_eaps": 5, "k_types": 10})").probe_types, (std::vector<int>{3, 6, 9}));
    EXPECT_EQ(parse_config_text(R"({"n_eaps": 2, "k_types": 2})").probe_types, (std::vector<int>{1, 2}));
}

TEST(Config, MissingRequiredFieldIsNamed) {
    EXPECT_NE(error_of(R"({"k_types": 5})").find("'n_eaps'"), std::string::npos);
    EXPECT_NE(error_of(R"({"n_eaps": 5})").find("'k_types'"), std::string::npos);
}

TEST(Config, TypeErrorsNameNestedField) {
    const auto e = error_of(R"({"n_eaps": 2, "k_types": 5, "physical": {"eta": "half"}})");
    EXPECT_NE(e.find("'physical.eta'"), std::string::npos) << e;
    EXPECT_NE(error_of(R"({"n_eaps": 2, "k_types": 5, "physical": {"a_range": [1]}})").find("physical.a_range"),
              std::string::npos);
}

TEST(Config, UnknownFieldRejected) {
    EXPECT_NE(error_of(R"({"n_eaps": 2, "k_types": 5, "solvr": {}})").find("'solvr'"), std::string::npos);
}

TEST(Config, MalformedJsonReportsLine) {
    const auto e = error_of("{\n  \"n_eaps\": 2,\n  \"k_types\": ,\n}");
    EXPECT_NE(e.find("line 3"), std::string::npos) << e;
}

TEST(Config, SemanticValidation) {
    EXPECT_NE(error_of(R"({"n_eaps": 2, "k_types": 0})").find("k_types"), std::string::npos);
    EXPECT_NE(error_of(R"({"n_eaps": 2, "k_types": 5, "physical": {"eta": 1.5}})").find("eta"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"n_eaps": 2, "k_types": 5, "curves": {"probe_types": [6]}})").find("probe type 6"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"n_eaps": 2, "k_types": 5, "power_unit": "W"})").find("power_unit"),
              std::string::npos);
}

TEST(Config, EchoRoundTrips) {
    const RunConfig c = parse_config_text(
        R"({"n_eaps": 3, "k_types": 4, "rng_seed": 9, "power_unit": "mW",
            "sweep": {"gamma_steps": 3}, "solver": {"grad_tol": 1e-9}})");
    const auto echo = to_json(c);
    const RunConfig back = parse_config(echo);
    EXPECT_EQ(to_json(back), echo);
    EXPECT_EQ(back.resolved_gamma_grid(), c.resolved_gamma_grid());
    EXPECT_EQ(back.resolved_gamma(), c.resolved_gamma());
    EXPECT_EQ(back.scenario.rng_seed, 9u);
}

TEST(Csv, DoublesRoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1 : 1);
        const std::string s = format_double(v);
        EXPECT_EQ(std::stod(s), v);
    }
}

TEST(Csv, ContractTableRoundTrip) {
    const TypeProfile p({1e-10, 3.3e-9, 1.6e-8});
    const Contract c = Contract::from(std::vector<double>{1e-9, 2.5e-7, 1.4e-6},
                                      std::vector<double>{0.01, 0.2, 0.3333333333333333});
    const std::string csv = contract_csv(c, p);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "type_index,theta,q,pi");
    const ContractTable t = parse_contract_csv(csv);
    EXPECT_EQ(t.contract.q(), c.q());
    EXPECT_EQ(t.contract.pi(), c.pi());
    EXPECT_EQ(contract_csv(t.contract, t.profile), csv);
}

TEST(Csv, ContractTableErrors) {
    EXPECT_THROW(parse_contract_csv(""), ConfigError);
    EXPECT_THROW(parse_contract_csv("a,b,c,d\n1,1,1,1\n"), ConfigError);
    EXPECT_THROW(parse_contract_csv("type_index,theta,q,pi\n2,1,1,1\n"), ConfigError);
    EXPECT_THROW(parse_contract_csv("type_index,theta,q,pi\n1,1,x,1\n"), ConfigError);
    EXPECT_THROW(parse_contract_csv("type_index,theta,q,pi\n1,2,1,1\n2,1,1,1\n"), ConfigError);
    EXPECT_THROW(parse_contract_csv("type_index,theta,q,pi\n1,1,-1,1\n"), ConfigError);
    EXPECT_THROW(parse_contract_csv("type_index,theta,q,pi\n"), ConfigError);
}

TEST(Csv, SweepAndCurvesSchemas) {
    SweepResult r;
    r.gamma_grid = {1.5};
    r.welfare_contract = {0.9};
    r.welfare_complete = {1.0};
    r.welfare_linear = {0.75};
    r.normalized_contract = {0.9};
    r.normalized_linear = {0.75};
    EXPECT_EQ(sweep_csv(r),
              "gamma,welfare_contract,welfare_complete,welfare_linear,normalized_contract,normalized_linear\n"
              "1.5,0.9,1,0.75,0.9,0.75\n");
    UtilityCurves u{{2}, {{-0.5, 0.25}}};
    EXPECT_EQ(curves_csv(u), "probe_type,item_index,utility\n2,1,-0.5\n2,2,0.25\n");
}
