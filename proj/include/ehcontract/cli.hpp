#ifndef EHCONTRACT_CLI_HPP
#define EHCONTRACT_CLI_HPP

// Command implementations behind the `ehcontract` tool. Each command writes
// its outputs plus manifest.json into an output directory and returns the
// process exit code.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "contract_solver.hpp"
#include "feasibility.hpp"
#include "io.hpp"
#include "scenario.hpp"
#include "version.hpp"

namespace ehc::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 1,
    kSolverFailure = 2,
    kInfeasible = 3,
};

inline constexpr const char* kOutDirEnv = "EHCONTRACT_OUT_DIR";

inline std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return "out";
}

inline std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Manifest {
public:
    Manifest(std::string command, std::filesystem::path out_dir)
        : out_dir_(std::move(out_dir)), started_(utc_now()) {
        j_["command"] = std::move(command);
        j_["tool_version"] = kVersion;
        j_["rng"] = kRngName;
    }

    void config(const RunConfig& c) {
        j_["config_echo"] = to_json(c);
        j_["seed"] = c.scenario.rng_seed;
    }
    void set(const std::string& key, nlohmann::json v) { j_[key] = std::move(v); }

    void write_output(const std::string& name, const std::string& content) {
        write_file(out_dir_ / name, content);
        outputs_.push_back((out_dir_ / name).string());
    }

    void finish(int exit_code) {
        j_["exit_code"] = exit_code;
        j_["timestamps"] = {{"started_utc", started_}, {"finished_utc", utc_now()}};
        outputs_.push_back((out_dir_ / "manifest.json").string());
        j_["output_paths"] = outputs_;
        write_file(out_dir_ / "manifest.json", j_.dump(2) + "\n");
    }

private:
    std::filesystem::path out_dir_;
    std::string started_;
    std::vector<std::string> outputs_;
    nlohmann::json j_;
};

inline nlohmann::json solver_json(const SolveResult& r) {
    return {{"status", to_string(r.status)},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"kkt_residual", r.kkt_residual},
            {"objective", r.objective}};
}

/// Optimal contract at the configured gamma: contract.csv, feasibility.json.
inline int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& log = std::cerr) {
    std::filesystem::create_directories(out_dir);
    Manifest m("solve", out_dir);
    m.config(cfg);

    const auto& sc = cfg.scenario;
    const TypeProfile profile = build_type_ladder(sc);
    const double gamma = cfg.resolved_gamma();
    const SolveResult r = solve_scaled(profile, gamma, sc.bandwidth, sc.n_eaps, sc.power_scale, cfg.solver);
    const FeasibilityReport rep = verify_contract(r.contract, profile, cfg.verify_tol);

    m.write_output("contract.csv", contract_csv(r.contract, profile));
    nlohmann::json fj = to_json(rep);
    fj["solver"] = solver_json(r);
    fj["gamma"] = gamma;
    m.write_output("feasibility.json", fj.dump(2) + "\n");

    // Exact expectation vs. a seeded Monte Carlo estimate.
    const CountDistribution dist(sc.n_eaps, sc.k_types);
    const double exact = expected_social_welfare(dist, r.contract, profile, gamma, sc.bandwidth);
    const auto mc = monte_carlo_expected_welfare(r.contract, profile, gamma, sc.bandwidth,
                                                 sc.n_eaps, cfg.monte_carlo_samples, sc.rng_seed);
    m.set("expected_welfare", {{"exact", exact},
                               {"monte_carlo", mc.mean},
                               {"monte_carlo_std_error", mc.std_error},
                               {"samples", mc.samples}});

    int code = kSuccess;
    if (!r.ok()) {
        log << "solve: solver failed (" << to_string(r.status) << ")\n";
        code = kSolverFailure;
    } else if (!rep.feasible()) {
        log << "solve: contract infeasible, min slack " << rep.min_slack << "\n";
        code = kInfeasible;
    }
    m.finish(code);
    return code;
}

/// Welfare of the three mechanisms over the gamma grid: sweep.csv.
inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& log = std::cerr) {
    std::filesystem::create_directories(out_dir);
    Manifest m("sweep", out_dir);
    m.config(cfg);
    int code = kSuccess;
    try {
        const SweepResult r = run_sweep(cfg.scenario, cfg.resolved_gamma_grid(), cfg.solver);
        m.write_output("sweep.csv", sweep_csv(r));
    } catch (const SweepError& e) {
        log << "sweep: " << e.what() << "\n";
        m.set("failed_gamma", e.gamma());
        code = kSolverFailure;
    }
    m.finish(code);
    return code;
}

/// Utility of each probe type over every contract item: curves.csv.
inline int cmd_curves(const RunConfig& cfg, const std::filesystem::path& out_dir,
                      std::ostream& log = std::cerr) {
    std::filesystem::create_directories(out_dir);
    Manifest m("curves", out_dir);
    m.config(cfg);

    const auto& sc = cfg.scenario;
    const TypeProfile profile = build_type_ladder(sc);
    const SolveResult r = solve_scaled(profile, cfg.resolved_gamma(), sc.bandwidth, sc.n_eaps,
                                       sc.power_scale, cfg.solver);
    m.set("solver", solver_json(r));
    int code = kSuccess;
    if (!r.ok()) {
        log << "curves: solver failed (" << to_string(r.status) << ")\n";
        code = kSolverFailure;
    } else {
        m.write_output("curves.csv", curves_csv(utility_curves(r.contract, profile, cfg.probe_types)));
    }
    m.finish(code);
    return code;
}

/// Feasibility check of an existing contract CSV: feasibility.json.
inline int cmd_verify(const std::filesystem::path& contract_path, double tol,
                      const std::filesystem::path& out_dir, std::ostream& log = std::cerr) {
    const ContractTable t = parse_contract_csv(read_file(contract_path));
    std::filesystem::create_directories(out_dir);
    Manifest m("verify", out_dir);
    m.set("contract_path", contract_path.string());
    const FeasibilityReport rep = verify_contract(t.contract, t.profile, tol);
    m.write_output("feasibility.json", to_json(rep).dump(2) + "\n");
    const int code = rep.feasible() ? kSuccess : kInfeasible;
    if (code != kSuccess) log << "verify: contract infeasible, min slack " << rep.min_slack << "\n";
    m.finish(code);
    return code;
}

}  // namespace ehc::cli

#endif
