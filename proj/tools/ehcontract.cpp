// ehcontract: solve, sweep, curves and verify from the command line.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ehcontract/cli.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma_min, gamma_max;
    std::optional<int> gamma_steps;
    std::string contract;
    std::optional<double> tol;
};

ehc::RunConfig load(const Options& o) {
    ehc::RunConfig c = ehc::load_config(o.config);
    if (o.seed) c.scenario.rng_seed = *o.seed;
    if (o.gamma_min) c.sweep_gamma_min = *o.gamma_min;
    if (o.gamma_max) c.sweep_gamma_max = *o.gamma_max;
    if (o.gamma_steps) {
        if (*o.gamma_steps < 1) throw ehc::ConfigError("--gamma-steps must be >= 1");
        c.sweep_gamma_steps = *o.gamma_steps;
    }
    if (o.tol) c.verify_tol = *o.tol;
    return c;
}

std::filesystem::path out_dir(const Options& o) {
    return o.out.empty() ? ehc::cli::default_out_dir() : std::filesystem::path(o.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contract design for RF energy trading between a DAP and N EAPs"};
    app.set_version_flag("--version", std::string(ehc::kVersion));
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* cfg = sub->add_option("--config", o.config, "JSON run configuration");
        if (needs_config) cfg->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out,
                        std::string("output directory (default $") + ehc::cli::kOutDirEnv + " or ./out)");
        sub->add_option("--seed", o.seed, "RNG seed, overrides the config");
    };

    auto* solve = app.add_subcommand("solve", "optimal contract and feasibility report");
    add_common(solve, true);
    auto* sweep = app.add_subcommand("sweep", "welfare of all mechanisms over a gamma grid");
    add_common(sweep, true);
    sweep->add_option("--gamma-min", o.gamma_min, "first gamma of the grid");
    sweep->add_option("--gamma-max", o.gamma_max, "last gamma of the grid");
    sweep->add_option("--gamma-steps", o.gamma_steps, "number of grid points");
    auto* curves = app.add_subcommand("curves", "per-type utility over every contract item");
    add_common(curves, true);
    auto* verify = app.add_subcommand("verify", "feasibility check of a contract CSV");
    add_common(verify, false);
    verify->add_option("--contract", o.contract, "contract CSV (type_index,theta,q,pi)")
        ->required()
        ->check(CLI::ExistingFile);
    verify->add_option("--tol", o.tol, "slack tolerance (default 1e-9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ehc::cli::kConfigError;
    }

    try {
        if (*solve) return ehc::cli::cmd_solve(load(o), out_dir(o));
        if (*sweep) return ehc::cli::cmd_sweep(load(o), out_dir(o));
        if (*curves) return ehc::cli::cmd_curves(load(o), out_dir(o));
        if (*verify) {
            double tol = ehc::kDefaultSlackTol;
            if (!o.config.empty()) tol = load(o).verify_tol;
            if (o.tol) tol = *o.tol;
            return ehc::cli::cmd_verify(o.contract, tol, out_dir(o));
        }
    } catch (const ehc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ehc::cli::kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return ehc::cli::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ehc::cli::kSolverFailure;
    }
    return ehc::cli::kConfigError;
}
