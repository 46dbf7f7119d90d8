#ifndef EHCONTRACT_IO_HPP
#define EHCONTRACT_IO_HPP

// Run configuration (JSON), CSV plot data and JSON reports.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "contract_solver.hpp"
#include "feasibility.hpp"
#include "scenario.hpp"

namespace ehc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ScenarioConfig scenario;
    std::optional<double> gamma;             // single-gamma commands
    std::optional<double> sweep_gamma_min;
    std::optional<double> sweep_gamma_max;
    int sweep_gamma_steps = 15;
    std::vector<int> probe_types;           // empty in the file: {3, 6, 9} clipped to K, else all types
    SolverConfig solver;
    double verify_tol = kDefaultSlackTol;
    std::size_t monte_carlo_samples = 10000;

    /// Gamma used by solve/curves: explicit, else the midpoint source-DAP distance.
    double resolved_gamma() const {
        return gamma ? *gamma : gamma_at(scenario, scenario.d_as_range.mid());
    }

    std::vector<double> resolved_gamma_grid() const {
        const Range r = gamma_range(scenario);
        return linspace(sweep_gamma_min.value_or(r.lo), sweep_gamma_max.value_or(r.hi),
                        sweep_gamma_steps);
    }
};

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

using nlohmann::json;

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    std::string where() const { return path_.empty() ? "config" : path_; }
    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }
    bool has(const std::string& key) const { return j_.contains(key); }

    void reject_unknown(std::initializer_list<const char*> known) const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool ok = false;
            for (const char* k : known) ok = ok || it.key() == k;
            if (!ok) throw ConfigError("unknown field '" + field(it.key()) + "'");
        }
    }

    double number(const std::string& key) const {
        const auto& v = at(key);
        if (!v.is_number()) throw ConfigError("field '" + field(key) + "' must be a number");
        return v.get<double>();
    }
    void number(const std::string& key, double& out) const {
        if (has(key)) out = number(key);
    }

    std::int64_t integer(const std::string& key) const {
        const auto& v = at(key);
        if (!v.is_number_integer()) throw ConfigError("field '" + field(key) + "' must be an integer");
        return v.get<std::int64_t>();
    }
    void integer(const std::string& key, int& out) const {
        if (has(key)) out = static_cast<int>(integer(key));
    }

    Range range(const std::string& key) const {
        const auto& v = at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError("field '" + field(key) + "' must be a [lo, hi] pair of numbers");
        return {v[0].get<double>(), v[1].get<double>()};
    }
    void range(const std::string& key, Range& out) const {
        if (has(key)) out = range(key);
    }

    Reader child(const std::string& key) const { return Reader(at(key), field(key)); }
    const json& at(const std::string& key) const {
        if (!has(key)) throw ConfigError("missing required field '" + field(key) + "'");
        return j_.at(key);
    }

private:
    const json& j_;
    std::string path_;
};

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::Reader;
    const Reader r(j, "");
    r.reject_unknown({"n_eaps", "k_types", "physical", "power_unit", "rng_seed", "gamma", "sweep",
                      "curves", "solver", "verify", "monte_carlo_samples"});
    RunConfig c;
    c.scenario.n_eaps = static_cast<int>(r.integer("n_eaps"));
    c.scenario.k_types = static_cast<int>(r.integer("k_types"));

    if (r.has("physical")) {
        const Reader p = r.child("physical");
        p.reject_unknown({"eta", "bandwidth_mhz", "noise_mw", "a_range", "d_ms_range", "d_as_range",
                          "path_loss_alpha", "ref_atten_db"});
        p.number("eta", c.scenario.eta);
        p.number("bandwidth_mhz", c.scenario.bandwidth);
        p.number("noise_mw", c.scenario.noise);
        p.range("a_range", c.scenario.a_range);
        p.range("d_ms_range", c.scenario.d_ms_range);
        p.range("d_as_range", c.scenario.d_as_range);
        p.number("path_loss_alpha", c.scenario.path_loss_alpha);
        p.number("ref_atten_db", c.scenario.ref_atten_db);
    }
    if (r.has("power_unit")) {
        const auto& u = r.at("power_unit");
        if (u == "mW")
            c.scenario.power_scale = 1.0;
        else if (u == "uW")
            c.scenario.power_scale = 1e3;
        else
            throw ConfigError("field 'power_unit' must be \"mW\" or \"uW\"");
    }
    if (r.has("rng_seed")) {
        const auto& v = r.at("rng_seed");
        if (!v.is_number_unsigned()) throw ConfigError("field 'rng_seed' must be a non-negative integer");
        c.scenario.rng_seed = v.get<std::uint64_t>();
    }
    if (r.has("gamma")) c.gamma = r.number("gamma");
    if (r.has("sweep")) {
        const Reader s = r.child("sweep");
        s.reject_unknown({"gamma_min", "gamma_max", "gamma_steps"});
        if (s.has("gamma_min")) c.sweep_gamma_min = s.number("gamma_min");
        if (s.has("gamma_max")) c.sweep_gamma_max = s.number("gamma_max");
        s.integer("gamma_steps", c.sweep_gamma_steps);
    }
    if (r.has("curves")) {
        const Reader s = r.child("curves");
        s.reject_unknown({"probe_types"});
        if (s.has("probe_types")) {
            const auto& v = s.at("probe_types");
            if (!v.is_array()) throw ConfigError("field 'curves.probe_types' must be an array of integers");
            c.probe_types.clear();
            for (const auto& e : v) {
                if (!e.is_number_integer())
                    throw ConfigError("field 'curves.probe_types' must be an array of integers");
                c.probe_types.push_back(e.get<int>());
            }
        }
    }
    if (r.has("solver")) {
        const Reader s = r.child("solver");
        s.reject_unknown({"grad_tol", "max_iters", "backtrack_beta", "backtrack_c"});
        s.number("grad_tol", c.solver.grad_tol);
        s.integer("max_iters", c.solver.max_iters);
        s.number("backtrack_beta", c.solver.backtrack_beta);
        s.number("backtrack_c", c.solver.backtrack_c);
    }
    if (r.has("verify")) {
        const Reader s = r.child("verify");
        s.reject_unknown({"tol"});
        s.number("tol", c.verify_tol);
    }
    if (r.has("monte_carlo_samples")) {
        const auto n = r.integer("monte_carlo_samples");
        if (n < 1) throw ConfigError("field 'monte_carlo_samples' must be >= 1");
        c.monte_carlo_samples = static_cast<std::size_t>(n);
    }

    try {
        c.scenario.validate();
        c.solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.sweep_gamma_steps < 1) throw ConfigError("field 'sweep.gamma_steps' must be >= 1");
    if (c.gamma && !(*c.gamma >= 0.0)) throw ConfigError("field 'gamma' must be >= 0");
    if (!(c.verify_tol >= 0.0)) throw ConfigError("field 'verify.tol' must be >= 0");
    if (c.probe_types.empty()) {
        for (int t : {3, 6, 9})
            if (t <= c.scenario.k_types) c.probe_types.push_back(t);
        if (c.probe_types.empty())
            for (int t = 1; t <= c.scenario.k_types; ++t) c.probe_types.push_back(t);
    }
    for (int t : c.probe_types)
        if (t < 1 || t > c.scenario.k_types)
            throw ConfigError("field 'curves.probe_types': probe type " + std::to_string(t) +
                              " out of range 1.." + std::to_string(c.scenario.k_types));
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed config at " + detail::line_col(text, e.byte) + ": " + e.what());
    }
    return parse_config(j);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunConfig load_config(const std::filesystem::path& path) {
    return parse_config_text(read_file(path));
}

/// Fully resolved configuration; parse_config(to_json(c)) reproduces c.
inline nlohmann::json to_json(const RunConfig& c) {
    using nlohmann::json;
    const auto& s = c.scenario;
    json j;
    j["n_eaps"] = s.n_eaps;
    j["k_types"] = s.k_types;
    j["physical"] = {{"eta", s.eta},
                     {"bandwidth_mhz", s.bandwidth},
                     {"noise_mw", s.noise},
                     {"a_range", {s.a_range.lo, s.a_range.hi}},
                     {"d_ms_range", {s.d_ms_range.lo, s.d_ms_range.hi}},
                     {"d_as_range", {s.d_as_range.lo, s.d_as_range.hi}},
                     {"path_loss_alpha", s.path_loss_alpha},
                     {"ref_atten_db", s.ref_atten_db}};
    j["power_unit"] = s.power_scale == 1.0 ? "mW" : "uW";
    j["rng_seed"] = s.rng_seed;
    j["gamma"] = c.resolved_gamma();
    const auto grid = c.resolved_gamma_grid();
    j["sweep"] = {{"gamma_min", grid.front()},
                  {"gamma_max", grid.back()},
                  {"gamma_steps", c.sweep_gamma_steps}};
    j["curves"] = {{"probe_types", c.probe_types}};
    j["solver"] = {{"grad_tol", c.solver.grad_tol},
                   {"max_iters", c.solver.max_iters},
                   {"backtrack_beta", c.solver.backtrack_beta},
                   {"backtrack_c", c.solver.backtrack_c}};
    j["verify"] = {{"tol", c.verify_tol}};
    j["monte_carlo_samples"] = c.monte_carlo_samples;
    return j;
}

// CSV schemas. Column names and order are part of the file format.
inline constexpr const char* kContractCsvHeader = "type_index,theta,q,pi";
inline constexpr const char* kSweepCsvHeader =
    "gamma,welfare_contract,welfare_complete,welfare_linear,normalized_contract,normalized_linear";
inline constexpr const char* kCurvesCsvHeader = "probe_type,item_index,utility";

inline std::string contract_csv(const Contract& c, const TypeProfile& profile) {
    detail::require_same_size(c.size(), profile.size(), "contract_csv");
    std::string out = std::string(kContractCsvHeader) + "\n";
    for (std::size_t k = 0; k < c.size(); ++k) {
        out += std::to_string(k + 1) + "," + format_double(profile.theta(k)) + "," +
               format_double(c.items[k].q) + "," + format_double(c.items[k].pi) + "\n";
    }
    return out;
}

inline std::string sweep_csv(const SweepResult& r) {
    std::string out = std::string(kSweepCsvHeader) + "\n";
    for (std::size_t i = 0; i < r.gamma_grid.size(); ++i) {
        out += format_double(r.gamma_grid[i]) + "," + format_double(r.welfare_contract[i]) + "," +
               format_double(r.welfare_complete[i]) + "," + format_double(r.welfare_linear[i]) +
               "," + format_double(r.normalized_contract[i]) + "," +
               format_double(r.normalized_linear[i]) + "\n";
    }
    return out;
}

inline std::string curves_csv(const UtilityCurves& u) {
    std::string out = std::string(kCurvesCsvHeader) + "\n";
    for (std::size_t p = 0; p < u.probe_types.size(); ++p)
        for (std::size_t j = 0; j < u.utilities[p].size(); ++j)
            out += std::to_string(u.probe_types[p]) + "," + std::to_string(j + 1) + "," +
                   format_double(u.utilities[p][j]) + "\n";
    return out;
}

struct ContractTable {
    TypeProfile profile;
    Contract contract;
};

/// Parses a contract CSV written by contract_csv(). Rows must be ordered by
/// type_index starting at 1.
inline ContractTable parse_contract_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> ConfigError {
        return ConfigError("contract CSV line " + std::to_string(lineno) + ": " + msg);
    };
    auto strip = [](std::string& s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    };

    ++lineno;
    if (!std::getline(in, line)) throw fail("empty file");
    strip(line);
    if (line != kContractCsvHeader) throw fail(std::string("expected header '") + kContractCsvHeader + "'");

    std::vector<double> theta, q, pi;
    while (std::getline(in, line)) {
        ++lineno;
        strip(line);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 4) throw fail("expected 4 columns, got " + std::to_string(cells.size()));
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            const auto& s = cells[static_cast<std::size_t>(i)];
            const auto res = std::from_chars(s.data(), s.data() + s.size(), vals[i]);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
                throw fail("cannot parse number '" + s + "'");
        }
        if (vals[0] != static_cast<double>(theta.size() + 1))
            throw fail("type_index must run 1, 2, ... in order");
        if (vals[2] < 0.0 || vals[3] < 0.0) throw fail("q and pi must be non-negative");
        theta.push_back(vals[1]);
        q.push_back(vals[2]);
        pi.push_back(vals[3]);
    }
    if (theta.empty()) throw fail("no contract rows");
    ContractTable t;
    try {
        t.profile = TypeProfile(theta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("contract CSV: ") + e.what());
    }
    t.contract = Contract::from(q, pi);
    return t;
}

inline nlohmann::json to_json(const FeasibilityReport& r) {
    return {{"feasible", r.feasible()},
            {"ir_ok", r.ir_ok()},
            {"ic_ok", r.ic_ok()},
            {"monotone_q", r.monotone_q},
            {"monotone_pi", r.monotone_pi},
            {"self_reveal", r.self_reveal},
            {"self_reveal_by_type", r.self_reveal_by_type},
            {"min_slack", r.min_slack},
            {"tol", r.tol},
            {"ir_slacks", r.ir_slacks},
            {"ic_slack_matrix", r.ic_slack_matrix}};
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace ehc

#endif
