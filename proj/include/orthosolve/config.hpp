#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "orthosolve/baselines.hpp"
#include "orthosolve/harness.hpp"
#include "orthosolve/lsalm.hpp"
#include "orthosolve/problem.hpp"
#include "orthosolve/problem_io.hpp"

namespace orthosolve {

// One solve, fully described by a JSON file: problem source, algorithm and
// its knobs, stopping rule, initialization, and output destinations.
struct RunConfig {
    // problem
    std::string problem_kind;  // qp | spca | gm | load
    int m = 0, n = 0, p = 0;
    double mu = 0.0;
    std::uint64_t seed = 0;
    std::string load_path;            // load
    std::string points1, points2;     // gm from landmark files

    // algorithm
    std::string algorithm = "lsalm";  // lsalm | rgd
    LsalmParams lsalm;
    RgdParams rgd;
    StopRule stop = StopRule::qp();

    // init
    std::string init_kind = "seed";  // seed | path | rsm_warmstart
    std::uint64_t init_seed = 0;
    std::string init_path;
    long rsm_iters = 250;

    // output
    std::string csv_path;
    std::string json_path;
    long log_every = 1;
    bool no_timing = false;
    bool check_invariants = false;
};

namespace detail {

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    try {
        nlohmann::json j;
        f >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

inline LsalmParams lsalm_params_from_json(const nlohmann::json& j) {
    LsalmParams p;
    p.rho = get_or(j, "rho", p.rho);
    p.lambda = get_or(j, "lambda", p.lambda);
    p.r = get_or(j, "r", p.r);
    p.alpha = get_or(j, "alpha", p.alpha);
    p.beta = get_or(j, "beta", p.beta);
    p.eps = get_or(j, "eps", p.eps);
    p.R_Y = get_or(j, "R_Y", p.R_Y);
    p.R_X_op = get_or(j, "R_X_op", p.R_X_op);
    p.max_iter = get_or<long>(j, "max_iter", p.max_iter);
    p.divergence_factor = get_or(j, "divergence_factor", p.divergence_factor);
    return p;
}

inline nlohmann::json lsalm_params_to_json(const LsalmParams& p) {
    return nlohmann::json{{"rho", p.rho},       {"lambda", p.lambda},
                          {"r", p.r},           {"alpha", p.alpha},
                          {"beta", p.beta},     {"eps", p.eps},
                          {"R_Y", p.R_Y},       {"R_X_op", p.R_X_op},
                          {"max_iter", p.max_iter},
                          {"divergence_factor", p.divergence_factor}};
}

inline RgdParams rgd_params_from_json(const nlohmann::json& j) {
    RgdParams p;
    p.eta = get_or(j, "eta", p.eta);
    p.gamma = get_or(j, "gamma", p.gamma);
    p.delta = get_or(j, "delta", p.delta);
    p.max_iter = get_or<long>(j, "max_iter", p.max_iter);
    p.tol_grad = get_or(j, "tol_grad", p.tol_grad);
    return p;
}

inline nlohmann::json rgd_params_to_json(const RgdParams& p) {
    return nlohmann::json{{"eta", p.eta},
                          {"gamma", p.gamma},
                          {"delta", p.delta},
                          {"max_iter", p.max_iter},
                          {"tol_grad", p.tol_grad}};
}

inline StopRule stop_rule_from_json(const nlohmann::json& j) {
    const std::string mode = get_or<std::string>(j, "mode", "qp");
    StopRule rule;
    if (mode == "qp")
        rule = StopRule::qp();
    else if (mode == "spca")
        rule = StopRule::spca();
    else if (mode == "gm")
        rule = StopRule::gm();
    else if (mode == "custom")
        rule = StopRule::custom(j.at("tol_dx").get<double>(), j.at("tol_feas").get<double>(),
                                j.at("tol_stat").get<double>());
    else
        throw ConfigError("unknown stop mode '" + mode + "'");
    rule.tol_dx = get_or(j, "tol_dx", rule.tol_dx);
    rule.tol_feas = get_or(j, "tol_feas", rule.tol_feas);
    rule.tol_stat = get_or(j, "tol_stat", rule.tol_stat);
    return rule;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        const auto& prob = j.at("problem");
        cfg.problem_kind = prob.at("kind").get<std::string>();
        cfg.m = detail::get_or(prob, "m", 0);
        cfg.n = detail::get_or(prob, "n", 0);
        cfg.p = detail::get_or(prob, "p", 0);
        cfg.mu = detail::get_or(prob, "mu", 0.0);
        cfg.seed = detail::get_or<std::uint64_t>(prob, "seed", 0);
        cfg.load_path = detail::get_or<std::string>(prob, "path", "");
        cfg.points1 = detail::get_or<std::string>(prob, "points1", "");
        cfg.points2 = detail::get_or<std::string>(prob, "points2", "");

        cfg.algorithm = detail::get_or<std::string>(j, "algorithm", "lsalm");
        if (cfg.algorithm != "lsalm" && cfg.algorithm != "rgd")
            throw ConfigError("unknown algorithm '" + cfg.algorithm + "'");
        if (j.contains("params")) {
            if (cfg.algorithm == "lsalm")
                cfg.lsalm = detail::lsalm_params_from_json(j.at("params"));
            else
                cfg.rgd = detail::rgd_params_from_json(j.at("params"));
        }
        if (j.contains("stop")) cfg.stop = detail::stop_rule_from_json(j.at("stop"));

        if (j.contains("init")) {
            const auto& init = j.at("init");
            if (init.contains("path")) {
                cfg.init_kind = "path";
                cfg.init_path = init.at("path").get<std::string>();
            } else if (init.contains("rsm_warmstart")) {
                cfg.init_kind = "rsm_warmstart";
                const auto& rsm = init.at("rsm_warmstart");
                cfg.rsm_iters = detail::get_or<long>(rsm, "iters", 250);
                cfg.init_seed = detail::get_or<std::uint64_t>(rsm, "seed", cfg.seed + 1000);
            } else {
                cfg.init_kind = "seed";
                cfg.init_seed = detail::get_or<std::uint64_t>(init, "seed", cfg.seed + 1000);
            }
        } else {
            cfg.init_seed = cfg.seed + 1000;
        }

        if (j.contains("output")) {
            const auto& out = j.at("output");
            cfg.csv_path = detail::get_or<std::string>(out, "csv", "");
            cfg.json_path = detail::get_or<std::string>(out, "json", "");
            cfg.log_every = detail::get_or<long>(out, "log_every", 1);
            cfg.no_timing = detail::get_or(out, "no_timing", false);
            cfg.check_invariants = detail::get_or(out, "check_invariants", false);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    return parse_run_config(detail::load_json_file(path));
}

inline Problem build_problem(const RunConfig& cfg) {
    if (cfg.problem_kind == "qp") return gen_qp(cfg.m, cfg.n, cfg.mu, cfg.seed);
    if (cfg.problem_kind == "spca") return gen_spca(cfg.p, cfg.m, cfg.n, cfg.mu, cfg.seed);
    if (cfg.problem_kind == "gm") {
        if (!cfg.points1.empty() || !cfg.points2.empty()) {
            if (cfg.points1.empty() || cfg.points2.empty())
                throw ConfigError("gm problem needs both points1 and points2");
            return gen_graph_matching(read_points(cfg.points1), read_points(cfg.points2), cfg.mu);
        }
        return gen_graph_matching_synthetic(cfg.n, cfg.mu, cfg.seed);
    }
    if (cfg.problem_kind == "load") {
        if (cfg.load_path.empty()) throw ConfigError("load problem needs a path");
        return load_problem(cfg.load_path);
    }
    throw ConfigError("unknown problem kind '" + cfg.problem_kind + "'");
}

inline Matrix build_init(const RunConfig& cfg, const Problem& p) {
    if (cfg.init_kind == "path") return read_matrix(cfg.init_path);
    const Matrix x0 = init_feasible(p, cfg.init_seed);
    if (cfg.init_kind == "rsm_warmstart") return rsm_warmstart(p, cfg.rsm_iters, x0);
    return x0;
}

inline SweepSpec parse_sweep_spec(const nlohmann::json& j) {
    SweepSpec spec;
    try {
        const auto& prob = j.at("problem");
        spec.problem.kind = prob.at("kind").get<std::string>();
        spec.problem.m = detail::get_or(prob, "m", 0);
        spec.problem.n = detail::get_or(prob, "n", 0);
        spec.problem.p = detail::get_or(prob, "p", 0);
        spec.problem.mu = detail::get_or(prob, "mu", 0.0);
        spec.problem.seeds = prob.at("seeds").get<std::vector<std::uint64_t>>();
        spec.problem.init_seed_offset =
            detail::get_or<std::uint64_t>(prob, "init_seed_offset", 1000);
        spec.base_params = detail::lsalm_params_from_json(j.at("base_params"));
        if (j.contains("stop")) spec.stop = detail::stop_rule_from_json(j.at("stop"));
        if (j.contains("grid")) {
            spec.grid = true;
            spec.r_values = j.at("grid").at("r_values").get<std::vector<double>>();
            spec.beta_values = j.at("grid").at("beta_values").get<std::vector<double>>();
        } else {
            spec.varied = j.at("varied").get<std::string>();
            spec.values = j.at("values").get<std::vector<double>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
    return parse_sweep_spec(detail::load_json_file(path));
}

// JSON footer written next to the iteration CSV.
inline nlohmann::json run_footer_json(const RunRecord& rec, const nlohmann::json& params_echo,
                                      bool no_timing) {
    nlohmann::json j{{"status", to_string(rec.status)},
                     {"total_iters", rec.total_iters},
                     {"final_obj", rec.final_obj},
                     {"final_feas", rec.final_feas},
                     {"final_kkt", rec.final_kkt},
                     {"stationarity_bound", rec.stationarity_bound},
                     {"wall_ms", no_timing ? 0.0 : rec.wall_ms},
                     {"params", params_echo}};
    if (rec.invariant_checks > 0) {
        j["invariant_checks"] = rec.invariant_checks;
        j["invariant_violations"] = rec.invariant_violations;
    }
    return j;
}

}  // namespace orthosolve
