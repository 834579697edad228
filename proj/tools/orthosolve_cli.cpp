// orthosolve command-line driver: generate benchmark instances, run solves,
// sweep parameters, check parameter conditions, round assignment matrices.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "orthosolve/config.hpp"
#include "orthosolve/orthosolve.hpp"
#include "orthosolve/problem_io.hpp"

namespace {

using namespace orthosolve;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitCheckFailed = 4;

std::optional<std::uint64_t> env_seed_override() {
    const char* raw = std::getenv("ORTHOSOLVE_SEED");
    if (!raw || !*raw) return std::nullopt;
    try {
        return static_cast<std::uint64_t>(std::stoull(raw));
    } catch (...) {
        throw ConfigError("ORTHOSOLVE_SEED is not a nonnegative integer");
    }
}

int cmd_generate(const std::string& kind, int m, int n, int p, double mu, std::uint64_t seed,
                 const std::string& points1, const std::string& points2,
                 const std::string& out_dir) {
    if (auto s = env_seed_override()) seed = *s;
    Problem prob;
    if (kind == "qp") {
        prob = gen_qp(m, n, mu, seed);
    } else if (kind == "spca") {
        prob = gen_spca(p, m, n, mu, seed);
    } else if (kind == "gm") {
        if (!points1.empty() || !points2.empty()) {
            if (points1.empty() || points2.empty())
                throw ConfigError("gm generation needs both --points1 and --points2");
            prob = gen_graph_matching(read_points(points1), read_points(points2), mu);
        } else {
            prob = gen_graph_matching_synthetic(n, mu, seed);
        }
    } else {
        throw ConfigError("unknown problem kind '" + kind + "'");
    }
    save_problem(out_dir, prob);
    std::cout << "wrote " << prob.kind << " problem (m=" << prob.m << ", n=" << prob.n
              << ", mu=" << prob.mu << ") to " << out_dir << "\n";
    return kExitOk;
}

int cmd_solve(const std::string& config_path, bool no_timing_flag) {
    RunConfig cfg = load_run_config(config_path);
    if (auto s = env_seed_override()) {
        cfg.seed = *s;
        cfg.init_seed = *s + 1000;
    }
    if (no_timing_flag) cfg.no_timing = true;

    const Problem prob = build_problem(cfg);
    const Matrix x0 = build_init(cfg, prob);

    RunOptions options;
    options.log_every = cfg.log_every;
    options.check_invariants = cfg.check_invariants;
    options.collect_timing = !cfg.no_timing;

    RunRecord rec;
    nlohmann::json params_echo;
    if (cfg.algorithm == "lsalm") {
        rec = run(prob, cfg.lsalm, cfg.stop, x0, options);
        params_echo = detail::lsalm_params_to_json(cfg.lsalm);
    } else {
        rec = rgd(prob, cfg.rgd, x0, options);
        params_echo = detail::rgd_params_to_json(cfg.rgd);
    }

    if (!cfg.csv_path.empty()) write_run_csv(cfg.csv_path, rec, cfg.no_timing);
    if (!cfg.json_path.empty()) {
        std::ofstream f(cfg.json_path, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + cfg.json_path);
        f << run_footer_json(rec, params_echo, cfg.no_timing).dump(2) << '\n';
    }

    std::cout << "status=" << to_string(rec.status) << " iters=" << rec.total_iters
              << " obj=" << format_real(rec.final_obj) << " feas=" << format_real(rec.final_feas)
              << " kkt=" << format_real(rec.final_kkt) << "\n";
    switch (rec.status) {
        case RunStatus::Converged: return kExitOk;
        case RunStatus::Budget: return kExitBudget;
        case RunStatus::Diverged: return kExitDiverged;
    }
    return kExitUsage;
}

int cmd_sweep(const std::string& spec_path, const std::string& csv_out, int jobs) {
    const SweepSpec spec = load_sweep_spec(spec_path);
    const SweepResult result = run_sweep(spec, jobs);
    if (!csv_out.empty()) {
        write_sweep_csv(csv_out, result, spec.grid);
        std::cout << "wrote " << result.cells.size() << " cells to " << csv_out << "\n";
    } else {
        write_sweep_csv(std::cout, result, spec.grid);
    }
    return kExitOk;
}

int cmd_check(const std::string& config_path, double delta, double xi) {
    const RunConfig cfg = load_run_config(config_path);
    if (cfg.algorithm != "lsalm") throw ConfigError("check: only lsalm configs have conditions");
    const Problem prob = build_problem(cfg);
    const ConditionReport report = validate_params(prob, cfg.lsalm);

    std::printf("%-44s %14s %14s  %s\n", "condition", "lhs", "rhs", "verdict");
    for (const auto& row : report.rows) {
        if (!row.defined)
            std::printf("%-44s %14s %14s  %s\n", row.name.c_str(), "-", "-",
                        "UNDEFINED (needs r > mu_rho)");
        else
            std::printf("%-44s %14.6g %14.6g  %s\n", row.name.c_str(), row.lhs, row.rhs,
                        row.pass ? "PASS" : "FAIL");
    }
    if (report.beta_empirical_defined)
        std::printf("empirical beta scale eps*alpha*(1+4R^2a/(r-mu))^-2 = %.6g\n",
                    report.beta_empirical);
    std::printf("theory verdict:    %s\n", report.theory_pass ? "PASS" : "FAIL");
    std::printf("practical verdict: %s\n", report.practical_pass ? "PASS" : "FAIL");

    const RRecommendation rec = recommend_r_RY(prob, cfg.lsalm, delta, xi);
    std::printf("recommended (delta=%g, xi=%g): r >= %.6g (c1=%.6g, c2=%.6g), R_Y = %.6g\n", delta,
                xi, rec.r_min, rec.c1, rec.c2, rec.R_Y_recommended);
    return report.practical_pass ? kExitOk : kExitCheckFailed;
}

int cmd_round(const std::string& solution_path, const std::string& truth_path,
              const std::string& out_path) {
    const Matrix solution = read_matrix(solution_path);
    const Matrix rounded = round_assignment(solution);
    if (!out_path.empty()) write_matrix(out_path, rounded);
    if (!truth_path.empty()) {
        const Matrix truth = read_matrix(truth_path);
        std::cout << "f_measure=" << format_real(f_measure(rounded, truth)) << "\n";
    } else {
        std::cout << "rounded " << rounded.rows() << "x" << rounded.cols() << " assignment\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthosolve: retraction-free solver for optimization over the Stiefel manifold"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a benchmark problem directory");
    std::string gen_kind, gen_out, gen_points1, gen_points2;
    int gen_m = 0, gen_n = 0, gen_p = 0;
    double gen_mu = 0.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("kind", gen_kind, "qp | spca | gm")->required();
    gen->add_option("--m", gen_m, "rows");
    gen->add_option("--n", gen_n, "columns");
    gen->add_option("--p", gen_p, "data rows (spca)");
    gen->add_option("--mu", gen_mu, "regularization / penalty weight");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--points1", gen_points1, "landmark file for graph 1 (gm)");
    gen->add_option("--points2", gen_points2, "landmark file for graph 2 (gm)");
    gen->add_option("--out", gen_out, "output directory")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "run a solver from a JSON config");
    std::string solve_config;
    bool solve_no_timing = false;
    solve->add_option("config", solve_config, "run config JSON path")->required();
    solve->add_flag("--no-timing", solve_no_timing, "zero timing outputs for reproducibility");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON spec");
    std::string sweep_spec, sweep_csv;
    int sweep_jobs = 1;
    sweep->add_option("spec", sweep_spec, "sweep spec JSON path")->required();
    sweep->add_option("--out", sweep_csv, "output CSV path (stdout if omitted)");
    sweep->add_option("--jobs", sweep_jobs, "parallel workers over cells")->default_val(1);

    // check
    auto* check = app.add_subcommand("check", "evaluate parameter conditions for a config");
    std::string check_config;
    double check_delta = 0.5, check_xi = 1.0;
    check->add_option("config", check_config, "run config JSON path")->required();
    check->add_option("--delta", check_delta, "constraint qualification radius in (0,1)");
    check->add_option("--xi", check_xi, "displacement threshold > 0");

    // round
    auto* round_cmd = app.add_subcommand("round", "round a solution to a permutation");
    std::string round_solution, round_truth, round_out;
    round_cmd->add_option("solution", round_solution, "solution matrix file")->required();
    round_cmd->add_option("--truth", round_truth, "ground-truth permutation file");
    round_cmd->add_option("--out", round_out, "write the rounded permutation here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_kind, gen_m, gen_n, gen_p, gen_mu, gen_seed, gen_points1,
                                gen_points2, gen_out);
        if (solve->parsed()) return cmd_solve(solve_config, solve_no_timing);
        if (sweep->parsed()) return cmd_sweep(sweep_spec, sweep_csv, sweep_jobs);
        if (check->parsed()) return cmd_check(check_config, check_delta, check_xi);
        if (round_cmd->parsed()) return cmd_round(round_solution, round_truth, round_out);
    } catch (const orthosolve::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
