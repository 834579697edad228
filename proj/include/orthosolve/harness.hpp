#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "orthosolve/lsalm.hpp"
#include "orthosolve/problem.hpp"
#include "orthosolve/record.hpp"

namespace orthosolve {

// Fraction of entries with |x_ij| < threshold.
inline double sparsity(const Matrix& x, double threshold = 1e-5) {
    if (threshold <= 0.0) throw DomainError("sparsity: threshold must be positive");
    long count = 0;
    for (double v : x.data())
        if (std::abs(v) < threshold) ++count;
    return static_cast<double>(count) / static_cast<double>(x.size());
}

// Row-wise argmax rounding with greedy conflict repair: the row with the
// largest original entry keeps a contested column, every loser moves to its
// best currently-empty column. Ties break toward the lowest index. Always
// terminates with a valid permutation because each relocation fills an empty
// column.
inline Matrix round_assignment(const Matrix& x) {
    if (x.rows() != x.cols()) throw ShapeMismatch("round_assignment: matrix must be square");
    const int n = x.rows();
    std::vector<int> assign(n, 0);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int j = 1; j < n; ++j)
            if (x(i, j) > x(i, best)) best = j;
        assign[i] = best;
    }

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<int>> by_col(n);
        for (int i = 0; i < n; ++i) by_col[assign[i]].push_back(i);
        for (int c = 0; c < n; ++c) {
            if (by_col[c].size() <= 1) continue;
            int winner = by_col[c][0];
            for (int i : by_col[c])
                if (x(i, c) > x(winner, c)) winner = i;
            for (int loser : by_col[c]) {
                if (loser == winner) continue;
                int target = -1;
                for (int c2 = 0; c2 < n; ++c2) {
                    if (!by_col[c2].empty()) continue;
                    if (target < 0 || x(loser, c2) > x(loser, target)) target = c2;
                }
                assign[loser] = target;
                by_col[target].push_back(loser);
                changed = true;
            }
            by_col[c].assign(1, winner);
        }
    }

    Matrix out(n, n);
    for (int i = 0; i < n; ++i) out(i, assign[i]) = 1.0;
    return out;
}

inline bool is_permutation_matrix(const Matrix& x) {
    if (x.rows() != x.cols()) return false;
    const int n = x.rows();
    std::vector<int> col_count(n, 0);
    for (int i = 0; i < n; ++i) {
        int row_count = 0;
        for (int j = 0; j < n; ++j) {
            const double v = x(i, j);
            if (v == 1.0) {
                ++row_count;
                ++col_count[j];
            } else if (v != 0.0) {
                return false;
            }
        }
        if (row_count != 1) return false;
    }
    for (int c : col_count)
        if (c != 1) return false;
    return true;
}

// For permutation matrices precision = recall, so F1 reduces to the fraction
// of agreeing assignments.
inline double f_measure(const Matrix& pred, const Matrix& truth) {
    if (!pred.same_shape(truth)) throw ShapeMismatch("f_measure: size mismatch");
    if (!is_permutation_matrix(pred) || !is_permutation_matrix(truth))
        throw DomainError("f_measure: arguments must be permutation matrices");
    double matches = 0.0;
    for (std::size_t k = 0; k < pred.data().size(); ++k)
        matches += pred.data()[k] * truth.data()[k];
    return matches / static_cast<double>(pred.rows());
}

// ---------------------------------------------------------------------------
// Batch statistics
// ---------------------------------------------------------------------------

struct BatchStats {
    long count = 0;
    long converged = 0;
    long budget = 0;
    long diverged = 0;
    // Means over converged runs only; NaN when none converged.
    double mean_time_ms = 0.0;
    double mean_iters = 0.0;
    double mean_time_per_iter_ms = 0.0;
    double mean_final_obj = 0.0;
    double mean_sparsity = 0.0;
};

inline BatchStats batch_stats(const std::vector<RunRecord>& records,
                              double sparsity_threshold = 1e-5) {
    if (records.empty()) throw EmptyBatch("batch_stats: empty record list");
    BatchStats stats;
    stats.count = static_cast<long>(records.size());
    double time_sum = 0.0, iter_sum = 0.0, tpi_sum = 0.0, obj_sum = 0.0, sparsity_sum = 0.0;
    for (const auto& rec : records) {
        switch (rec.status) {
            case RunStatus::Converged: ++stats.converged; break;
            case RunStatus::Budget: ++stats.budget; break;
            case RunStatus::Diverged: ++stats.diverged; break;
        }
        if (rec.status == RunStatus::Converged) {
            time_sum += rec.wall_ms;
            iter_sum += static_cast<double>(rec.total_iters);
            tpi_sum += rec.total_iters > 0 ? rec.wall_ms / rec.total_iters : 0.0;
            obj_sum += rec.final_obj;
            sparsity_sum += sparsity(rec.final_X, sparsity_threshold);
        }
    }
    if (stats.converged > 0) {
        const double c = static_cast<double>(stats.converged);
        stats.mean_time_ms = time_sum / c;
        stats.mean_iters = iter_sum / c;
        stats.mean_time_per_iter_ms = tpi_sum / c;
        stats.mean_final_obj = obj_sum / c;
        stats.mean_sparsity = sparsity_sum / c;
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        stats.mean_time_ms = stats.mean_iters = stats.mean_time_per_iter_ms = nan;
        stats.mean_final_obj = stats.mean_sparsity = nan;
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

struct ProblemTemplate {
    std::string kind = "qp";  // qp | spca | gm
    int m = 0;
    int n = 0;
    int p = 0;  // spca only
    double mu = 0.0;
    std::vector<std::uint64_t> seeds;        // one problem instance per seed
    std::uint64_t init_seed_offset = 1000;   // X0 seed = instance seed + offset
};

inline Problem instantiate(const ProblemTemplate& t, std::uint64_t seed) {
    if (t.kind == "qp") return gen_qp(t.m, t.n, t.mu, seed);
    if (t.kind == "spca") return gen_spca(t.p, t.m, t.n, t.mu, seed);
    if (t.kind == "gm") return gen_graph_matching_synthetic(t.n, t.mu, seed);
    throw ConfigError("ProblemTemplate: unknown kind '" + t.kind + "'");
}

inline void set_sweep_param(LsalmParams& params, const std::string& name, double value) {
    if (name == "rho")
        params.rho = value;
    else if (name == "lambda")
        params.lambda = value;
    else if (name == "r")
        params.r = value;
    else if (name == "alpha")
        params.alpha = value;
    else if (name == "beta")
        params.beta = value;
    else if (name == "eps")
        params.eps = value;
    else
        throw ConfigError("sweep: cannot vary unknown parameter '" + name + "'");
}

struct SweepSpec {
    ProblemTemplate problem;
    LsalmParams base_params;
    StopRule stop = StopRule::qp();
    // Either a 1-D sweep over `varied` or a 2-D grid over (r, beta).
    std::string varied;
    std::vector<double> values;
    bool grid = false;
    std::vector<double> r_values;
    std::vector<double> beta_values;

    void validate() const {
        if (problem.seeds.empty()) throw ConfigError("sweep: need at least one instance seed");
        if (grid) {
            if (r_values.empty() || beta_values.empty())
                throw ConfigError("sweep: grid needs r_values and beta_values");
        } else if (varied.empty() || values.empty()) {
            throw ConfigError("sweep: need a varied parameter with values");
        }
    }
};

struct SweepCell {
    double value1 = 0.0;  // varied value (1-D) or r (grid)
    double value2 = std::numeric_limits<double>::quiet_NaN();  // beta (grid only)
    long converged_count = 0;
    double mean_iters = 0.0;       // over converged; NaN when none
    double mean_final_feas = 0.0;  // over converged
    double mean_final_obj = 0.0;   // over converged
};

struct SweepResult {
    std::vector<SweepCell> cells;
    long instances = 0;
};

namespace detail {

inline SweepCell run_sweep_cell(const SweepSpec& spec, double v1, double v2) {
    LsalmParams params = spec.base_params;
    if (spec.grid) {
        params.r = v1;
        params.beta = v2;
    } else {
        set_sweep_param(params, spec.varied, v1);
    }
    SweepCell cell;
    cell.value1 = v1;
    cell.value2 = spec.grid ? v2 : std::numeric_limits<double>::quiet_NaN();
    double iter_sum = 0.0, feas_sum = 0.0, obj_sum = 0.0;
    RunOptions options;
    options.log_every = 0;
    options.collect_timing = false;
    for (std::uint64_t seed : spec.problem.seeds) {
        const Problem prob = instantiate(spec.problem, seed);
        const Matrix x0 =
            random_orthonormal(prob.m, prob.n, seed + spec.problem.init_seed_offset);
        const RunRecord rec = run(prob, params, spec.stop, x0, options);
        if (rec.status == RunStatus::Converged) {
            ++cell.converged_count;
            iter_sum += static_cast<double>(rec.total_iters);
            feas_sum += rec.final_feas;
            obj_sum += rec.final_obj;
        }
    }
    if (cell.converged_count > 0) {
        const double c = static_cast<double>(cell.converged_count);
        cell.mean_iters = iter_sum / c;
        cell.mean_final_feas = feas_sum / c;
        cell.mean_final_obj = obj_sum / c;
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cell.mean_iters = cell.mean_final_feas = cell.mean_final_obj = nan;
    }
    return cell;
}

}  // namespace detail

// Runs every (cell, instance) pair; failures are data, not errors. Cells are
// independent, so with jobs > 1 they are fanned out across worker threads;
// the aggregated result is identical to serial execution.
inline SweepResult run_sweep(const SweepSpec& spec, int jobs = 1) {
    spec.validate();
    std::vector<std::pair<double, double>> cells;
    if (spec.grid) {
        for (double r : spec.r_values)
            for (double b : spec.beta_values) cells.emplace_back(r, b);
    } else {
        for (double v : spec.values) cells.emplace_back(v, 0.0);
    }

    SweepResult result;
    result.instances = static_cast<long>(spec.problem.seeds.size());
    result.cells.resize(cells.size());

    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            result.cells[i] = detail::run_sweep_cell(spec, cells[i].first, cells[i].second);
        return result;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            result.cells[i] = detail::run_sweep_cell(spec, cells[i].first, cells[i].second);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return result;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result, bool grid) {
    if (grid)
        os << "r,beta,converged_count,mean_iters,mean_feas,mean_obj\n";
    else
        os << "value,converged_count,mean_iters,mean_feas,mean_obj\n";
    for (const auto& cell : result.cells) {
        os << format_real(cell.value1);
        if (grid) os << ',' << format_real(cell.value2);
        os << ',' << cell.converged_count << ',' << format_real(cell.mean_iters) << ','
           << format_real(cell.mean_final_feas) << ',' << format_real(cell.mean_final_obj) << '\n';
    }
}

inline void write_sweep_csv(const std::string& path, const SweepResult& result, bool grid) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_sweep_csv(f, result, grid);
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace orthosolve
