#pragma once

#include <chrono>
#include <cmath>

#include "orthosolve/lsalm.hpp"
#include "orthosolve/problem.hpp"
#include "orthosolve/record.hpp"
#include "orthosolve/stiefel.hpp"

namespace orthosolve {

// Riemannian gradient descent with Armijo backtracking; polar retraction.
struct RgdParams {
    double eta = 0.1;    // trial stepsize
    double gamma = 0.5;  // backtracking shrink
    double delta = 0.5;  // sufficient-decrease coefficient
    long max_iter = 30000;
    double tol_grad = 1e-4;

    void validate() const {
        if (!(eta > 0.0)) throw ConfigError("RgdParams: eta must be positive");
        if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("RgdParams: gamma must be in (0,1)");
        if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("RgdParams: delta must be in (0,1)");
        if (max_iter < 1) throw ConfigError("RgdParams: max_iter must be >= 1");
        if (!(tol_grad >= 0.0)) throw ConfigError("RgdParams: tol_grad must be nonnegative");
    }
};

// Baseline for smooth problems (g == 0). Iterates stay feasible through the
// polar retraction; stops when the Riemannian gradient norm drops below
// tol_grad. Throws BacktrackExhausted after 60 shrinks without sufficient
// decrease.
inline RunRecord rgd(const Problem& p, const RgdParams& params, const Matrix& x0,
                     const RunOptions& options = RunOptions{}) {
    params.validate();
    if (p.has_l1()) throw ConfigError("rgd: requires a smooth problem (g == 0)");
    check_problem_shapes(p, x0, "rgd");
    if (feasibility(x0) > 1e-8) throw InfeasibleStart("rgd: X0 must be feasible");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    RunRecord rec;
    Matrix x = x0;
    double value = eval_smooth(p, x);
    RunStatus status = RunStatus::Budget;
    long k = 0;
    double grad_norm = 0.0;
    double last_dx = 0.0;

    for (; k < params.max_iter; ++k) {
        const Matrix grad = tangent_project(x, grad_smooth(p, x));
        grad_norm = frobenius_norm(grad);
        if (grad_norm <= params.tol_grad) {
            status = RunStatus::Converged;
            break;
        }
        double t = params.eta;
        bool accepted = false;
        for (int shrink = 0; shrink < 60; ++shrink) {
            const Matrix candidate = stiefel_project(x - t * grad);
            const double cand_value = eval_smooth(p, candidate);
            if (cand_value <= value - params.delta * t * grad_norm * grad_norm) {
                last_dx = frobenius_norm(candidate - x);
                x = candidate;
                value = cand_value;
                accepted = true;
                break;
            }
            t *= params.gamma;
        }
        if (!accepted)
            throw BacktrackExhausted("rgd: 60 shrinks without sufficient decrease");
        if (options.log_every > 0 && ((k + 1) % options.log_every == 0)) {
            IterationRow row;
            row.iter = k + 1;
            row.obj = value;
            row.feas = feasibility(x);
            row.kkt = grad_norm;  // pre-step Riemannian gradient norm
            row.dx = last_dx;
            row.elapsed_ms = options.collect_timing ? elapsed_ms() : 0.0;
            rec.rows.push_back(row);
        }
    }

    rec.status = status;
    rec.total_iters = k;
    rec.final_X = x;
    rec.final_Y = SymMatrix::zero(p.n);
    rec.final_Z = x;
    rec.final_obj = value;
    rec.final_feas = feasibility(x);
    rec.final_kkt = frobenius_norm(tangent_project(x, grad_smooth(p, x)));
    rec.stationarity_bound = rec.final_kkt;
    rec.wall_ms = options.collect_timing ? elapsed_ms() : 0.0;
    if (rec.rows.empty() || rec.rows.back().iter != k) {
        IterationRow row;
        row.iter = k;
        row.obj = rec.final_obj;
        row.feas = rec.final_feas;
        row.kkt = rec.final_kkt;
        row.dx = last_dx;
        row.elapsed_ms = rec.wall_ms;
        rec.rows.push_back(row);
    }
    return rec;
}

inline double rsm_stepsize(long k) { return 1.0 / std::pow(static_cast<double>(k), 0.75); }

// Riemannian subgradient warm start: diminishing stepsize 1/k^(3/4), polar
// retraction, minimum-norm subgradient of the l1 term (0 at zero entries).
inline Matrix rsm_warmstart(const Problem& p, long iters, const Matrix& x0) {
    check_problem_shapes(p, x0, "rsm_warmstart");
    if (feasibility(x0) > 1e-8) throw InfeasibleStart("rsm_warmstart: X0 must be feasible");
    Matrix x = x0;
    for (long k = 1; k <= iters; ++k) {
        Matrix sub = grad_smooth(p, x);
        if (p.has_l1()) {
            for (int i = 0; i < x.rows(); ++i)
                for (int j = 0; j < x.cols(); ++j) {
                    const double v = x(i, j);
                    if (v > 0.0)
                        sub(i, j) += p.mu;
                    else if (v < 0.0)
                        sub(i, j) -= p.mu;
                }
        }
        x = stiefel_project(x - rsm_stepsize(k) * tangent_project(x, sub));
    }
    return x;
}

}  // namespace orthosolve
