#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "orthosolve/eigen.hpp"
#include "orthosolve/matrix.hpp"
#include "orthosolve/problem.hpp"
#include "orthosolve/record.hpp"
#include "orthosolve/sets.hpp"
#include "orthosolve/stiefel.hpp"

namespace orthosolve {

// All knobs of the single-loop solver. rho weights the quadratic penalty,
// lambda is the proximal parameter of the linearized surrogate, r the
// smoothing parameter, alpha the dual stepsize, beta the averaging stepsize,
// eps the dual perturbation. R_Y bounds the dual ball; R_X_op is the declared
// primal operator-norm radius used by the theory formulas only.
struct LsalmParams {
    double rho = 0.15;
    double lambda = 1.35;
    double r = 1.25;
    double alpha = 0.1;
    double beta = 0.44;
    double eps = 1e-8;
    double R_Y = 5.0;
    double R_X_op = 10.0;
    long max_iter = 30000;
    double divergence_factor = 10.0;

    double prox_scale() const { return r + 1.0 / lambda; }

    // Well-posedness only. The primal subproblem is strongly convex whenever
    // r + 1/lambda exceeds the weak-convexity modulus of g, which is zero for
    // both g = mu||.||_1 and g = 0; the conservative descent-theory bounds
    // live in validate_params instead and are never enforced here.
    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string("LsalmParams: ") + name + " must be positive");
        };
        if (!(rho >= 0.0) || !std::isfinite(rho))
            throw ConfigError("LsalmParams: rho must be nonnegative");
        positive(lambda, "lambda");
        positive(r, "r");
        positive(alpha, "alpha");
        positive(eps, "eps");
        positive(R_Y, "R_Y");
        positive(R_X_op, "R_X_op");
        positive(divergence_factor, "divergence_factor");
        if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("LsalmParams: beta must be in (0,1)");
        if (max_iter < 1) throw ConfigError("LsalmParams: max_iter must be >= 1");
        if (!(prox_scale() > 0.0)) throw ConfigError("LsalmParams: r + 1/lambda must be positive");
    }
};

// The iterate triple plus cached step sizes of the latest step.
struct LsalmState {
    Matrix X;
    SymMatrix Y;
    Matrix Z;
    long k = 0;
    double last_dx = 0.0;
    double last_dz_gap = 0.0;
    double last_dy = 0.0;
    bool last_dual_projection_active = false;
};

inline LsalmState make_initial_state(const Problem& p, const Matrix& x0) {
    check_problem_shapes(p, x0, "make_initial_state");
    LsalmState s;
    s.X = x0;
    s.Y = SymMatrix::zero(p.n);
    s.Z = x0;
    return s;
}

// Convenience feasible initializer.
inline Matrix init_feasible(const Problem& p, std::uint64_t seed) {
    return random_orthonormal(p.m, p.n, seed);
}

// ---------------------------------------------------------------------------
// The three update maps
// ---------------------------------------------------------------------------

// Closed-form minimizer of the linearized surrogate plus the smoothing term:
// prox at scale r + 1/lambda of
//   [ X/lambda + r Z - (grad l(X) + 2 X Y + 2 rho X G(X)) ] / (r + 1/lambda).
inline Matrix primal_step(const Problem& p, const LsalmParams& params, const LsalmState& state) {
    const double scale = params.prox_scale();
    const Matrix grad = grad_smooth(p, state.X);
    const Matrix xy = multiply(state.X, state.Y.matrix());
    const SymMatrix g = gram_residual(state.X);
    const Matrix xg = multiply(state.X, g.matrix());

    // Algebraically (X/lambda + r Z - D)/scale with D the surrogate slope,
    // arranged as X plus a correction so a stationary state reproduces X
    // exactly.
    Matrix v = state.Z - state.X;
    v *= params.r;
    v -= grad;
    v -= 2.0 * xy;
    v -= (2.0 * params.rho) * xg;
    v *= 1.0 / scale;
    v += state.X;
    if (!v.is_finite()) throw NumericalBreakdown("primal_step: non-finite prox argument");
    return scaled_prox(p, v, scale);
}

inline Matrix z_step(const LsalmParams& params, const Matrix& z, const Matrix& x_next) {
    z.require_same_shape(x_next, "z_step");
    return z + params.beta * (x_next - z);
}

inline SymMatrix dual_step(const LsalmParams& params, const SymMatrix& y, const Matrix& x_next,
                           bool* projection_active = nullptr) {
    const SymMatrix g = gram_residual(x_next);
    const SymMatrix pre = y + (g - y * params.eps) * params.alpha;
    const double pre_norm = frobenius_norm(pre);
    const bool active = pre_norm > params.R_Y;
    if (projection_active) *projection_active = active;
    return active ? pre * (params.R_Y / pre_norm) : pre;
}

inline void step(const Problem& p, const LsalmParams& params, LsalmState& state) {
    const Matrix x_next = primal_step(p, params, state);
    state.last_dz_gap = frobenius_norm(x_next - state.Z);
    state.Z = z_step(params, state.Z, x_next);
    const SymMatrix y_next = dual_step(params, state.Y, x_next, &state.last_dual_projection_active);
    state.last_dx = frobenius_norm(x_next - state.X);
    state.last_dy = frobenius_norm(y_next - state.Y);
    state.X = x_next;
    state.Y = y_next;
    ++state.k;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

inline double aug_lagrangian_value(const Problem& p, const LsalmParams& params, const Matrix& x,
                                   const SymMatrix& y) {
    const SymMatrix g = gram_residual(x);
    const double gn = frobenius_norm(g);
    return eval_objective(p, x) + frobenius_dot(y.matrix(), g.matrix()) +
           0.5 * params.rho * gn * gn;
}

// Value of the linearized surrogate at X, expanded around Xbar, plus the
// smoothing term (r/2)||X - Z||_F^2. Used for the per-step decrease checks.
inline double surrogate_objective(const Problem& p, const LsalmParams& params, const Matrix& xbar,
                                  const SymMatrix& y, const Matrix& z, const Matrix& x) {
    const SymMatrix gbar = gram_residual(xbar);
    const double gbar_norm = frobenius_norm(gbar);
    Matrix slope = grad_smooth(p, xbar);
    slope += 2.0 * multiply(xbar, y.matrix());
    slope += (2.0 * params.rho) * multiply(xbar, gbar.matrix());
    const Matrix diff = x - xbar;
    const double dx_norm = frobenius_norm(diff);
    const Matrix zdiff = x - z;
    const double zdiff_norm = frobenius_norm(zdiff);
    return eval_smooth(p, xbar) + frobenius_dot(y.matrix(), gbar.matrix()) +
           0.5 * params.rho * gbar_norm * gbar_norm + eval_nonsmooth(p, x) +
           frobenius_dot(slope, diff) + dx_norm * dx_norm / (2.0 * params.lambda) +
           0.5 * params.r * zdiff_norm * zdiff_norm;
}

// Frobenius distance from -2XY - grad l(X) to the subdifferential of g.
// Exact entrywise distance for g = mu||.||_1; plain gradient residual when
// g == 0.
inline double kkt_residual(const Problem& p, const Matrix& x, const SymMatrix& y) {
    check_problem_shapes(p, x, "kkt_residual");
    Matrix target = grad_smooth(p, x) + 2.0 * multiply(x, y.matrix());
    if (!p.has_l1()) return frobenius_norm(target);
    double sum = 0.0;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) {
            const double t = -target(i, j);
            const double xij = x(i, j);
            double d;
            if (xij != 0.0)
                d = std::abs(t - p.mu * (xij > 0.0 ? 1.0 : -1.0));
            else
                d = std::max(std::abs(t) - p.mu, 0.0);
            sum += d * d;
        }
    return std::sqrt(sum);
}

// Operator norm, falling back to the Frobenius norm (a valid upper bound)
// when the spectrum is too clustered for the power iteration to certify the
// requested tolerance.
inline double op_norm_upper(const Matrix& a) {
    try {
        return op_norm(a);
    } catch (const NonConvergence&) {
        return frobenius_norm(a);
    }
}

// (1 + 2||X|| ||Y||) * kkt_eps: upper bound on the exact Riemannian
// stationarity measure given an eps-KKT certificate.
inline double stationarity_bound(const Matrix& x, const SymMatrix& y, double kkt_eps) {
    return (1.0 + 2.0 * op_norm_upper(x) * op_norm_upper(y.matrix())) * kkt_eps;
}

// ---------------------------------------------------------------------------
// Stopping rules
// ---------------------------------------------------------------------------

struct StopRule {
    enum class Mode { Qp, Spca, Gm, Custom };

    Mode mode = Mode::Qp;
    double tol_dx = 1e-3;    // threshold on dx + dz_gap (Qp/Custom) or dx (Spca)
    double tol_feas = 1e-5;  // threshold on ||G(X)||_F
    double tol_stat = 1e-4;  // threshold on the KKT residual (Gm/Custom)

    static StopRule qp() { return StopRule{Mode::Qp, 1e-3, 1e-5, 1e-4}; }
    static StopRule spca() { return StopRule{Mode::Spca, 1e-4, 1e-4, 1e-4}; }
    static StopRule gm() { return StopRule{Mode::Gm, 1e-3, 1e-6, 1e-4}; }
    static StopRule custom(double dx, double feas, double stat) {
        return StopRule{Mode::Custom, dx, feas, stat};
    }

    void validate() const {
        if (!(tol_dx > 0.0) || !(tol_feas > 0.0) || !(tol_stat > 0.0))
            throw ConfigError("StopRule: tolerances must be positive");
    }

    bool needs_kkt() const { return mode == Mode::Gm || mode == Mode::Custom; }

    bool satisfied(double dx, double dz_gap, double feas, double kkt) const {
        switch (mode) {
            case Mode::Qp: return dx + dz_gap <= tol_dx && feas <= tol_feas;
            case Mode::Spca: return dx <= tol_dx && feas <= tol_feas;
            case Mode::Gm: return kkt <= tol_stat && feas <= tol_feas;
            case Mode::Custom:
                return dx + dz_gap <= tol_dx && feas <= tol_feas && kkt <= tol_stat;
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// Full solve
// ---------------------------------------------------------------------------

struct RunOptions {
    long log_every = 1;            // 0 = final row only
    bool check_invariants = false; // per-iteration invariant monitor
    bool collect_timing = true;
};

namespace detail {

inline void note_violation(RunRecord& rec, const std::string& msg) {
    ++rec.invariant_violations;
    if (rec.invariant_notes.size() < 8) rec.invariant_notes.push_back(msg);
}

}  // namespace detail

// Continues the iteration from an arbitrary state for up to max_iter further
// steps. Used by run() and by callers that extend a finished solve.
inline RunRecord run_from_state(const Problem& p, const LsalmParams& params, const StopRule& stop,
                                LsalmState state, const RunOptions& options = RunOptions{}) {
    params.validate();
    stop.validate();
    check_problem_shapes(p, state.X, "run_from_state");
    check_problem_shapes(p, state.Z, "run_from_state");
    if (state.Y.dim() != p.n) throw ShapeMismatch("run_from_state: Y must be n x n");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    RunRecord rec;
    const DualSet dual_set(params.R_Y);
    const double diverge_norm = params.divergence_factor * std::sqrt(static_cast<double>(p.n));

    double z0_norm = frobenius_norm(state.Z);
    double max_x_norm = 0.0;  // max over X^1..X^k

    RunStatus status = RunStatus::Budget;
    double feas = feasibility(state.X);
    double kkt = 0.0;
    bool kkt_valid = false;

    for (long k = 1; k <= params.max_iter; ++k) {
        SymMatrix y_prev = state.Y;
        try {
            step(p, params, state);
        } catch (const NumericalBreakdown&) {
            status = RunStatus::Diverged;
            break;
        }

        const SymMatrix g = gram_residual(state.X);
        feas = frobenius_norm(g);
        kkt_valid = false;

        if (options.check_invariants) {
            ++rec.invariant_checks;
            max_x_norm = std::max(max_x_norm, frobenius_norm(state.X));
            if (!dual_set.contains(state.Y, 1e-12 * std::max(1.0, params.R_Y)))
                detail::note_violation(rec, "dual ball violated at iter " + std::to_string(k));
            const Matrix& ym = state.Y.matrix();
            bool symmetric = true;
            for (int i = 0; i < ym.rows() && symmetric; ++i)
                for (int j = i + 1; j < ym.cols(); ++j)
                    if (ym(i, j) != ym(j, i)) {
                        symmetric = false;
                        break;
                    }
            if (!symmetric)
                detail::note_violation(rec, "Y asymmetry at iter " + std::to_string(k));
            if (frobenius_norm(state.Z) > std::max(z0_norm, max_x_norm) + 1e-12)
                detail::note_violation(rec, "Z norm bound violated at iter " + std::to_string(k));
            if (!state.last_dual_projection_active) {
                const double rhs = state.last_dy / params.alpha +
                                   params.eps * frobenius_norm(y_prev);
                if (feas > rhs + 1e-9 * (1.0 + rhs))
                    detail::note_violation(rec,
                                           "feasibility-dual link violated at iter " +
                                               std::to_string(k));
            }
        }

        if (!state.X.is_finite() || frobenius_norm(state.X) > diverge_norm) {
            status = RunStatus::Diverged;
            break;
        }

        const bool want_stop_kkt = stop.needs_kkt();
        const bool log_now = options.log_every > 0 && (k % options.log_every == 0);
        if (want_stop_kkt || log_now) {
            kkt = kkt_residual(p, state.X, state.Y);
            kkt_valid = true;
        }
        if (log_now) {
            IterationRow row;
            row.iter = state.k;
            row.obj = eval_objective(p, state.X);
            row.feas = feas;
            row.kkt = kkt;
            row.dx = state.last_dx;
            row.dz_gap = state.last_dz_gap;
            row.dy = state.last_dy;
            row.elapsed_ms = options.collect_timing ? elapsed_ms() : 0.0;
            rec.rows.push_back(row);
        }
        if (stop.satisfied(state.last_dx, state.last_dz_gap, feas, kkt)) {
            status = RunStatus::Converged;
            break;
        }
    }

    rec.status = status;
    rec.total_iters = state.k;
    rec.final_X = state.X;
    rec.final_Y = state.Y;
    rec.final_Z = state.Z;
    rec.final_feas = state.X.is_finite() ? feasibility(state.X) : std::numeric_limits<double>::quiet_NaN();
    rec.final_obj = state.X.is_finite() ? eval_objective(p, state.X) : std::numeric_limits<double>::quiet_NaN();
    if (state.X.is_finite()) {
        if (!kkt_valid) kkt = kkt_residual(p, state.X, state.Y);
        rec.final_kkt = kkt;
        rec.stationarity_bound =
            stationarity_bound(state.X, state.Y, std::max(rec.final_kkt, rec.final_feas));
    } else {
        rec.final_kkt = std::numeric_limits<double>::quiet_NaN();
        rec.stationarity_bound = std::numeric_limits<double>::quiet_NaN();
    }
    rec.wall_ms = options.collect_timing ? elapsed_ms() : 0.0;

    // Always keep a row for the terminal iteration.
    if (rec.rows.empty() || rec.rows.back().iter != state.k) {
        IterationRow row;
        row.iter = state.k;
        row.obj = rec.final_obj;
        row.feas = rec.final_feas;
        row.kkt = rec.final_kkt;
        row.dx = state.last_dx;
        row.dz_gap = state.last_dz_gap;
        row.dy = state.last_dy;
        row.elapsed_ms = rec.wall_ms;
        rec.rows.push_back(row);
    }
    return rec;
}

// Full solve from a feasible start: Y0 = 0, Z0 = X0, then the single loop
// until the stop rule fires, the budget is exhausted, or the iterates
// diverge. X0 must be feasible to 1e-8.
inline RunRecord run(const Problem& p, const LsalmParams& params, const StopRule& stop,
                     const Matrix& x0, const RunOptions& options = RunOptions{}) {
    check_problem_shapes(p, x0, "run");
    if (!x0.is_finite()) throw InfeasibleStart("run: X0 has non-finite entries");
    if (feasibility(x0) > 1e-8)
        throw InfeasibleStart("run: ||X0^T X0 - I||_F exceeds 1e-8; start from a feasible point");
    return run_from_state(p, params, stop, make_initial_state(p, x0), options);
}

// A stop rule that can only fire at exact stationarity; pair with a max_iter
// budget to run a fixed number of continuation steps.
inline StopRule never_stop() { return StopRule::custom(1e-300, 1e-300, 1e-300); }

}  // namespace orthosolve
