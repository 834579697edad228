#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "orthosolve/eigen.hpp"
#include "orthosolve/matrix.hpp"
#include "orthosolve/rng.hpp"
#include "orthosolve/sets.hpp"
#include "orthosolve/stiefel.hpp"

namespace orthosolve {

// f(X) = 0.5 tr(X^T A X) + tr(G^T X) + mu ||X||_1
struct QpPayload {
    SymMatrix A;  // m x m
    Matrix G;     // m x n
};

// f(X) = -tr(X^T (A^T A) X) + mu ||X||_1, A^T A precomputed
struct SpcaPayload {
    SymMatrix AtA;  // m x m
};

// f(X) = -tr(X^T K X) + mu ||max(0,-X)||_F^2, smooth (g == 0)
struct GmPayload {
    SymMatrix K;      // n x n edge-affinity similarities, entries in [0,1]
    Matrix points1;   // n x 2 landmark coordinates (kept for serialization)
    Matrix points2;   // n x 2
};

// A benchmark instance: the composite objective f = l + g together with its
// gradient, the scaled proximal map of g + indicator of the primal set, and
// Lipschitz constants. Immutable after construction; all evaluations are pure.
struct Problem {
    std::string kind;  // "qp" | "spca" | "gm"
    int m = 0;
    int n = 0;
    double mu = 0.0;                      // l1 weight (qp/spca) or negativity weight (gm)
    double smooth_grad_lipschitz = 0.0;   // L_l
    double nonsmooth_lipschitz = 0.0;     // L_g, Frobenius-Lipschitz constant of g
    PrimalSet primal_set;
    std::uint64_t seed = 0;
    int spca_p = 0;  // data rows for spca, 0 otherwise
    std::variant<QpPayload, SpcaPayload, GmPayload> payload;

    // g = mu ||.||_1 with mu > 0; gm problems are smooth regardless of mu.
    bool has_l1() const { return mu > 0.0 && !std::holds_alternative<GmPayload>(payload); }

    double lipschitz_sum() const { return smooth_grad_lipschitz + nonsmooth_lipschitz; }
};

inline void check_problem_shapes(const Problem& p, const Matrix& x, const char* what) {
    if (x.rows() != p.m || x.cols() != p.n)
        throw ShapeMismatch(std::string(what) + ": X must be " + std::to_string(p.m) + "x" +
                            std::to_string(p.n));
}

inline double eval_smooth(const Problem& p, const Matrix& x) {
    check_problem_shapes(p, x, "eval_smooth");
    if (const auto* qp = std::get_if<QpPayload>(&p.payload)) {
        const Matrix ax = multiply(qp->A.matrix(), x);
        return 0.5 * frobenius_dot(x, ax) + frobenius_dot(qp->G, x);
    }
    if (const auto* spca = std::get_if<SpcaPayload>(&p.payload)) {
        return -frobenius_dot(x, multiply(spca->AtA.matrix(), x));
    }
    const auto& gm = std::get<GmPayload>(p.payload);
    double penalty = 0.0;
    for (double v : x.data()) {
        const double neg = std::max(0.0, -v);
        penalty += neg * neg;
    }
    return -frobenius_dot(x, multiply(gm.K.matrix(), x)) + p.mu * penalty;
}

inline Matrix grad_smooth(const Problem& p, const Matrix& x) {
    check_problem_shapes(p, x, "grad_smooth");
    if (const auto* qp = std::get_if<QpPayload>(&p.payload)) {
        return multiply(qp->A.matrix(), x) + qp->G;
    }
    if (const auto* spca = std::get_if<SpcaPayload>(&p.payload)) {
        return -2.0 * multiply(spca->AtA.matrix(), x);
    }
    const auto& gm = std::get<GmPayload>(p.payload);
    Matrix g = -2.0 * multiply(gm.K.matrix(), x);
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            g(i, j) -= 2.0 * p.mu * std::max(0.0, -x(i, j));
    return g;
}

inline double eval_nonsmooth(const Problem& p, const Matrix& x) {
    check_problem_shapes(p, x, "eval_nonsmooth");
    if (!p.has_l1()) return 0.0;
    double s = 0.0;
    for (double v : x.data()) s += std::abs(v);
    return p.mu * s;
}

inline double eval_objective(const Problem& p, const Matrix& x) {
    return eval_smooth(p, x) + eval_nonsmooth(p, x);
}

// Exact minimizer of g(Z)/scale + 0.5 ||Z - V||_F^2 over the primal set.
// For g = mu||.||_1 with a box this is entrywise soft-thresholding followed
// by a clamp; for g == 0 it is the plain projection.
inline Matrix scaled_prox(const Problem& p, const Matrix& v, double scale) {
    check_problem_shapes(p, v, "scaled_prox");
    if (scale <= 0.0) throw DomainError("scaled_prox: scale must be positive");
    if (!p.has_l1()) return project_primal(p.primal_set, v);
    if (p.primal_set.kind != PrimalSet::Kind::Box)
        throw DomainError("scaled_prox: l1 term requires a box primal set");
    const double threshold = p.mu / scale;
    const double c = p.primal_set.param;
    Matrix out = v;
    for (double& e : out.data()) {
        const double mag = std::min(std::max(std::abs(e) - threshold, 0.0), c);
        e = (e >= 0.0 ? mag : -mag);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// A = P L P^T with L_ii = 1.01^(1-i) (1-based), P orthonormalized from a
// seeded uniform draw; G = Q D with column-normalized uniform Q and
// D_ii = 1.01^(i-1).
inline Problem gen_qp(int m, int n, double mu, std::uint64_t seed) {
    if (m < n || n < 1) throw ShapeMismatch("gen_qp: need m >= n >= 1");
    if (mu < 0.0) throw DomainError("gen_qp: mu must be nonnegative");
    SplitMix64 rng(seed);
    const Matrix p_mat = orthonormalize_columns(fill_uniform(rng, m, m));
    Matrix pl = p_mat;  // columns scaled by the eigenvalue ladder
    for (int j = 0; j < m; ++j) {
        const double ljj = std::pow(1.01, -static_cast<double>(j));
        for (int i = 0; i < m; ++i) pl(i, j) *= ljj;
    }
    const SymMatrix a = sym(multiply_a_bt(pl, p_mat));

    Matrix q = fill_uniform(rng, m, n);
    for (int j = 0; j < n; ++j) {
        double norm = 0.0;
        for (int i = 0; i < m; ++i) norm += q(i, j) * q(i, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw RankDeficient("gen_qp: zero column in Q");
        const double djj = std::pow(1.01, static_cast<double>(j));
        for (int i = 0; i < m; ++i) q(i, j) *= djj / norm;
    }

    Problem prob;
    prob.kind = "qp";
    prob.m = m;
    prob.n = n;
    prob.mu = mu;
    prob.seed = seed;
    prob.payload = QpPayload{a, std::move(q)};
    prob.smooth_grad_lipschitz = op_norm(a.matrix());
    prob.nonsmooth_lipschitz = mu * std::sqrt(static_cast<double>(m) * n);
    prob.primal_set = mu > 0.0 ? PrimalSet::box(10.0)
                               : PrimalSet::frobenius_ball(PrimalSet::default_ball_radius(n));
    return prob;
}

// Five deterministic ground-truth loadings: indicator blocks of width m/5
// scaled to unit norm (last block absorbs any remainder). Row k is loading k.
inline Matrix spca_template_matrix(int m) {
    if (m < 5) throw ShapeMismatch("spca_template_matrix: need m >= 5");
    Matrix t(5, m);
    const int base = m / 5;
    for (int k = 0; k < 5; ++k) {
        const int start = k * base;
        const int width = (k == 4) ? m - 4 * base : base;
        const double value = 1.0 / std::sqrt(static_cast<double>(width));
        for (int j = start; j < start + width; ++j) t(k, j) = value;
    }
    return t;
}

// Data matrix A (p x m): each template row repeated p/5 times (last block
// absorbs the remainder), plus i.i.d. N(0, noise_stddev^2) per entry.
inline Problem gen_spca(int p, int m, int n, double mu, std::uint64_t seed,
                        double noise_stddev = 0.5) {
    if (m < n || n < 1) throw ShapeMismatch("gen_spca: need m >= n >= 1");
    if (p < 5) throw ShapeMismatch("gen_spca: need p >= 5");
    if (mu < 0.0) throw DomainError("gen_spca: mu must be nonnegative");
    const Matrix templates = spca_template_matrix(m);
    SplitMix64 rng(seed);
    Matrix a(p, m);
    const int rows_per = p / 5;
    for (int i = 0; i < p; ++i) {
        const int k = std::min(i / rows_per, 4);
        for (int j = 0; j < m; ++j) a(i, j) = templates(k, j) + noise_stddev * rng.gaussian();
    }
    const SymMatrix ata = sym(multiply_at_b(a, a));

    Problem prob;
    prob.kind = "spca";
    prob.m = m;
    prob.n = n;
    prob.mu = mu;
    prob.seed = seed;
    prob.spca_p = p;
    prob.payload = SpcaPayload{ata};
    prob.smooth_grad_lipschitz = 2.0 * op_norm(ata.matrix());
    prob.nonsmooth_lipschitz = mu * std::sqrt(static_cast<double>(m) * n);
    prob.primal_set = mu > 0.0 ? PrimalSet::box(10.0)
                               : PrimalSet::frobenius_ball(PrimalSet::default_ball_radius(n));
    return prob;
}

// Intra-graph pairwise Euclidean distances of an n x 2 landmark list.
inline Matrix pairwise_distances(const Matrix& points) {
    if (points.cols() != 2) throw ShapeMismatch("pairwise_distances: points must be n x 2");
    const int n = points.rows();
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = points(i, 0) - points(j, 0);
            const double dy = points(i, 1) - points(j, 1);
            const double dist = std::sqrt(dx * dx + dy * dy);
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return d;
}

// K_ij = exp(-(d1_ij - d2_ij)^2 / 2500): similarity of edge features matched
// along corresponding index pairs. Entries in [0, 1], symmetric.
inline SymMatrix build_affinity(const Matrix& d1, const Matrix& d2) {
    if (!d1.same_shape(d2) || d1.rows() != d1.cols())
        throw ShapeMismatch("build_affinity: feature matrices must be square and equal-sized");
    Matrix k(d1.rows(), d1.cols());
    for (int i = 0; i < d1.rows(); ++i)
        for (int j = 0; j < d1.cols(); ++j) {
            const double gap = d1(i, j) - d2(i, j);
            k(i, j) = std::exp(-gap * gap / 2500.0);
        }
    return sym(k);
}

inline void check_distinct_landmarks(const Matrix& points, const char* which) {
    for (int i = 0; i < points.rows(); ++i)
        for (int j = i + 1; j < points.rows(); ++j)
            if (points(i, 0) == points(j, 0) && points(i, 1) == points(j, 1))
                throw DegenerateInput(std::string("gen_graph_matching: coincident landmarks ") +
                                      std::to_string(i) + "," + std::to_string(j) + " in " + which);
}

inline Problem gen_graph_matching(const Matrix& points1, const Matrix& points2, double mu) {
    if (points1.rows() != points2.rows())
        throw ShapeMismatch("gen_graph_matching: landmark counts differ");
    if (mu <= 0.0) throw DomainError("gen_graph_matching: mu must be positive");
    check_distinct_landmarks(points1, "points1");
    check_distinct_landmarks(points2, "points2");
    const int n = points1.rows();
    const SymMatrix k = build_affinity(pairwise_distances(points1), pairwise_distances(points2));

    Problem prob;
    prob.kind = "gm";
    prob.m = n;
    prob.n = n;
    prob.mu = mu;
    prob.payload = GmPayload{k, points1, points2};
    prob.smooth_grad_lipschitz = 2.0 * op_norm(k.matrix()) + 2.0 * mu;
    prob.nonsmooth_lipschitz = 0.0;
    prob.primal_set = PrimalSet::frobenius_ball(PrimalSet::default_ball_radius(n));
    return prob;
}

// Self-matching benchmark: one seeded cloud, uniform in [0, 100]^2, used for
// both graphs, so the ground-truth assignment is the identity.
inline Problem gen_graph_matching_synthetic(int n, double mu, std::uint64_t seed) {
    if (n < 2) throw ShapeMismatch("gen_graph_matching_synthetic: need n >= 2");
    SplitMix64 rng(seed);
    Matrix points = fill_uniform(rng, n, 2);
    points *= 100.0;
    Problem prob = gen_graph_matching(points, points, mu);
    prob.seed = seed;
    return prob;
}

}  // namespace orthosolve
