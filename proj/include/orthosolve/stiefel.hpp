#pragma once

#include <cmath>
#include <cstdint>

#include "orthosolve/eigen.hpp"
#include "orthosolve/matrix.hpp"
#include "orthosolve/rng.hpp"

namespace orthosolve {

// G(X) = X^T X - I_n, symmetrized to kill round-off asymmetry.
inline SymMatrix gram_residual(const Matrix& x) {
    Matrix g = multiply_at_b(x, x);
    for (int i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return sym(g);
}

inline double feasibility(const Matrix& x) { return frobenius_norm(gram_residual(x)); }

// Projection onto the tangent space of St(m,n) at X: V - X sym(X^T V).
// Exact orthogonal projection when X has orthonormal columns.
inline Matrix tangent_project(const Matrix& x, const Matrix& v) {
    x.require_same_shape(v, "tangent_project");
    const SymMatrix s = sym(multiply_at_b(x, v));
    return v - multiply(x, s.matrix());
}

// Polar factor UV^T of the thin SVD, computed through the eigendecomposition
// of the n x n Gram matrix. Requires full column rank.
inline Matrix stiefel_project(const Matrix& a) {
    if (a.rows() < a.cols()) throw ShapeMismatch("stiefel_project: need rows >= cols");
    const EigenDecomposition eig = symmetric_eigen(sym(multiply_at_b(a, a)));
    const int n = a.cols();
    const double sigma_max = std::sqrt(std::max(eig.values.front(), 0.0));
    const double sigma_min = std::sqrt(std::max(eig.values.back(), 0.0));
    if (sigma_min < 1e-12 * sigma_max || sigma_max == 0.0)
        throw RankDeficient("stiefel_project: smallest singular value too small");
    // A V diag(1/sigma) V^T
    Matrix scaled = eig.vectors;  // columns scaled by 1/sigma_i
    for (int j = 0; j < n; ++j) {
        const double inv = 1.0 / std::sqrt(eig.values[j]);
        for (int i = 0; i < n; ++i) scaled(i, j) *= inv;
    }
    return multiply(a, multiply_a_bt(scaled, eig.vectors));
}

// Gaussian draw projected onto the Stiefel manifold; retries with seed+1 on
// rank deficiency, at most 3 attempts.
inline Matrix random_orthonormal(int rows, int cols, std::uint64_t seed) {
    if (rows < cols || cols < 1) throw ShapeMismatch("random_orthonormal: need rows >= cols >= 1");
    for (int attempt = 0;; ++attempt) {
        try {
            return stiefel_project(random_gaussian(rows, cols, seed + attempt));
        } catch (const RankDeficient&) {
            if (attempt >= 2) throw;
        }
    }
}

// Column orthonormalization by modified Gram-Schmidt with re-orthogonalization
// (two passes). Deterministic substitute for a general QR factorization.
inline Matrix orthonormalize_columns(const Matrix& a) {
    Matrix q = a;
    const int m = q.rows(), n = q.cols();
    if (m < n) throw ShapeMismatch("orthonormalize_columns: need rows >= cols");
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                double dot = 0.0;
                for (int k = 0; k < m; ++k) dot += q(k, i) * q(k, j);
                for (int k = 0; k < m; ++k) q(k, j) -= dot * q(k, i);
            }
        }
        double norm = 0.0;
        for (int k = 0; k < m; ++k) norm += q(k, j) * q(k, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw RankDeficient("orthonormalize_columns: dependent column");
        for (int k = 0; k < m; ++k) q(k, j) /= norm;
    }
    return q;
}

}  // namespace orthosolve
