#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "orthosolve/matrix.hpp"

namespace orthosolve {

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column i pairs with values[i]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Accurate and
// dependency-free; intended for the modest dimensions this library works at.
inline EigenDecomposition symmetric_eigen(const SymMatrix& input, double tol = 1e-13,
                                          int max_sweeps = 100) {
    const int n = input.dim();
    Matrix a = input.matrix();
    Matrix v = Matrix::identity(n);

    const double scale = std::max(1.0, frobenius_norm(a));
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        off = std::sqrt(2.0 * off);
        if (off <= tol * scale) {
            EigenDecomposition d;
            d.values.resize(n);
            for (int i = 0; i < n; ++i) d.values[i] = a(i, i);
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int i, int j) { return d.values[i] > d.values[j]; });
            std::vector<double> sorted(n);
            Matrix vs(n, n);
            for (int k = 0; k < n; ++k) {
                sorted[k] = d.values[order[k]];
                for (int i = 0; i < n; ++i) vs(i, k) = v(i, order[k]);
            }
            d.values = std::move(sorted);
            d.vectors = std::move(vs);
            return d;
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    throw NonConvergence("symmetric_eigen: Jacobi sweeps exhausted");
}

// Largest singular value by power iteration on the smaller Gram matrix
// (A^T A when cols <= rows, A A^T otherwise). Deterministic: the start
// vector is all-ones, normalized. Throws NonConvergence if the Rayleigh
// quotient has not stabilized to the requested relative tolerance; callers
// may fall back to frobenius_norm as an upper bound.
inline double op_norm(const Matrix& a, double tol = 1e-10, int max_iter = 5000) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    if (tol <= 0.0) throw DomainError("op_norm: tol must be positive");
    const bool use_ata = a.cols() <= a.rows();
    const Matrix gram = use_ata ? multiply_at_b(a, a) : multiply_a_bt(a, a);
    const int n = gram.rows();

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n, 0.0);
    double rayleigh_prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += gram(i, j) * v[j];
            w[i] = s;
        }
        double rayleigh = 0.0, wnorm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            rayleigh += v[i] * w[i];
            wnorm2 += w[i] * w[i];
        }
        const double wnorm = std::sqrt(wnorm2);
        if (wnorm == 0.0) return 0.0;  // start vector lies in the null space
        if (std::abs(rayleigh - rayleigh_prev) <= tol * std::max(std::abs(rayleigh), 1e-300))
            return std::sqrt(std::max(rayleigh, 0.0));
        rayleigh_prev = rayleigh;
        for (int i = 0; i < n; ++i) v[i] = w[i] / wnorm;
    }
    throw NonConvergence("op_norm: power iteration did not stabilize");
}

}  // namespace orthosolve
