#pragma once

#include <cmath>
#include <string>

#include "orthosolve/matrix.hpp"

namespace orthosolve {

// Ancillary primal domain. Two kinds:
//   Box(c)            entrywise |x_ij| <= c, projection is a clamp
//   FrobeniusBall(R)  ||X||_F <= R, projection is a rescale
// Both project without any factorization, keeping the iteration free of
// retractions. declared_op_radius is the operator-norm radius used by the
// theory formulas; it is declared, not enforced.
struct PrimalSet {
    enum class Kind { Box, FrobeniusBall };

    Kind kind = Kind::Box;
    double param = 10.0;  // c for Box, radius for FrobeniusBall
    double declared_op_radius = 10.0;

    static PrimalSet box(double c, double op_radius = 10.0) {
        if (c < 1.0) throw DomainError("PrimalSet: box half-width must be >= 1");
        if (op_radius <= 0.0) throw DomainError("PrimalSet: op radius must be positive");
        return PrimalSet{Kind::Box, c, op_radius};
    }

    static PrimalSet frobenius_ball(double radius, double op_radius = 10.0) {
        if (radius <= 0.0) throw DomainError("PrimalSet: radius must be positive");
        if (op_radius <= 0.0) throw DomainError("PrimalSet: op radius must be positive");
        return PrimalSet{Kind::FrobeniusBall, radius, op_radius};
    }

    // Any X with ||X^T X - I||_F <= 1 has ||X||_F <= sqrt(n + sqrt(n)), so this
    // radius guarantees the near-feasible band is contained in the set.
    static double default_ball_radius(int n) { return 2.0 * std::sqrt(n + 1.0); }

    bool contains(const Matrix& x, double slack = 0.0) const {
        if (kind == Kind::Box) {
            for (double v : x.data())
                if (std::abs(v) > param + slack) return false;
            return true;
        }
        return frobenius_norm(x) <= param + slack;
    }

    std::string kind_name() const { return kind == Kind::Box ? "box" : "fball"; }
};

namespace detail {

// Rescale onto the ball boundary; round-off can leave the result a few ulps
// outside, which would break exact idempotence, so nudge inward until the
// recomputed norm is a member.
inline Matrix rescale_into_ball(const Matrix& x, double radius, double norm) {
    Matrix out = x * (radius / norm);
    while (frobenius_norm(out) > radius) out *= (1.0 - 4e-16);
    return out;
}

}  // namespace detail

inline Matrix project_primal(const PrimalSet& set, const Matrix& x) {
    if (set.kind == PrimalSet::Kind::Box) {
        Matrix out = x;
        const double c = set.param;
        for (double& v : out.data()) v = std::min(std::max(v, -c), c);
        return out;
    }
    const double norm = frobenius_norm(x);
    if (norm <= set.param) return x;
    return detail::rescale_into_ball(x, set.param, norm);
}

// Dual domain: Frobenius ball of radius R_Y on symmetric matrices.
struct DualSet {
    double radius = 1.0;

    explicit DualSet(double r) : radius(r) {
        if (r <= 0.0) throw DomainError("DualSet: radius must be positive");
    }

    bool contains(const SymMatrix& y, double slack = 0.0) const {
        return frobenius_norm(y) <= radius + slack;
    }
};

// Rescaling preserves symmetry exactly.
inline SymMatrix project_dual(const DualSet& set, const SymMatrix& y) {
    double norm = frobenius_norm(y);
    if (norm <= set.radius) return y;
    SymMatrix out = y * (set.radius / norm);
    while (frobenius_norm(out) > set.radius) out *= (1.0 - 4e-16);
    return out;
}

}  // namespace orthosolve
