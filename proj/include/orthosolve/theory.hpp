#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "orthosolve/lsalm.hpp"
#include "orthosolve/problem.hpp"

namespace orthosolve {

// Closed-form constants of the convergence analysis. Fields that require
// r > mu_rho carry a defined flag instead of silently propagating NaN.
struct TheoryConstants {
    double L_ell = 0.0;
    double L_g = 0.0;
    double L = 0.0;  // L_ell + L_g
    double mu_rho = 0.0;
    double L_rho = 0.0;

    bool smoothing_defined = false;  // true iff r > mu_rho
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double zeta = 0.0;
    double omega = 0.0;

    // Remark-style parameter recipes, evaluated at (delta, xi).
    double delta = 0.0;
    double xi = 0.0;
    double r_min_c1 = 0.0;
    double r_min_c2 = 0.0;
    double R_Y_recommended = 0.0;  // at r = max(1/lambda, c1, c2)

    // Candidate upper bounds: alpha <= min(alpha_max_terms),
    // beta <= min(beta_max_terms). Second alpha term and third beta term
    // require smoothing_defined.
    double alpha_max_terms[2] = {0.0, 0.0};
    double beta_max_terms[3] = {0.0, 0.0, 0.0};
};

inline double recipe_c1(double L, double R, double rho, double delta, double xi) {
    return (4.0 / 3.0) * (L + 4.0 * R +
                          (2.0 * (L + 2.0 * rho * R) * std::sqrt(1.0 - delta) + 4.0 * xi) /
                              (1.0 - delta) +
                          6.0 * rho * R * R + 2.0 * rho);
}

inline double recipe_c2(double L, double R, double rho, double delta, double xi) {
    return 4.0 * L +
           (8.0 * (L + 2.0 * rho * R) * std::sqrt(1.0 - delta) + 48.0 * xi) / (1.0 - delta) +
           24.0 * rho * R * R + 8.0 * rho;
}

inline TheoryConstants theory_constants(const Problem& p, const LsalmParams& params,
                                        double delta = 0.5, double xi = 1.0) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("theory_constants: delta must be in (0,1)");
    if (!(xi > 0.0)) throw DomainError("theory_constants: xi must be positive");

    TheoryConstants c;
    c.L_ell = p.smooth_grad_lipschitz;
    c.L_g = p.nonsmooth_lipschitz;
    c.L = c.L_ell + c.L_g;
    const double R = params.R_X_op;
    c.mu_rho = c.L + 2.0 * params.R_Y + 2.0 * params.rho;
    c.L_rho = c.L_ell + 2.0 * params.R_Y + 6.0 * params.rho * R * R + 2.0 * params.rho;

    c.smoothing_defined = params.r > c.mu_rho;
    if (c.smoothing_defined) {
        const double gap = params.r - c.mu_rho;
        c.sigma1 = params.r / gap;
        c.sigma2 = 2.0 * R / gap;
        const double inv_sum = 1.0 / params.lambda + c.L_rho;
        c.zeta = (2.0 / gap + 1.0 / inv_sum) * inv_sum * (std::sqrt(2.0 * c.L_rho / inv_sum) + 1.0);
        c.omega = (1.0 / std::sqrt(gap)) *
                  (1.0 + (2.0 * c.sigma2 * R + params.eps) * params.alpha) /
                  (std::sqrt(params.eps) * params.alpha);
    }

    c.delta = delta;
    c.xi = xi;
    c.r_min_c1 = recipe_c1(c.L, R, params.rho, delta, xi);
    c.r_min_c2 = recipe_c2(c.L, R, params.rho, delta, xi);
    const double r_min = std::max(1.0 / params.lambda, std::max(c.r_min_c1, c.r_min_c2));
    c.R_Y_recommended =
        (c.L + 2.0 * params.rho * R + std::sqrt(r_min * xi)) / std::sqrt(1.0 - delta);

    c.alpha_max_terms[0] = 1.0 / (20.0 * R);
    c.alpha_max_terms[1] =
        c.smoothing_defined ? 1.0 / (8.0 * R * c.zeta * c.zeta) : 0.0;
    c.beta_max_terms[0] = 1.0 / 28.0;
    c.beta_max_terms[1] =
        c.smoothing_defined
            ? (params.r - c.mu_rho) * (params.r - c.mu_rho) /
                  (28.0 * 2.0 * params.alpha * params.r * R * R)
            : 0.0;
    c.beta_max_terms[2] =
        c.smoothing_defined
            ? 1.0 / (28.0 * 16.0 * params.r * c.omega * c.omega * params.alpha)
            : 0.0;
    return c;
}

// Remark-style recipe: r large enough for the descent conditions, R_Y large
// enough for the interior-multiplier guarantee. delta is the constraint
// qualification radius, xi the displacement threshold; both are analysis
// inputs with no algorithmic role.
struct RRecommendation {
    double r_min = 0.0;
    double R_Y_recommended = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

inline RRecommendation recommend_r_RY(const Problem& p, const LsalmParams& params, double delta,
                                      double xi) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("recommend_r_RY: delta must be in (0,1)");
    if (!(xi > 0.0)) throw DomainError("recommend_r_RY: xi must be positive");
    const double L = p.smooth_grad_lipschitz + p.nonsmooth_lipschitz;
    const double R = params.R_X_op;
    RRecommendation rec;
    rec.c1 = recipe_c1(L, R, params.rho, delta, xi);
    rec.c2 = recipe_c2(L, R, params.rho, delta, xi);
    rec.r_min = std::max(1.0 / params.lambda, std::max(rec.c1, rec.c2));
    rec.R_Y_recommended =
        (L + 2.0 * params.rho * R + std::sqrt(rec.r_min * xi)) / std::sqrt(1.0 - delta);
    return rec;
}

// One inequality of the sufficient-descent conditions: holds iff lhs <= rhs.
// Rows whose right side needs r > mu_rho are marked undefined when it fails.
struct ConditionRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool defined = true;
    bool pass = false;
};

struct ConditionReport {
    std::vector<ConditionRow> rows;
    bool theory_pass = false;     // every descent-theory row defined and passing
    bool practical_pass = false;  // well-posedness only: the solver will accept these knobs
    bool beta_empirical_defined = false;
    double beta_empirical = 0.0;  // eps*alpha*(1 + 4 R^2 alpha/(r - mu_rho))^-2, unit constant
};

// The descent-theory conditions with both sides evaluated numerically, plus
// the separate practical verdict. The theory bounds are known to be
// conservative; runs are never refused on their account.
inline ConditionReport validate_params(const Problem& p, const LsalmParams& params) {
    const TheoryConstants c = theory_constants(p, params);
    const double R = params.R_X_op;
    ConditionReport report;

    auto add = [&](const std::string& name, double lhs, double rhs, bool defined = true) {
        ConditionRow row;
        row.name = name;
        row.lhs = lhs;
        row.rhs = rhs;
        row.defined = defined;
        row.pass = defined && lhs <= rhs;
        report.rows.push_back(row);
    };

    add("r >= L_rho + L_g + 4 R_X_op", c.L_rho + c.L_g + 4.0 * R, params.r);
    add("r >= 3 (L_rho + L_g)", 3.0 * (c.L_rho + c.L_g), params.r);
    add("r > mu_rho", c.mu_rho, params.r);
    add("lambda <= 1/(2 R_X_op)", params.lambda, 1.0 / (2.0 * R));
    add("alpha <= 1/(20 R_X_op)", params.alpha, c.alpha_max_terms[0]);
    add("alpha <= 1/(8 R_X_op zeta^2)", params.alpha, c.alpha_max_terms[1], c.smoothing_defined);
    add("beta <= 1/28", params.beta, c.beta_max_terms[0]);
    add("beta <= (r-mu_rho)^2/(56 alpha r R_X_op^2)", params.beta, c.beta_max_terms[1],
        c.smoothing_defined);
    // The two statements of the omega bound coincide: (1/28)(1/(16 r w^2 a))
    // equals 1/(448 r w^2 a). Both rows are reported side by side.
    add("beta <= (1/28)(1/(16 r omega^2 alpha))", params.beta, c.beta_max_terms[2],
        c.smoothing_defined);
    add("beta <= 1/(448 r omega^2 alpha)", params.beta,
        c.smoothing_defined
            ? 1.0 / (448.0 * params.r * c.omega * c.omega * params.alpha)
            : 0.0,
        c.smoothing_defined);

    report.theory_pass = true;
    for (const auto& row : report.rows) report.theory_pass = report.theory_pass && row.pass;

    report.practical_pass = true;
    try {
        params.validate();
    } catch (const ConfigError&) {
        report.practical_pass = false;
    }

    if (c.smoothing_defined) {
        const double factor = 1.0 + 4.0 * R * R * params.alpha / (params.r - c.mu_rho);
        report.beta_empirical_defined = true;
        report.beta_empirical = params.eps * params.alpha / (factor * factor);
    }
    return report;
}

}  // namespace orthosolve
