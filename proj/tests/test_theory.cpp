#include <catch_amalgamated.hpp>

#include "orthosolve/problem.hpp"
#include "orthosolve/theory.hpp"

using namespace orthosolve;

namespace {

// Hand-constructed problem carrying prescribed Lipschitz constants; the
// payload itself is irrelevant for the constant formulas.
Problem with_constants(double l_ell, double l_g) {
    Problem p;
    p.kind = "qp";
    p.m = 4;
    p.n = 2;
    p.mu = l_g > 0.0 ? 1.0 : 0.0;
    p.payload = QpPayload{SymMatrix::zero(4), Matrix(4, 2)};
    p.smooth_grad_lipschitz = l_ell;
    p.nonsmooth_lipschitz = l_g;
    p.primal_set = l_g > 0.0 ? PrimalSet::box(10.0)
                             : PrimalSet::frobenius_ball(PrimalSet::default_ball_radius(2));
    return p;
}

LsalmParams conservative_params() {
    // Constructed so every descent-theory inequality holds: tiny constants,
    // large smoothing parameter.
    LsalmParams params;
    params.rho = 0.0;
    params.lambda = 1.0;       // <= 1/(2 R) with R = 0.5
    params.r = 40.0;
    params.alpha = 0.05;
    params.beta = 1e-6;
    params.eps = 0.01;
    params.R_Y = 0.1;
    params.R_X_op = 0.5;
    return params;
}

}  // namespace

TEST_CASE("mu_rho and L_rho formulas") {
    const Problem p = with_constants(1.0, 0.0);
    LsalmParams params;
    params.rho = 0.15;
    params.R_Y = 5.0;
    params.R_X_op = 10.0;
    const TheoryConstants c = theory_constants(p, params);
    CHECK(c.mu_rho == Catch::Approx(11.3).epsilon(1e-14));
    CHECK(c.L_rho == Catch::Approx(1.0 + 10.0 + 6.0 * 0.15 * 100.0 + 0.3).epsilon(1e-14));
}

TEST_CASE("sigma1 equals 2 when r is twice mu_rho") {
    const Problem p = with_constants(1.0, 0.0);
    LsalmParams params;
    params.rho = 0.15;
    params.R_Y = 5.0;
    params.R_X_op = 10.0;
    params.r = 2.0 * (1.0 + 2.0 * 5.0 + 2.0 * 0.15);
    const TheoryConstants c = theory_constants(p, params);
    REQUIRE(c.smoothing_defined);
    CHECK(c.sigma1 == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(c.sigma2 == Catch::Approx(2.0 * 10.0 / 11.3).epsilon(1e-14));
}

TEST_CASE("omega decreases as eps*alpha^2 grows") {
    const Problem p = with_constants(1.0, 0.0);
    LsalmParams params;
    params.rho = 0.0;
    params.R_Y = 1.0;
    params.R_X_op = 1.0;
    params.r = 50.0;
    params.eps = 1e-4;
    double previous = std::numeric_limits<double>::infinity();
    for (double alpha : {0.01, 0.02, 0.05, 0.1, 0.2}) {
        params.alpha = alpha;
        const TheoryConstants c = theory_constants(p, params);
        REQUIRE(c.smoothing_defined);
        CHECK(c.omega < previous);
        previous = c.omega;
    }
}

TEST_CASE("smoothing constants flagged undefined when r <= mu_rho") {
    const Problem p = with_constants(1.0, 2.0);
    LsalmParams params;  // baseline r = 1.25 << mu_rho
    const TheoryConstants c = theory_constants(p, params);
    CHECK_FALSE(c.smoothing_defined);
}

TEST_CASE("conservative parameter set passes every theory row") {
    const Problem p = with_constants(0.0, 0.0);
    const ConditionReport report = validate_params(p, conservative_params());
    for (const auto& row : report.rows) {
        INFO(row.name << " lhs=" << row.lhs << " rhs=" << row.rhs);
        CHECK(row.defined);
        CHECK(row.pass);
    }
    CHECK(report.theory_pass);
    CHECK(report.practical_pass);
}

TEST_CASE("baseline parameters fail theory but pass practically") {
    const Problem p = with_constants(1.0, 0.35 * std::sqrt(40.0));
    LsalmParams params;  // defaults are the baseline set
    const ConditionReport report = validate_params(p, params);
    CHECK_FALSE(report.theory_pass);
    CHECK(report.practical_pass);
    // specifically the smoothing condition r > mu_rho fails
    bool r_row_found = false;
    for (const auto& row : report.rows)
        if (row.name == "r > mu_rho") {
            r_row_found = true;
            CHECK_FALSE(row.pass);
        }
    CHECK(r_row_found);
}

TEST_CASE("the two omega-bound rows coincide") {
    const Problem p = with_constants(0.0, 0.0);
    const ConditionReport report = validate_params(p, conservative_params());
    double prop_form = -1.0, appendix_form = -2.0;
    for (const auto& row : report.rows) {
        if (row.name.find("(1/28)(1/(16") != std::string::npos) prop_form = row.rhs;
        if (row.name.find("448") != std::string::npos) appendix_form = row.rhs;
    }
    CHECK(prop_form == Catch::Approx(appendix_form).epsilon(1e-14));
}

TEST_CASE("beta exactly at the 1/28 boundary passes") {
    const Problem p = with_constants(0.0, 0.0);
    LsalmParams params = conservative_params();
    params.alpha = 1e-4;  // makes the other beta terms generous
    params.beta = 1.0 / 28.0;
    const ConditionReport report = validate_params(p, params);
    for (const auto& row : report.rows)
        if (row.name == "beta <= 1/28") CHECK(row.pass);
}

TEST_CASE("empirical beta scale reported when defined") {
    const Problem p = with_constants(0.0, 0.0);
    const LsalmParams params = conservative_params();
    const ConditionReport report = validate_params(p, params);
    REQUIRE(report.beta_empirical_defined);
    const double mu_rho = 0.0 + 2.0 * params.R_Y + 0.0;
    const double factor =
        1.0 + 4.0 * params.R_X_op * params.R_X_op * params.alpha / (params.r - mu_rho);
    CHECK(report.beta_empirical ==
          Catch::Approx(params.eps * params.alpha / (factor * factor)).epsilon(1e-14));
}

TEST_CASE("recommendation recipe") {
    const Problem p = with_constants(1.0, 0.0);
    LsalmParams params;
    params.rho = 0.0;
    params.R_X_op = 1.0;
    params.lambda = 1.0;

    SECTION("c2 dominates c1 on the worked example") {
        const RRecommendation rec = recommend_r_RY(p, params, 0.5, 1.0);
        const double s = std::sqrt(0.5);
        const double c1 = (4.0 / 3.0) * (1.0 + 4.0 + (2.0 * 1.0 * s + 4.0) / 0.5);
        const double c2 = 4.0 + (8.0 * 1.0 * s + 48.0) / 0.5;
        CHECK(rec.c1 == Catch::Approx(c1).epsilon(1e-14));
        CHECK(rec.c2 == Catch::Approx(c2).epsilon(1e-14));
        CHECK(rec.c2 > rec.c1);
        CHECK(rec.r_min == Catch::Approx(std::max(c1, c2)).epsilon(1e-14));
    }

    SECTION("r_min never drops below 1/lambda") {
        params.lambda = 1e-4;
        const RRecommendation rec = recommend_r_RY(p, params, 0.5, 1e-6);
        CHECK(rec.r_min >= 1.0 / params.lambda);
    }

    SECTION("recommended R_Y dominates the interior-multiplier threshold") {
        for (double delta : {0.1, 0.5, 0.9}) {
            const RRecommendation rec = recommend_r_RY(p, params, delta, 1.0);
            const double threshold = (1.0 + 0.0 + std::sqrt(rec.r_min * 1.0)) /
                                     (2.0 * std::sqrt(1.0 - delta));
            CHECK(rec.R_Y_recommended > threshold);
        }
    }

    SECTION("domain guards") {
        CHECK_THROWS_AS(recommend_r_RY(p, params, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(recommend_r_RY(p, params, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(recommend_r_RY(p, params, 0.5, -1.0), DomainError);
    }
}
