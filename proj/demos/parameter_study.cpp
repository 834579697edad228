// Sweep the averaging stepsize over a batch of seeded instances and print the
// per-cell convergence summary, then show the condition report for the last
// parameter set.

#include <cstdio>

#include "orthosolve/orthosolve.hpp"

int main() {
    using namespace orthosolve;

    SweepSpec spec;
    spec.problem.kind = "qp";
    spec.problem.m = 20;
    spec.problem.n = 2;
    spec.problem.mu = 0.35;
    spec.problem.seeds = {11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    spec.base_params = LsalmParams{};  // defaults are the nonsmooth-qp baseline
    spec.stop = StopRule::qp();
    spec.varied = "beta";
    spec.values = {0.1, 0.2, 0.3, 0.4, 0.44};

    const SweepResult result = run_sweep(spec, 2);
    std::printf("%6s %10s %12s %12s\n", "beta", "converged", "mean iters", "mean feas");
    for (const auto& cell : result.cells)
        std::printf("%6.2f %7ld/%ld %12.1f %12.3e\n", cell.value1, cell.converged_count,
                    result.instances, cell.mean_iters, cell.mean_final_feas);

    const Problem prob = gen_qp(20, 2, 0.35, 11);
    const ConditionReport report = validate_params(prob, spec.base_params);
    std::printf("\ntheory verdict %s, practical verdict %s\n",
                report.theory_pass ? "PASS" : "FAIL", report.practical_pass ? "PASS" : "FAIL");
    const RRecommendation rec = recommend_r_RY(prob, spec.base_params, 0.5, 1.0);
    std::printf("conservative recipe: r >= %.2f, R_Y = %.2f\n", rec.r_min, rec.R_Y_recommended);
    return 0;
}
