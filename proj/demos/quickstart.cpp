// Minimal library walkthrough: generate a small sparse-PCA instance, solve it,
// and print a few diagnostics.

#include <cstdio>

#include "orthosolve/orthosolve.hpp"

int main() {
    using namespace orthosolve;

    const Problem prob = gen_spca(/*p=*/100, /*m=*/40, /*n=*/4, /*mu=*/0.5, /*seed=*/7);

    LsalmParams params;
    params.rho = 10.0;
    params.alpha = 1.0;
    params.beta = 0.5;
    params.eps = 1e-10;
    params.r = 15.0;
    params.R_Y = 1e3;
    params.lambda = 1.0 / (prob.smooth_grad_lipschitz + 2.0 * params.R_Y + 8.0 * params.rho);

    const Matrix x0 = init_feasible(prob, 42);
    const RunRecord rec = run(prob, params, StopRule::spca(), x0);

    std::printf("status        %s\n", to_string(rec.status));
    std::printf("iterations    %ld\n", rec.total_iters);
    std::printf("objective     %.6f\n", rec.final_obj);
    std::printf("feasibility   %.3e\n", rec.final_feas);
    std::printf("kkt residual  %.3e\n", rec.final_kkt);
    std::printf("sparsity      %.3f\n", sparsity(rec.final_X));
    return rec.status == RunStatus::Converged ? 0 : 1;
}
