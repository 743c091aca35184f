// Minimal end-to-end example: simulate a diffusion with a known drift,
// compute the conjugate posterior for a matched prior, and print how the
// posterior mean compares with the truth.

#include <cstdio>

#include "driftlab/inference.hpp"
#include "driftlab/sde.hpp"
#include "driftlab/theory.hpp"

int main() {
    using namespace driftlab;

    const double beta = 1.0, T = 500.0, dt = 1e-3;
    const DriftSpec truth =
        make_test_drift(beta, 1.0, 50, TestDriftProfile::power_decay, 0);

    std::printf("simulating T = %.0f at dt = %g ...\n", T, dt);
    const PathRecord path = simulate_path(truth, T, dt, 42);

    const int K = default_inference_truncation(T, beta);
    const SuffStats stats = sufficient_stats(path, K);
    const PosteriorGaussian post = posterior_fixed(stats, beta, 1.0);

    double err2 = 0.0;
    for (int k = 0; k < K; ++k) {
        const double t = static_cast<std::size_t>(k) < truth.coeffs.size()
                             ? truth.coeffs[static_cast<std::size_t>(k)]
                             : 0.0;
        const double d = post.mean()(k) - t;
        err2 += d * d;
    }
    std::printf("truncation K = %d, log marginal = %.2f\n", K, post.log_marginal());
    std::printf("posterior-mean L2 error: %.4f (eps_T = %.4f)\n", std::sqrt(err2),
                rate_epsilon(beta, T));

    std::printf("first coefficients (truth vs posterior mean):\n");
    for (int k = 0; k < 5; ++k)
        std::printf("  b_%d: %+.4f vs %+.4f\n", k + 1, truth.coeffs[static_cast<std::size_t>(k)],
                    post.mean()(k));
    return 0;
}
