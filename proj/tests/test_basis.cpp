#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "driftlab/basis.hpp"
#include "driftlab/quadrature.hpp"
#include "driftlab/rng.hpp"

using namespace driftlab;
using Catch::Approx;

namespace {

// Independent quadrature oracle: trapezoid rule over a uniform grid on [0,1].
template <typename F>
double trapezoid01(F&& f, std::size_t n) {
    double s = 0.5 * (f(0.0) + f(1.0));
    for (std::size_t i = 1; i < n; ++i) s += f(static_cast<double>(i) / n);
    return s / static_cast<double>(n);
}

DriftSpec random_spec(std::size_t K, Rng& rng, double scale = 1.0) {
    DriftSpec b;
    b.coeffs.resize(K);
    for (auto& c : b.coeffs) c = scale * rng.normal();
    return b;
}

} // namespace

TEST_CASE("eval_basis at pinned points", "[basis]") {
    REQUIRE(eval_basis(1, 0.0) == Approx(0.0).margin(1e-15));
    REQUIRE(eval_basis(2, 0.0) == Approx(std::sqrt(2.0)));
    // sqrt(2) cos(pi/2)
    REQUIRE(eval_basis(2, 0.25) == Approx(0.0).margin(1e-15));
    // first sine mode peaks at x = 1/4
    REQUIRE(eval_basis(1, 0.25) == Approx(std::sqrt(2.0)));
}

TEST_CASE("eval_basis rejects nonpositive index", "[basis]") {
    REQUIRE_THROWS_AS(eval_basis(0, 0.3), std::domain_error);
    REQUIRE_THROWS_AS(eval_basis(-4, 0.3), std::domain_error);
}

TEST_CASE("basis is orthonormal and mean zero under quadrature", "[basis]") {
    // phi values for k = 1..20 on a 1e5-point grid, then pairwise trapezoid
    constexpr int K = 20;
    constexpr std::size_t n = 100000;
    std::vector<std::vector<double>> phi(K, std::vector<double>(n + 1));
    for (int k = 1; k <= K; ++k)
        for (std::size_t i = 0; i <= n; ++i)
            phi[k - 1][i] = eval_basis(k, static_cast<double>(i) / n);

    for (int j = 1; j <= K; ++j) {
        // zero mean
        double mean = 0.5 * (phi[j - 1][0] + phi[j - 1][n]);
        for (std::size_t i = 1; i < n; ++i) mean += phi[j - 1][i];
        mean /= static_cast<double>(n);
        REQUIRE(mean == Approx(0.0).margin(1e-6));

        for (int k = j; k <= K; ++k) {
            double ip = 0.5 * (phi[j - 1][0] * phi[k - 1][0] + phi[j - 1][n] * phi[k - 1][n]);
            for (std::size_t i = 1; i < n; ++i) ip += phi[j - 1][i] * phi[k - 1][i];
            ip /= static_cast<double>(n);
            REQUIRE(ip == Approx(j == k ? 1.0 : 0.0).margin(1e-6));
        }
    }
}

TEST_CASE("eval_drift matches pinned examples", "[basis]") {
    REQUIRE(eval_drift(DriftSpec{}, 0.37) == 0.0);
    REQUIRE(eval_drift(DriftSpec{{0.0, 1.0}}, 0.0) == Approx(std::sqrt(2.0)));
    // sqrt(2)(sin(pi/4) + cos(pi/4)) = 2
    REQUIRE(eval_drift(DriftSpec{{1.0, 1.0}}, 0.125) == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eval_drift equals the coefficient-by-coefficient sum", "[basis]") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t K = 1 + static_cast<std::size_t>(rng.below(60));
        const DriftSpec b = random_spec(K, rng);
        const double x = 4.0 * rng.normal();
        double direct = 0.0;
        for (std::size_t k = 1; k <= K; ++k)
            direct += b.coeffs[k - 1] * eval_basis(static_cast<int>(k), x);
        REQUIRE(eval_drift(b, x) == Approx(direct).margin(1e-11));
    }
}

TEST_CASE("eval_drift is 1-periodic", "[basis]") {
    Rng rng(12);
    const DriftSpec b = random_spec(33, rng);
    for (double x : {-2.75, -0.4, 0.0, 0.6, 1.3, 17.0}) {
        REQUIRE(eval_drift(b, x) ==
                Approx(eval_drift(b, x + 1.0)).margin(1e-11));
        REQUIRE(eval_drift(b, x) ==
                Approx(eval_drift(b, x - 3.0)).margin(1e-11));
    }
}

TEST_CASE("sobolev_norm pinned values and domain", "[basis]") {
    REQUIRE(sobolev_norm(DriftSpec{{1.0}}, 2.0) == Approx(1.0));
    // sqrt(1 * 2^2) = 2
    REQUIRE(sobolev_norm(DriftSpec{{0.0, 1.0}}, 1.0) == Approx(2.0));
    REQUIRE(sobolev_norm(DriftSpec{{0.0, 0.0}}, 0.7) == 0.0);
    REQUIRE_THROWS_AS(sobolev_norm(DriftSpec{{1.0}}, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(sobolev_norm(DriftSpec{{1.0}}, -1.0), std::domain_error);
}

TEST_CASE("sobolev norms are monotone in the smoothness index", "[basis]") {
    Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const DriftSpec b = random_spec(1 + rng.below(40), rng);
        const double b1 = 0.1 + 2.0 * rng.uniform01();
        const double b2 = b1 + 0.1 + rng.uniform01();
        REQUIRE(sobolev_norm(b, b1) <= sobolev_norm(b, b2) + 1e-12);
    }
}

TEST_CASE("Parseval: quadrature of b^2 matches the coefficient sum", "[basis]") {
    Rng rng(14);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t K = 1 + static_cast<std::size_t>(rng.below(50));
        const DriftSpec b = random_spec(K, rng, 0.5);
        const double quad_norm_sq =
            trapezoid01([&b](double x) { const double v = eval_drift(b, x); return v * v; },
                        100000);
        double coef = 0.0;
        for (double c : b.coeffs) coef += c * c;
        REQUIRE(quad_norm_sq == Approx(coef).margin(1e-6));
    }
}

TEST_CASE("make_test_drift profiles", "[basis]") {
    SECTION("single mode, K=1") {
        const DriftSpec b = make_test_drift(1.0, 1.0, 1, TestDriftProfile::single_mode, 0);
        REQUIRE(b.coeffs == std::vector<double>{1.0});
    }
    SECTION("power decay hits the target norm exactly") {
        const DriftSpec b =
            make_test_drift(1.0, 1.0, 100, TestDriftProfile::power_decay, 0);
        REQUIRE(b.coeffs.size() == 100);
        REQUIRE(std::abs(b.l2_norm() - 1.0) < 1e-12);
        REQUIRE(std::isfinite(sobolev_norm(b, 1.0)));
        // coefficients follow k^{-1/2-beta-delta}
        REQUIRE(b.coeffs[1] / b.coeffs[0] == Approx(std::pow(2.0, -1.51)));
    }
    SECTION("zero norm gives the zero drift") {
        for (auto p : {TestDriftProfile::power_decay, TestDriftProfile::single_mode,
                       TestDriftProfile::random_sign}) {
            const DriftSpec b = make_test_drift(2.0, 0.0, 10, p, 1);
            for (double c : b.coeffs) REQUIRE(c == 0.0);
        }
    }
    SECTION("random_sign is deterministic in the seed and sign-flipped") {
        const DriftSpec a = make_test_drift(1.0, 1.0, 50, TestDriftProfile::random_sign, 7);
        const DriftSpec b = make_test_drift(1.0, 1.0, 50, TestDriftProfile::random_sign, 7);
        const DriftSpec c = make_test_drift(1.0, 1.0, 50, TestDriftProfile::random_sign, 8);
        REQUIRE(a.coeffs == b.coeffs);
        REQUIRE(a.coeffs != c.coeffs);
        bool has_negative = false;
        for (double v : a.coeffs) has_negative = has_negative || v < 0.0;
        REQUIRE(has_negative);
        REQUIRE(std::abs(a.l2_norm() - 1.0) < 1e-12);
    }
    SECTION("invalid arguments") {
        REQUIRE_THROWS_AS(make_test_drift(1.0, 1.0, 0, TestDriftProfile::power_decay, 0),
                          std::domain_error);
        REQUIRE_THROWS_AS(parse_profile("no_such_profile"), std::domain_error);
    }
}

TEST_CASE("drift antiderivative agrees with numeric quadrature", "[basis]") {
    Rng rng(15);
    const DriftSpec b = random_spec(17, rng);
    for (double x : {0.1, 0.35, 0.8, 1.7, -0.6}) {
        const double numeric = quad::adaptive_simpson(
            [&b](double y) { return eval_drift(b, y); }, 0.0, x, 1e-12, 8);
        REQUIRE(drift_antiderivative(b, x) == Approx(numeric).margin(1e-10));
    }
    // periodic: B(x+1) = B(x) because the drift has zero mean
    REQUIRE(drift_antiderivative(b, 0.3) ==
            Approx(drift_antiderivative(b, 1.3)).margin(1e-12));
}

TEST_CASE("DriftSpec JSON round trip uses the documented schema", "[basis]") {
    const DriftSpec b{{0.5, -0.25, 0.125}};
    const nlohmann::json j = b;
    REQUIRE(j.at("basis") == "laplacian_trig");
    REQUIRE(j.at("coeffs").size() == 3);
    const auto back = j.get<DriftSpec>();
    REQUIRE(back.coeffs == b.coeffs);
}
