#pragma once
// Orthonormal trigonometric basis of the zero-mean periodic L2 space, drift
// functions represented by finitely many spectral coefficients, and the
// associated Sobolev norms.
//
// Indexing convention (k >= 1, no constant function):
//   phi_{2m-1}(x) = sqrt(2) sin(2 pi m x)
//   phi_{2m}(x)   = sqrt(2) cos(2 pi m x)

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftlab/rng.hpp"

namespace driftlab {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double sqrt2 = 1.4142135623730950488016887242097;

enum class BasisKind { laplacian_trig, custom };

struct BasisConvention {
    BasisKind kind = BasisKind::laplacian_trig;
};

namespace detail {

inline void require_trig(const BasisConvention& basis, const char* where) {
    if (basis.kind != BasisKind::laplacian_trig)
        throw std::domain_error(std::string(where) +
                                ": no custom basis implementation is registered");
}

// Fractional part in [0, 1).
inline double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0; // guards against floor rounding at negative ulps
    return f;
}

} // namespace detail

// phi_k(x) for the trigonometric basis; 1-periodic in x.
inline double eval_basis(int k, double x) {
    if (k < 1) throw std::domain_error("eval_basis: index k must be >= 1");
    const int m = (k + 1) / 2;
    const double arg = two_pi * static_cast<double>(m) * detail::frac(x);
    return (k % 2 == 1) ? sqrt2 * std::sin(arg) : sqrt2 * std::cos(arg);
}

// A drift function b = sum_k coeffs[k-1] * phi_k.  The truncation level is
// the length of `coeffs`; it is part of the data, never implicit.
struct DriftSpec {
    std::vector<double> coeffs;
    BasisConvention basis{};

    std::size_t size() const { return coeffs.size(); }

    bool all_finite() const {
        for (double c : coeffs)
            if (!std::isfinite(c)) return false;
        return true;
    }

    double l2_norm() const {
        double s = 0.0;
        for (double c : coeffs) s += c * c;
        return std::sqrt(s);
    }
};

// b(x) = sum_k b_k phi_k(x).  One sincos call; higher modes by the angle
// addition recurrence.
inline double eval_drift(const DriftSpec& b, double x) {
    detail::require_trig(b.basis, "eval_drift");
    const std::size_t K = b.coeffs.size();
    if (K == 0) return 0.0;
    const double a = two_pi * detail::frac(x);
    const double c1 = std::cos(a);
    const double s1 = std::sin(a);
    double cm = c1, sm = s1;
    double acc = 0.0;
    const std::size_t M = (K + 1) / 2;
    for (std::size_t m = 1; m <= M; ++m) {
        const std::size_t i_sin = 2 * m - 2; // index of phi_{2m-1}
        acc += b.coeffs[i_sin] * sm;
        if (i_sin + 1 < K) acc += b.coeffs[i_sin + 1] * cm;
        const double cn = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = cn;
    }
    return sqrt2 * acc;
}

// Exact antiderivative B(x) = integral_0^x b(y) dy of a finite drift.
// B is itself 1-periodic because every basis function has zero mean.
inline double drift_antiderivative(const DriftSpec& b, double x) {
    detail::require_trig(b.basis, "drift_antiderivative");
    const std::size_t K = b.coeffs.size();
    if (K == 0) return 0.0;
    const double a = two_pi * detail::frac(x);
    const double c1 = std::cos(a);
    const double s1 = std::sin(a);
    double cm = c1, sm = s1;
    double acc = 0.0;
    const std::size_t M = (K + 1) / 2;
    for (std::size_t m = 1; m <= M; ++m) {
        const double w = 1.0 / (two_pi * static_cast<double>(m));
        const std::size_t i_sin = 2 * m - 2;
        acc += b.coeffs[i_sin] * (1.0 - cm) * w; // integral of sqrt2 sin(2 pi m y)
        if (i_sin + 1 < K) acc += b.coeffs[i_sin + 1] * sm * w;
        const double cn = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = cn;
    }
    return sqrt2 * acc;
}

// Sobolev norm ||b||_{2,beta} = sqrt(sum_k b_k^2 k^{2 beta}); the index k is
// the series index, matching the smoothness scale of the prior.
inline double sobolev_norm(const DriftSpec& b, double beta) {
    if (!(beta > 0.0)) throw std::domain_error("sobolev_norm: beta must be > 0");
    double s = 0.0;
    for (std::size_t k = 1; k <= b.coeffs.size(); ++k) {
        const double c = b.coeffs[k - 1];
        s += c * c * std::pow(static_cast<double>(k), 2.0 * beta);
    }
    return std::sqrt(s);
}

enum class TestDriftProfile { power_decay, single_mode, random_sign };

inline TestDriftProfile parse_profile(const std::string& name) {
    if (name == "power_decay") return TestDriftProfile::power_decay;
    if (name == "single_mode") return TestDriftProfile::single_mode;
    if (name == "random_sign") return TestDriftProfile::random_sign;
    throw std::domain_error("unknown test drift profile: " + name);
}

inline const char* profile_name(TestDriftProfile p) {
    switch (p) {
        case TestDriftProfile::power_decay: return "power_decay";
        case TestDriftProfile::single_mode: return "single_mode";
        case TestDriftProfile::random_sign: return "random_sign";
    }
    throw std::domain_error("make_test_drift: invalid profile");
}

// Builds a truth drift with finite beta-Sobolev norm and exact L2 norm
// `target_norm`.  power_decay and random_sign use b_k proportional to
// k^{-1/2-beta-delta} with a fixed margin delta = 0.01, so membership in
// the beta-smoothness class holds strictly.
inline DriftSpec make_test_drift(double beta, double target_norm, int K,
                                 TestDriftProfile profile, std::uint64_t seed) {
    if (K < 1) throw std::domain_error("make_test_drift: K must be >= 1");
    if (!(beta > 0.0)) throw std::domain_error("make_test_drift: beta must be > 0");
    if (!(target_norm >= 0.0))
        throw std::domain_error("make_test_drift: target_norm must be >= 0");
    constexpr double delta = 0.01;

    DriftSpec b;
    b.coeffs.assign(static_cast<std::size_t>(K), 0.0);
    if (target_norm == 0.0) return b;

    switch (profile) {
        case TestDriftProfile::single_mode:
            b.coeffs[0] = target_norm;
            return b;
        case TestDriftProfile::power_decay: {
            for (int k = 1; k <= K; ++k)
                b.coeffs[k - 1] = std::pow(static_cast<double>(k), -0.5 - beta - delta);
            break;
        }
        case TestDriftProfile::random_sign: {
            Rng rng(derive_seed(seed, 0x7e57d81f7ULL));
            for (int k = 1; k <= K; ++k) {
                const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
                b.coeffs[k - 1] =
                    sign * std::pow(static_cast<double>(k), -0.5 - beta - delta);
            }
            break;
        }
    }
    const double scale = target_norm / b.l2_norm();
    for (double& c : b.coeffs) c *= scale;
    return b;
}

inline void to_json(nlohmann::json& j, const DriftSpec& b) {
    j = nlohmann::json{
        {"basis", b.basis.kind == BasisKind::laplacian_trig ? "laplacian_trig" : "custom"},
        {"coeffs", b.coeffs}};
}

inline void from_json(const nlohmann::json& j, DriftSpec& b) {
    const std::string kind = j.at("basis").get<std::string>();
    if (kind == "laplacian_trig")
        b.basis.kind = BasisKind::laplacian_trig;
    else if (kind == "custom")
        b.basis.kind = BasisKind::custom;
    else
        throw std::domain_error("DriftSpec: unknown basis kind " + kind);
    b.coeffs = j.at("coeffs").get<std::vector<double>>();
}

} // namespace driftlab
