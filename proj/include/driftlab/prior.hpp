#pragma once
// Gaussian series priors on the drift: W^{alpha,L} = L sum_k sqrt(lambda_k)
// phi_k Z_k, the two hyperprior schemes (random scale, random regularity),
// and the RKHS norm attached to the prior.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftlab/basis.hpp"
#include "driftlab/quadrature.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

// Eigenvalue sequence of the prior precision operator.
//   simplified:  sqrt(lambda_k) = k^{-1/2-alpha}  (working convention)
//   laplacian :  lambda_k = ((4 pi^2 ceil(k/2)^2)^{alpha+1/2} + kappa)^{-1}
// The two agree up to constants; the laplacian mode is retained for the
// bound check only.
struct EigenMode {
    enum class Kind { simplified, laplacian };
    Kind kind = Kind::simplified;
    double kappa = 1.0; // only used by laplacian

    static EigenMode simplified() { return EigenMode{}; }
    static EigenMode laplacian(double kappa) {
        if (!(kappa > 0.0)) throw std::domain_error("EigenMode: kappa must be > 0");
        return EigenMode{Kind::laplacian, kappa};
    }
};

struct GpPriorSpec {
    double alpha = 1.0; // regularity
    double L = 1.0;     // scale, = 1/sqrt(eta)
    int K = 1000;       // truncation level
    EigenMode eigen_mode{};
};

inline double sqrt_lambda(int k, const GpPriorSpec& spec) {
    if (k < 1) throw std::domain_error("sqrt_lambda: k must be >= 1");
    if (spec.eigen_mode.kind == EigenMode::Kind::simplified)
        return std::pow(static_cast<double>(k), -0.5 - spec.alpha);
    const double half = std::ceil(0.5 * static_cast<double>(k));
    const double freq_sq = (two_pi * half) * (two_pi * half); // 4 pi^2 ceil(k/2)^2
    const double lam =
        1.0 / (std::pow(freq_sq, spec.alpha + 0.5) + spec.eigen_mode.kappa);
    return std::sqrt(lam);
}

// One draw of the truncated series prior; coefficient k is L sqrt(lambda_k) Z_k.
inline DriftSpec sample_gp(const GpPriorSpec& spec, Rng& rng) {
    if (spec.K < 1) throw std::domain_error("sample_gp: K must be >= 1");
    DriftSpec b;
    b.coeffs.resize(static_cast<std::size_t>(spec.K));
    for (int k = 1; k <= spec.K; ++k)
        b.coeffs[k - 1] = spec.L * sqrt_lambda(k, spec) * rng.normal();
    return b;
}

// Default series truncation when drawing from the prior at horizon T: the
// tail variance beyond K is at most L^2 K^{-2 alpha} / (2 alpha), negligible
// against the posterior spread at the targeted horizons.
inline int default_prior_truncation(double alpha, double T) {
    const double k = 10.0 * std::pow(T, 1.0 / (1.0 + 2.0 * alpha));
    return std::max(1000, static_cast<int>(std::ceil(k)));
}

namespace detail {

// L = E^{1/2+alpha} / sqrt(T) for a standard exponential E; equivalently a
// Weibull law with shape 2/(1+2 alpha) and scale T^{-1/2}.
inline double scale_from_exponential(double e, double alpha, double T) {
    return std::pow(e, 0.5 + alpha) / std::sqrt(T);
}

} // namespace detail

inline double sample_scale(double alpha, double T, Rng& rng) {
    if (!(T > 0.0)) throw std::domain_error("sample_scale: T must be > 0");
    return detail::scale_from_exponential(rng.exponential(), alpha, T);
}

inline double weibull_scale_shape(double alpha) { return 2.0 / (1.0 + 2.0 * alpha); }

// Density of the scale prior at l (> 0).
inline double scale_prior_density(double l, double alpha, double T) {
    const double shape = weibull_scale_shape(alpha);
    const double scale = 1.0 / std::sqrt(T);
    if (!(l > 0.0)) return 0.0;
    const double z = l / scale;
    return (shape / scale) * std::pow(z, shape - 1.0) * std::exp(-std::pow(z, shape));
}

inline double log_scale_prior_density(double l, double alpha, double T) {
    const double shape = weibull_scale_shape(alpha);
    const double scale = 1.0 / std::sqrt(T);
    const double z = l / scale;
    return std::log(shape / scale) + (shape - 1.0) * std::log(z) - std::pow(z, shape);
}

// Quantile of the scale prior.
inline double scale_prior_quantile(double p, double alpha, double T) {
    const double shape = weibull_scale_shape(alpha);
    return std::pow(-std::log1p(-p), 1.0 / shape) / std::sqrt(T);
}

// --- random-regularity hyperprior -----------------------------------------
//
// density lambda_T(x) = C_T^{-1} exp(-T^{1/(1+2x)}) on [0, alpha_max],
// alpha_max = log T by default.  The unnormalized density is monotone
// increasing on the support.

inline double log_alpha_density_unnorm(double x, double T) {
    return -std::pow(T, 1.0 / (1.0 + 2.0 * x));
}

// Normalizer C_T by adaptive quadrature, absolute tolerance 1e-10.  The
// integrand underflows to zero near x = 0 for large T, which is harmless.
inline double alpha_normalizer(double T, double alpha_max) {
    if (!(T > std::exp(1.0)))
        throw std::domain_error("alpha_normalizer: requires T > e");
    auto f = [T](double x) { return std::exp(log_alpha_density_unnorm(x, T)); };
    return quad::adaptive_simpson(f, 0.0, alpha_max, 1e-10, 64);
}

struct AlphaDensityValue {
    double density;
    double normalizer; // C_T
};

inline AlphaDensityValue alpha_density(double x, double T,
                                       double alpha_max = -1.0) {
    if (!(T > std::exp(1.0))) throw std::domain_error("alpha_density: requires T > e");
    if (alpha_max <= 0.0) alpha_max = std::log(T);
    const double ct = alpha_normalizer(T, alpha_max);
    double d = 0.0;
    if (x >= 0.0 && x <= alpha_max)
        d = std::exp(log_alpha_density_unnorm(x, T)) / ct;
    return {d, ct};
}

// Inverse-CDF draw from lambda_T, using a cumulative table of the
// unnormalized density.
inline double sample_alpha(double T, Rng& rng, double alpha_max = -1.0,
                           std::size_t table_size = 4096) {
    if (!(T > std::exp(1.0))) throw std::domain_error("sample_alpha: requires T > e");
    if (alpha_max <= 0.0) alpha_max = std::log(T);
    auto f = [T](double x) { return std::exp(log_alpha_density_unnorm(x, T)); };
    const std::vector<double> cum = quad::cumulative_simpson(f, 0.0, alpha_max, table_size);
    const double total = cum.back();
    const double u = rng.uniform01() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    std::size_t hi = static_cast<std::size_t>(it - cum.begin());
    if (hi == 0) hi = 1;
    const double h = alpha_max / static_cast<double>(table_size);
    const double c0 = cum[hi - 1], c1 = cum[hi];
    const double t = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
    return h * (static_cast<double>(hi - 1) + t);
}

// RKHS norm of the prior W^{alpha,L}: L ||h||_H = ||h||_{2,1/2+alpha}.
inline double rkhs_norm(const DriftSpec& h, double alpha, double L) {
    if (!(L > 0.0)) throw std::domain_error("rkhs_norm: L must be > 0");
    return sobolev_norm(h, 0.5 + alpha) / L;
}

// --- hyperprior specification ----------------------------------------------

struct HyperPriorSpec {
    enum class Kind { fixed, scale_weibull, alpha_truncated };
    Kind kind = Kind::fixed;
    double alpha = 1.0;     // fixed / scale_weibull baseline
    double L = 1.0;         // fixed only
    double T = 0.0;         // scale_weibull / alpha_truncated
    double alpha_max = 0.0; // alpha_truncated; defaults to log T

    static HyperPriorSpec fixed(double alpha, double L) {
        HyperPriorSpec h;
        h.kind = Kind::fixed;
        h.alpha = alpha;
        h.L = L;
        return h;
    }
    static HyperPriorSpec scale_weibull(double alpha, double T) {
        HyperPriorSpec h;
        h.kind = Kind::scale_weibull;
        h.alpha = alpha;
        h.T = T;
        return h;
    }
    static HyperPriorSpec alpha_truncated(double T, double alpha_max = -1.0) {
        if (!(T > std::exp(1.0)))
            throw std::domain_error("HyperPriorSpec: alpha_truncated requires T > e");
        HyperPriorSpec h;
        h.kind = Kind::alpha_truncated;
        h.T = T;
        h.alpha_max = alpha_max > 0.0 ? alpha_max : std::log(T);
        h.L = 1.0;
        return h;
    }
};

// One (alpha, L) draw from the hyperprior.  Fixed hyperparameters consume no
// randomness, so estimators built on top can share seeds with fixed-prior
// references exactly.
inline std::pair<double, double> sample_hyper(const HyperPriorSpec& h, Rng& rng) {
    switch (h.kind) {
        case HyperPriorSpec::Kind::fixed: return {h.alpha, h.L};
        case HyperPriorSpec::Kind::scale_weibull:
            return {h.alpha, sample_scale(h.alpha, h.T, rng)};
        case HyperPriorSpec::Kind::alpha_truncated:
            return {sample_alpha(h.T, rng, h.alpha_max), 1.0};
    }
    throw std::logic_error("sample_hyper: bad kind");
}

inline void to_json(nlohmann::json& j, const HyperPriorSpec& h) {
    switch (h.kind) {
        case HyperPriorSpec::Kind::fixed:
            j = nlohmann::json{{"kind", "fixed"}, {"alpha", h.alpha}, {"L", h.L}};
            return;
        case HyperPriorSpec::Kind::scale_weibull:
            j = nlohmann::json{{"kind", "scale_weibull"}, {"alpha", h.alpha}, {"T", h.T}};
            return;
        case HyperPriorSpec::Kind::alpha_truncated:
            j = nlohmann::json{
                {"kind", "alpha_truncated"}, {"T", h.T}, {"alpha_max", h.alpha_max}};
            return;
    }
}

inline void from_json(const nlohmann::json& j, HyperPriorSpec& h) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") {
        h = HyperPriorSpec::fixed(j.at("alpha").get<double>(), j.at("L").get<double>());
    } else if (kind == "scale_weibull") {
        h = HyperPriorSpec::scale_weibull(j.at("alpha").get<double>(),
                                          j.at("T").get<double>());
    } else if (kind == "alpha_truncated") {
        h = HyperPriorSpec::alpha_truncated(j.at("T").get<double>(),
                                            j.at("alpha_max").get<double>());
    } else {
        throw std::domain_error("HyperPriorSpec: unknown kind " + kind);
    }
}

} // namespace driftlab
