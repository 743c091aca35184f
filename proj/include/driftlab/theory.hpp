#pragma once
// Monte Carlo and analytic verification of the quantitative theory: small
// ball probabilities of the series prior, the truncation-based RKHS
// approximation bound, prior mass around a truth, hyperprior normalizer
// bounds, and contraction-rate slope fitting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftlab/basis.hpp"
#include "driftlab/prior.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

// Contraction rate eps_T = T^{-beta/(1+2 beta)}.
inline double rate_epsilon(double beta, double T) {
    if (!(beta > 0.0) || !(T > 0.0))
        throw std::domain_error("rate_epsilon: beta and T must be > 0");
    return std::pow(T, -beta / (1.0 + 2.0 * beta));
}

struct SmallBallEstimate {
    double alpha = 0.0;
    double L = 0.0;
    double epsilon = 0.0;
    int K = 0;
    long n_samples = 0;
    double p_hat = 0.0;
    double neg_log_p = 0.0;
    double std_err = 0.0;
    bool zero_hits = false; // p_hat is then an upper confidence bound only
    bool tilted = false;    // importance-sampled with the variance tilt
    double theta = 0.0;     // tilt parameter (0 when plain)
};

// Truncation level for small-ball sampling: prior tail variance beyond K is
// below (eps/10)^2, an order under the ball radius.
inline int small_ball_truncation(double alpha, double L, double epsilon) {
    if (!(epsilon > 0.0) || !(L > 0.0) || !(alpha > 0.0))
        throw std::domain_error("small_ball_truncation: positive arguments required");
    const double r = epsilon / L;
    // tail sum_{k>K} k^{-1-2a} <= K^{-2a}/(2a)  =>  K >= (100/(2a r^2))^{1/(2a)}
    const double k = std::pow(100.0 / (2.0 * alpha * r * r), 1.0 / (2.0 * alpha));
    return std::max(4, static_cast<int>(std::ceil(k)));
}

namespace detail {

// Solves sum_k v_k / (1 + 2 theta v_k) = target for theta >= 0 (monotone
// decreasing in theta); v_k are the prior coefficient variances.
inline double solve_tilt(const std::vector<double>& v, double target) {
    double lo = 0.0, hi = 1.0;
    auto g = [&v](double theta) {
        double s = 0.0;
        for (double a : v) s += a / (1.0 + 2.0 * theta * a);
        return s;
    };
    while (g(hi) > target) {
        hi *= 4.0;
        if (hi > 1e18) break;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// MC frequency of ||W^{alpha,L}||_2 < eps over n truncated samples.  When the
// ball is deep in the tail (eps^2 below the mean of the squared norm) the
// sampler switches to an exponentially tilted proposal: coordinate k is drawn
// with variance 1/(1+2 theta v_k), theta chosen so the ball is a central
// event under the proposal, with the analytic likelihood ratio
// exp(sum_k log sigma_k + theta S) — bounded on the event.
inline SmallBallEstimate small_ball_mc(double alpha, double L, double epsilon,
                                       int K, long n, Rng& rng) {
    if (n < 1000) throw std::domain_error("small_ball_mc: n must be >= 1000");
    if (K < small_ball_truncation(alpha, L, epsilon))
        throw std::domain_error(
            "small_ball_mc: K too small for the requested ball (tail variance "
            "above (eps/10)^2)");
    SmallBallEstimate out;
    out.alpha = alpha;
    out.L = L;
    out.epsilon = epsilon;
    out.K = K;
    out.n_samples = n;

    std::vector<double> v(static_cast<std::size_t>(K));
    double mean_s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double sd = L * std::pow(static_cast<double>(k), -0.5 - alpha);
        v[static_cast<std::size_t>(k - 1)] = sd * sd;
        mean_s += sd * sd;
    }
    const double r2 = epsilon * epsilon;

    double theta = 0.0;
    std::vector<double> sigma; // proposal standard deviations
    double log_sigma_sum = 0.0;
    if (mean_s > r2) {
        theta = detail::solve_tilt(v, r2);
        sigma.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            sigma[i] = 1.0 / std::sqrt(1.0 + 2.0 * theta * v[i]);
            log_sigma_sum += std::log(sigma[i]);
        }
        out.tilted = true;
        out.theta = theta;
    }

    double w_sum = 0.0, w2_sum = 0.0;
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        double s = 0.0;
        if (out.tilted) {
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double z = sigma[k] * rng.normal();
                s += v[k] * z * z;
            }
        } else {
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double z = rng.normal();
                s += v[k] * z * z;
            }
        }
        if (s < r2) {
            ++hits;
            const double w = out.tilted ? std::exp(log_sigma_sum + theta * s) : 1.0;
            w_sum += w;
            w2_sum += w * w;
        }
    }

    if (hits == 0) {
        out.zero_hits = true;
        // rule-of-three style upper confidence bound
        out.p_hat = out.tilted ? std::exp(log_sigma_sum + theta * r2) * 3.0 /
                                     static_cast<double>(n)
                               : 3.0 / static_cast<double>(n);
        out.neg_log_p = -std::log(out.p_hat);
        out.std_err = out.p_hat;
        return out;
    }
    out.p_hat = w_sum / static_cast<double>(n);
    out.neg_log_p = -std::log(out.p_hat);
    if (out.tilted) {
        const double var =
            (w2_sum / n - out.p_hat * out.p_hat) / static_cast<double>(n - 1);
        out.std_err = std::sqrt(std::max(var, 0.0));
    } else {
        // Wilson-style standard error for the plain Bernoulli frequency
        const double p = out.p_hat;
        out.std_err = std::sqrt(std::max(p * (1.0 - p), 0.25 / n) / n);
    }
    return out;
}

// Truncation approximation of a truth by an RKHS element: h keeps the
// coefficients with index <= I = ceil(eps^{-1/beta}).  Reports both sides of
// the approximation bound and the tail condition sum_{k>I} b_k^2 k^{2 beta}
// <= 1 under which the lemma's inequalities are guaranteed.
struct RkhsApprox {
    DriftSpec h;
    double l2_err = 0.0;
    double rkhs_sq = 0.0;
    double bound = 0.0;
    long truncation = 0;       // I
    double tail_sobolev = 0.0; // sum_{k>I} b_k^2 k^{2 beta}
    bool tail_ok = false;
};

inline RkhsApprox rkhs_approximation(const DriftSpec& b0, double beta, double alpha,
                                     double L, double epsilon) {
    if (!(beta > 0.0) || !(alpha > 0.0) || !(L > 0.0) || !(epsilon > 0.0))
        throw std::domain_error("rkhs_approximation: positive arguments required");
    if (beta > alpha + 0.5)
        throw std::domain_error(
            "rkhs_approximation: requires beta <= alpha + 1/2 (hypothesis of the "
            "approximation bound)");
    RkhsApprox out;
    out.truncation =
        static_cast<long>(std::ceil(std::pow(epsilon, -1.0 / beta)));
    const auto I = static_cast<std::size_t>(out.truncation);

    out.h.coeffs.assign(b0.coeffs.begin(),
                        b0.coeffs.begin() +
                            static_cast<std::ptrdiff_t>(std::min(I, b0.coeffs.size())));
    double tail_l2 = 0.0;
    double tail_sob = 0.0;
    for (std::size_t k = I + 1; k <= b0.coeffs.size(); ++k) {
        const double c = b0.coeffs[k - 1];
        tail_l2 += c * c;
        tail_sob += c * c * std::pow(static_cast<double>(k), 2.0 * beta);
    }
    out.l2_err = std::sqrt(tail_l2);
    out.tail_sobolev = tail_sob;
    out.tail_ok = tail_sob <= 1.0;
    const double rn = rkhs_norm(out.h, alpha, L);
    out.rkhs_sq = rn * rn;
    const double s = sobolev_norm(b0, beta);
    out.bound = s * s / (L * L) *
                std::pow(epsilon, (2.0 * beta - 2.0 * alpha - 1.0) / beta);
    return out;
}

struct PriorMassEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
    bool zero_hits = false;
    int K = 0;
};

// MC estimate of the prior mass of the L2 ball of radius eps around b0:
// draws hyperparameters (when random), then coefficients.  For a fixed
// hyperprior the draw sequence matches small_ball_mc exactly, so the two
// estimators agree under shared seeds when b0 = 0.
inline PriorMassEstimate prior_mass_mc(const HyperPriorSpec& hyper,
                                       const DriftSpec& b0, double epsilon, long n,
                                       Rng& rng) {
    if (n < 1000) throw std::domain_error("prior_mass_mc: n must be >= 1000");
    PriorMassEstimate out;
    out.n_samples = n;
    const double r2 = epsilon * epsilon;

    const bool fixed = hyper.kind == HyperPriorSpec::Kind::fixed;
    int K_fixed = 0;
    std::vector<double> sd_fixed;
    if (fixed) {
        K_fixed = std::max(small_ball_truncation(hyper.alpha, hyper.L, epsilon),
                           static_cast<int>(b0.coeffs.size()));
        sd_fixed.resize(static_cast<std::size_t>(K_fixed));
        for (int k = 1; k <= K_fixed; ++k)
            sd_fixed[static_cast<std::size_t>(k - 1)] =
                hyper.L * std::pow(static_cast<double>(k), -0.5 - hyper.alpha);
        out.K = K_fixed;
    }

    long hits = 0;
    for (long i = 0; i < n; ++i) {
        double s = 0.0;
        if (fixed) {
            for (int k = 1; k <= K_fixed; ++k) {
                const double c = sd_fixed[static_cast<std::size_t>(k - 1)] * rng.normal();
                const double d =
                    c - (static_cast<std::size_t>(k) <= b0.coeffs.size()
                             ? b0.coeffs[static_cast<std::size_t>(k - 1)]
                             : 0.0);
                s += d * d;
            }
        } else {
            const auto [a, l] = sample_hyper(hyper, rng);
            const int K = std::min(
                200000, std::max(small_ball_truncation(a, std::max(l, 1e-12), epsilon),
                                 static_cast<int>(b0.coeffs.size())));
            out.K = std::max(out.K, K);
            for (int k = 1; k <= K; ++k) {
                const double c =
                    l * std::pow(static_cast<double>(k), -0.5 - a) * rng.normal();
                const double d =
                    c - (static_cast<std::size_t>(k) <= b0.coeffs.size()
                             ? b0.coeffs[static_cast<std::size_t>(k - 1)]
                             : 0.0);
                s += d * d;
            }
        }
        if (s <= r2) ++hits;
    }

    if (hits == 0) {
        out.zero_hits = true;
        out.p_hat = 3.0 / static_cast<double>(n);
        out.std_err = out.p_hat;
        return out;
    }
    out.p_hat = static_cast<double>(hits) / static_cast<double>(n);
    out.std_err =
        std::sqrt(std::max(out.p_hat * (1.0 - out.p_hat), 0.25 / n) / n);
    return out;
}

struct NormalizerCheck {
    double C_T = 0.0;
    bool ok = false;
    double lower = 0.0;
    double upper = 0.0;
};

// Verifies log T / (2 e^e) <= C_T <= log T for the regularity hyperprior.
inline NormalizerCheck normalizer_bounds_check(double T) {
    NormalizerCheck out;
    const double log_t = std::log(T);
    out.C_T = alpha_normalizer(T, log_t);
    out.lower = log_t / (2.0 * std::exp(std::exp(1.0)));
    out.upper = log_t;
    out.ok = out.C_T >= out.lower && out.C_T <= out.upper;
    return out;
}

// --- contraction-rate tables -------------------------------------------------

struct RateRow {
    double T = 0.0;
    double error = 0.0;        // posterior-mean L2 error against the truth
    double mass_outside = 0.0; // posterior mass outside radius M eps_T
    std::uint64_t seed = 0;
    std::string hyper;
};

using RateTable = std::vector<RateRow>;

struct RateSlope {
    double slope = 0.0;
    double std_err = 0.0;
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("slope fit: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

} // namespace detail

// Least-squares slope of log median-error against log T, with a bootstrap
// standard error over the seeds within each horizon.
inline RateSlope fit_rate_slope(const RateTable& table, int bootstrap = 500,
                                std::uint64_t bootstrap_seed = 0x5eedb007ULL) {
    std::map<double, std::vector<double>> by_t;
    for (const RateRow& r : table) {
        if (!(r.T > 0.0) || !std::isfinite(r.error) || r.error < 0.0)
            throw std::invalid_argument("fit_rate_slope: bad row (T or error)");
        by_t[r.T].push_back(r.error);
    }
    if (by_t.size() < 3)
        throw std::invalid_argument("fit_rate_slope: need >= 3 distinct horizons");
    for (const auto& [t, errs] : by_t)
        if (errs.size() < 5)
            throw std::invalid_argument(
                "fit_rate_slope: need >= 5 seeds per horizon (T=" + std::to_string(t) +
                ")");

    std::vector<double> log_t, log_med;
    for (const auto& [t, errs] : by_t) {
        const double med = detail::median(errs);
        if (!(med > 0.0))
            throw std::invalid_argument("fit_rate_slope: nonpositive median error");
        log_t.push_back(std::log(t));
        log_med.push_back(std::log(med));
    }
    RateSlope out;
    out.slope = detail::ls_slope(log_t, log_med);

    Rng rng(bootstrap_seed);
    std::vector<double> slopes;
    slopes.reserve(static_cast<std::size_t>(bootstrap));
    for (int b = 0; b < bootstrap; ++b) {
        std::vector<double> lm;
        lm.reserve(log_t.size());
        bool ok = true;
        for (const auto& [t, errs] : by_t) {
            std::vector<double> re(errs.size());
            for (auto& e : re) e = errs[rng.below(errs.size())];
            const double med = detail::median(re);
            if (!(med > 0.0)) {
                ok = false;
                break;
            }
            lm.push_back(std::log(med));
        }
        if (ok) slopes.push_back(detail::ls_slope(log_t, lm));
    }
    if (slopes.size() > 1) {
        double mean = 0.0;
        for (double s : slopes) mean += s;
        mean /= static_cast<double>(slopes.size());
        double var = 0.0;
        for (double s : slopes) var += (s - mean) * (s - mean);
        out.std_err = std::sqrt(var / static_cast<double>(slopes.size() - 1));
    }
    return out;
}

} // namespace driftlab
