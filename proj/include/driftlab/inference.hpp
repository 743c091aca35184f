#pragma once
// Likelihood sufficient statistics and exact conjugate posteriors.
//
// For b = sum_k theta_k phi_k the Girsanov log-likelihood relative to
// Wiener measure is theta' mu - theta' Sigma theta / 2 with
//   mu_k       = int_0^T phi_k(X_t) dX_t        (left-point Ito sum)
//   Sigma_{jk} = int_0^T phi_j(X_t) phi_k(X_t) dt (left-point Riemann sum).
// Both are assembled from the path's trigonometric moment sums
//   C_m = sum_i cos(2 pi m X_i) w_i,  S_m = sum_i sin(2 pi m X_i) w_i
// via product-to-sum identities, which reproduces the direct per-entry sums
// exactly (up to roundoff) at O(N K) instead of O(N K^2) cost.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "driftlab/basis.hpp"
#include "driftlab/prior.hpp"
#include "driftlab/sde.hpp"

namespace driftlab {

// Default truncation level for inference at horizon T: the bias-variance
// frontier at rate T^{-b/(1+2b)} needs K of order T^{1/(1+2b)}; factor 4 is
// safety margin, capped so the dense linear algebra stays tractable.
inline int default_inference_truncation(double T, double alpha_min,
                                        double factor = 4.0, int cap = 2000) {
    const double k = factor * std::pow(T, 1.0 / (1.0 + 2.0 * alpha_min));
    return std::max(1, std::min(cap, static_cast<int>(std::ceil(k))));
}

struct SuffStats {
    Eigen::VectorXd mu;    // length K
    Eigen::MatrixXd sigma; // K x K, symmetric positive semidefinite
    double T = 0.0;
    int K = 0;
    double dt = 0.0;

    // Restriction to the leading K' coefficients (exact: the quadratic form
    // is coordinate-wise).
    SuffStats head(int k_new) const {
        if (k_new < 1 || k_new > K)
            throw std::invalid_argument("SuffStats::head: bad truncation");
        SuffStats s;
        s.mu = mu.head(k_new);
        s.sigma = sigma.topLeftCorner(k_new, k_new);
        s.T = T;
        s.K = k_new;
        s.dt = dt;
        return s;
    }
};

namespace detail {

// Accumulates the trigonometric moment sums of a path.  Modes advance in 32
// register-resident rotation lanes; whole blocks may run past the live mode
// range into padding, which keeps the hot loops branch-free and vectorized.
class SuffAccumulator {
public:
    static constexpr int stride = 32;

    SuffAccumulator(int K, double dt) : K_(K), dt_(dt) {
        if (K < 1) throw std::domain_error("sufficient_stats: K must be >= 1");
        M_ = (K + 1) / 2;
        M2_ = 2 * M_;
        c_dt_.assign(static_cast<std::size_t>(M2_) + 2 * stride, 0.0);
        s_dt_.assign(static_cast<std::size_t>(M2_) + 2 * stride, 0.0);
        c_dx_.assign(static_cast<std::size_t>(M_) + 2 * stride, 0.0);
        s_dx_.assign(static_cast<std::size_t>(M_) + 2 * stride, 0.0);
    }

    void add(double x, double dx) {
        const double a = two_pi * frac(x);
        const double c1 = std::cos(a);
        const double s1 = std::sin(a);
        double* __restrict cdt = c_dt_.data();
        double* __restrict sdt = s_dt_.data();
        double* __restrict cdx = c_dx_.data();
        double* __restrict sdx = s_dx_.data();
        double ring_c[stride], ring_s[stride];
        double cm = c1, sm = s1;
        ring_c[0] = c1;
        ring_s[0] = s1;
        for (int j = 1; j < stride; ++j) {
            const double cn = cm * c1 - sm * s1;
            sm = sm * c1 + cm * s1;
            cm = cn;
            ring_c[j] = cm;
            ring_s[j] = sm;
        }
        for (int j = 0; j < stride; ++j) {
            cdt[1 + j] += ring_c[j];
            sdt[1 + j] += ring_s[j];
        }
        for (int j = 0; j < stride; ++j) {
            cdx[1 + j] += ring_c[j] * dx;
            sdx[1 + j] += ring_s[j] * dx;
        }
        if (M2_ > stride) {
            // rotation by `stride` steps via five angle doublings
            double c = c1, s = s1;
            for (int d = 0; d < 5; ++d) {
                const double cn = c * c - s * s;
                s = 2.0 * c * s;
                c = cn;
            }
            int m0 = stride + 1;
            for (; m0 <= M_; m0 += stride) {
                for (int j = 0; j < stride; ++j) {
                    const double cn = ring_c[j] * c - ring_s[j] * s;
                    const double sn = ring_s[j] * c + ring_c[j] * s;
                    ring_c[j] = cn;
                    ring_s[j] = sn;
                    cdt[m0 + j] += cn;
                    sdt[m0 + j] += sn;
                    cdx[m0 + j] += cn * dx;
                    sdx[m0 + j] += sn * dx;
                }
            }
            for (; m0 <= M2_; m0 += stride) {
                for (int j = 0; j < stride; ++j) {
                    const double cn = ring_c[j] * c - ring_s[j] * s;
                    const double sn = ring_s[j] * c + ring_c[j] * s;
                    ring_c[j] = cn;
                    ring_s[j] = sn;
                    cdt[m0 + j] += cn;
                    sdt[m0 + j] += sn;
                }
            }
        }
        ++n_;
    }

    SuffStats finalize() const {
        SuffStats st;
        st.K = K_;
        st.dt = dt_;
        st.T = static_cast<double>(n_) * dt_;
        st.mu.resize(K_);
        for (int j = 1; j <= K_; ++j) {
            const int p = (j + 1) / 2;
            st.mu(j - 1) = (j % 2 == 1) ? sqrt2 * s_dx_[p] : sqrt2 * c_dx_[p];
        }
        st.sigma.resize(K_, K_);
        auto c_at = [this](int m) {
            return m == 0 ? st_total() : dt_ * c_dt_[m];
        };
        auto s_at = [this](int m) { return m == 0 ? 0.0 : dt_ * s_dt_[m]; };
        for (int j = 1; j <= K_; ++j) {
            const bool j_sin = (j % 2 == 1);
            const int p = (j + 1) / 2;
            for (int k = j; k <= K_; ++k) {
                const bool k_sin = (k % 2 == 1);
                const int q = (k + 1) / 2;
                const int diff = p >= q ? p - q : q - p;
                double v;
                if (j_sin && k_sin) {
                    v = c_at(diff) - c_at(p + q);
                } else if (!j_sin && !k_sin) {
                    v = c_at(diff) + c_at(p + q);
                } else {
                    // one sine (mode a), one cosine (mode b)
                    const int a = j_sin ? p : q;
                    const int b = j_sin ? q : p;
                    const double sgn = a > b ? 1.0 : (a < b ? -1.0 : 0.0);
                    v = s_at(a + b) + sgn * s_at(diff);
                }
                st.sigma(j - 1, k - 1) = v;
                st.sigma(k - 1, j - 1) = v;
            }
        }
        return st;
    }

private:
    double st_total() const { return static_cast<double>(n_) * dt_; }

    int K_, M_, M2_;
    double dt_;
    std::size_t n_ = 0;
    std::vector<double> c_dt_, s_dt_, c_dx_, s_dx_;
};

} // namespace detail

inline SuffStats sufficient_stats(const PathRecord& path, int K) {
    detail::SuffAccumulator acc(K, path.dt);
    const std::size_t n = path.steps();
    for (std::size_t i = 0; i < n; ++i)
        acc.add(path.x[i], path.x[i + 1] - path.x[i]);
    return acc.finalize();
}

// Fused simulate-and-accumulate; avoids materializing long paths.  Produces
// the same statistics as simulate_path + sufficient_stats for the same seed
// (up to the roundoff of recomputing increments from stored states).
inline SuffStats sufficient_stats_streaming(const DriftSpec& b, double T, double dt,
                                            std::uint64_t seed, int K) {
    detail::SuffAccumulator acc(K, dt);
    detail::euler_walk(b, T, dt, seed,
                       [&acc](std::size_t, double x, double dx) { acc.add(x, dx); });
    return acc.finalize();
}

// log p_theta(X^T) relative to Wiener measure: theta' mu - theta' Sigma theta / 2.
inline double log_likelihood(const DriftSpec& theta, const SuffStats& stats) {
    if (static_cast<int>(theta.coeffs.size()) > stats.K)
        throw std::invalid_argument("log_likelihood: theta longer than stats truncation");
    Eigen::VectorXd t = Eigen::VectorXd::Zero(stats.K);
    for (std::size_t i = 0; i < theta.coeffs.size(); ++i)
        t(static_cast<Eigen::Index>(i)) = theta.coeffs[i];
    return t.dot(stats.mu) - 0.5 * t.dot(stats.sigma * t);
}

struct HyperPoint {
    double alpha = 1.0;
    double L = 1.0;
};

// Gaussian posterior of the drift coefficients for fixed hyperparameters.
// The precision P = diag(1/(L^2 lambda_k)) + Sigma is kept in Cholesky form;
// covariance blocks are materialized on demand.
class PosteriorGaussian {
public:
    PosteriorGaussian(Eigen::VectorXd mean, Eigen::LLT<Eigen::MatrixXd> llt,
                      double log_marginal, HyperPoint hyper)
        : mean_(std::move(mean)), llt_(std::move(llt)),
          log_marginal_(log_marginal), hyper_(hyper) {}

    const Eigen::VectorXd& mean() const { return mean_; }
    double log_marginal() const { return log_marginal_; }
    const HyperPoint& hyper() const { return hyper_; }
    int dim() const { return static_cast<int>(mean_.size()); }

    Eigen::MatrixXd covariance() const {
        return llt_.solve(Eigen::MatrixXd::Identity(dim(), dim()));
    }

    Eigen::VectorXd cov_diag() const { return covariance().diagonal(); }

    // One posterior draw: mean + U^{-1} z with P = U'U.
    Eigen::VectorXd sample(Rng& rng) const {
        Eigen::VectorXd z(dim());
        for (int i = 0; i < dim(); ++i) z(i) = rng.normal();
        return mean_ + llt_.matrixU().solve(z);
    }

    DriftSpec mean_drift() const {
        DriftSpec d;
        d.coeffs.assign(mean_.data(), mean_.data() + mean_.size());
        return d;
    }

private:
    Eigen::VectorXd mean_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_marginal_;
    HyperPoint hyper_;
};

// Conjugate update for the series prior with fixed (alpha, L):
//   prior precision D = diag(1/(L^2 lambda_k)),  P = D + Sigma,
//   mean = P^{-1} mu,  cov = P^{-1},
//   log marginal = mu' P^{-1} mu / 2 - log det(I + L^2 A^{1/2} Sigma A^{1/2}) / 2
// where the determinant is evaluated as log det P + sum_k log(L^2 lambda_k).
inline PosteriorGaussian posterior_fixed(const SuffStats& stats, double alpha,
                                         double L) {
    if (!(L > 0.0)) throw std::domain_error("posterior_fixed: L must be > 0");
    if (!(alpha > 0.0)) throw std::domain_error("posterior_fixed: alpha must be > 0");
    const int K = stats.K;
    Eigen::MatrixXd P = stats.sigma;
    double sum_log_prior_var = 0.0;
    for (int k = 1; k <= K; ++k) {
        // lambda_k = k^{-1-2 alpha} (simplified eigenvalue convention)
        const double log_lambda = -(1.0 + 2.0 * alpha) * std::log(static_cast<double>(k));
        const double log_prior_var = 2.0 * std::log(L) + log_lambda;
        sum_log_prior_var += log_prior_var;
        P(k - 1, k - 1) += std::exp(-log_prior_var);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("posterior_fixed: Cholesky factorization failed");
    Eigen::VectorXd mean = llt.solve(stats.mu);
    double log_det_P = 0.0;
    for (int i = 0; i < K; ++i) log_det_P += 2.0 * std::log(llt.matrixLLT()(i, i));
    const double log_marginal =
        0.5 * stats.mu.dot(mean) - 0.5 * (log_det_P + sum_log_prior_var);
    return PosteriorGaussian(std::move(mean), std::move(llt), log_marginal,
                             HyperPoint{alpha, L});
}

namespace detail {

inline double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v)
        if (x > m) m = x;
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

} // namespace detail

// Mixture posterior over a hyperparameter grid.  Components are rebuilt from
// the shared sufficient statistics on demand, so only the O(K x grid)
// summaries are held in memory.
class HierPosterior {
public:
    enum class Over { scale, regularity };

    HierPosterior(Over over, std::shared_ptr<const SuffStats> stats,
                  std::vector<HyperPoint> grid, std::vector<double> log_weights,
                  std::vector<double> log_marginals, Eigen::MatrixXd means)
        : over_(over), stats_(std::move(stats)), grid_(std::move(grid)),
          log_weights_(std::move(log_weights)),
          log_marginals_(std::move(log_marginals)), means_(std::move(means)) {}

    Over over() const { return over_; }
    std::size_t size() const { return grid_.size(); }
    const std::vector<HyperPoint>& grid() const { return grid_; }
    const std::vector<double>& log_weights() const { return log_weights_; }
    const std::vector<double>& log_marginals() const { return log_marginals_; }
    const SuffStats& stats() const { return *stats_; }
    double weight(std::size_t i) const { return std::exp(log_weights_[i]); }

    PosteriorGaussian component(std::size_t i) const {
        return posterior_fixed(*stats_, grid_[i].alpha, grid_[i].L);
    }

    Eigen::VectorXd component_mean(std::size_t i) const { return means_.col(static_cast<Eigen::Index>(i)); }

    Eigen::VectorXd mixture_mean() const {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(means_.rows());
        for (std::size_t i = 0; i < grid_.size(); ++i)
            m += weight(i) * means_.col(static_cast<Eigen::Index>(i));
        return m;
    }

    DriftSpec mixture_mean_drift() const {
        Eigen::VectorXd m = mixture_mean();
        DriftSpec d;
        d.coeffs.assign(m.data(), m.data() + m.size());
        return d;
    }

    double weighted_mean_alpha() const {
        double a = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) a += weight(i) * grid_[i].alpha;
        return a;
    }

    double weighted_mean_scale() const {
        double l = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) l += weight(i) * grid_[i].L;
        return l;
    }

    std::size_t argmax_marginal() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < grid_.size(); ++i)
            if (log_marginals_[i] > log_marginals_[best]) best = i;
        return best;
    }

private:
    Over over_;
    std::shared_ptr<const SuffStats> stats_;
    std::vector<HyperPoint> grid_;
    std::vector<double> log_weights_;
    std::vector<double> log_marginals_;
    Eigen::MatrixXd means_; // K x grid
};

namespace detail {

inline HierPosterior build_mixture(HierPosterior::Over over,
                                   std::shared_ptr<const SuffStats> stats,
                                   std::vector<HyperPoint> grid,
                                   std::vector<double> log_prior_density) {
    const std::size_t g = grid.size();
    std::vector<double> log_marg(g);
    std::vector<double> log_raw(g);
    Eigen::MatrixXd means(stats->K, static_cast<Eigen::Index>(g));
    for (std::size_t i = 0; i < g; ++i) {
        PosteriorGaussian post = posterior_fixed(*stats, grid[i].alpha, grid[i].L);
        log_marg[i] = post.log_marginal();
        log_raw[i] = log_prior_density[i] + post.log_marginal();
        means.col(static_cast<Eigen::Index>(i)) = post.mean();
    }
    const double lse = log_sum_exp(log_raw);
    if (!std::isfinite(lse)) {
        double max_prior = -std::numeric_limits<double>::infinity();
        double max_marg = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g; ++i) {
            max_prior = std::max(max_prior, log_prior_density[i]);
            max_marg = std::max(max_marg, log_marg[i]);
        }
        throw std::runtime_error(
            "mixture posterior: all grid weights underflow (max log prior density " +
            std::to_string(max_prior) + ", max log marginal " + std::to_string(max_marg) +
            ")");
    }
    std::vector<double> log_w(g);
    for (std::size_t i = 0; i < g; ++i) log_w[i] = log_raw[i] - lse;
    return HierPosterior(over, std::move(stats), std::move(grid), std::move(log_w),
                         std::move(log_marg), std::move(means));
}

} // namespace detail

// Mixture over the scale L with the Weibull hyperprior of horizon T: a
// geometric grid across the prior quantile range 0.001..0.999; weights are
// proportional to prior density times marginal likelihood.
inline HierPosterior posterior_scale_mixture(std::shared_ptr<const SuffStats> stats,
                                             double alpha, double T, int grid_size) {
    if (grid_size < 8)
        throw std::domain_error("posterior_scale_mixture: grid_size must be >= 8");
    if (!(T > 0.0)) throw std::domain_error("posterior_scale_mixture: T must be > 0");
    const double lo = scale_prior_quantile(0.001, alpha, T);
    const double hi = scale_prior_quantile(0.999, alpha, T);
    std::vector<HyperPoint> grid(static_cast<std::size_t>(grid_size));
    std::vector<double> log_prior(grid.size());
    for (int i = 0; i < grid_size; ++i) {
        const double f = static_cast<double>(i) / (grid_size - 1);
        const double L = lo * std::pow(hi / lo, f);
        grid[static_cast<std::size_t>(i)] = HyperPoint{alpha, L};
        log_prior[static_cast<std::size_t>(i)] = log_scale_prior_density(L, alpha, T);
    }
    return detail::build_mixture(HierPosterior::Over::scale, std::move(stats),
                                 std::move(grid), std::move(log_prior));
}

inline HierPosterior posterior_scale_mixture(const SuffStats& stats, double alpha,
                                             double T, int grid_size) {
    return posterior_scale_mixture(std::make_shared<SuffStats>(stats), alpha, T,
                                   grid_size);
}

// Mixture over the regularity alpha with the truncated hyperprior of
// horizon T: a uniform grid on [0.01, log T]; L fixed to 1.
inline HierPosterior posterior_alpha_mixture(std::shared_ptr<const SuffStats> stats,
                                             double T, int grid_size,
                                             double grid_min = 0.01) {
    if (grid_size < 8)
        throw std::domain_error("posterior_alpha_mixture: grid_size must be >= 8");
    if (!(T > std::exp(1.0)))
        throw std::domain_error("posterior_alpha_mixture: requires T > e");
    const double alpha_max = std::log(T);
    const double log_ct = std::log(alpha_normalizer(T, alpha_max));
    std::vector<HyperPoint> grid(static_cast<std::size_t>(grid_size));
    std::vector<double> log_prior(grid.size());
    for (int i = 0; i < grid_size; ++i) {
        const double a = grid_min + (alpha_max - grid_min) * static_cast<double>(i) /
                                        (grid_size - 1);
        grid[static_cast<std::size_t>(i)] = HyperPoint{a, 1.0};
        log_prior[static_cast<std::size_t>(i)] = log_alpha_density_unnorm(a, T) - log_ct;
    }
    return detail::build_mixture(HierPosterior::Over::regularity, std::move(stats),
                                 std::move(grid), std::move(log_prior));
}

inline HierPosterior posterior_alpha_mixture(const SuffStats& stats, double T,
                                             int grid_size, double grid_min = 0.01) {
    return posterior_alpha_mixture(std::make_shared<SuffStats>(stats), T, grid_size,
                                   grid_min);
}

struct BallMassEstimate {
    double estimate = 0.0;
    double std_err = 0.0;
    long n = 0;
};

namespace detail {

inline double norm_against(const Eigen::VectorXd& coeffs, const DriftSpec& b0) {
    double s = 0.0;
    const std::size_t k = static_cast<std::size_t>(coeffs.size());
    const std::size_t k0 = b0.coeffs.size();
    for (std::size_t i = 0; i < std::max(k, k0); ++i) {
        const double a = i < k ? coeffs(static_cast<Eigen::Index>(i)) : 0.0;
        const double c = i < k0 ? b0.coeffs[i] : 0.0;
        s += (a - c) * (a - c);
    }
    return std::sqrt(s);
}

inline BallMassEstimate bernoulli_estimate(long hits, long n) {
    BallMassEstimate out;
    out.n = n;
    out.estimate = static_cast<double>(hits) / static_cast<double>(n);
    out.std_err = std::sqrt(std::max(out.estimate * (1.0 - out.estimate), 1.0 / n) /
                            static_cast<double>(n));
    return out;
}

} // namespace detail

// Monte Carlo estimate of the posterior mass outside the L2 ball of the
// given radius around b0.
inline BallMassEstimate posterior_ball_mass(const PosteriorGaussian& post,
                                            const DriftSpec& b0, double radius,
                                            long n, Rng& rng) {
    if (n < 100) throw std::domain_error("posterior_ball_mass: n must be >= 100");
    long hits = 0;
    for (long i = 0; i < n; ++i)
        if (detail::norm_against(post.sample(rng), b0) >= radius) ++hits;
    return detail::bernoulli_estimate(hits, n);
}

inline BallMassEstimate posterior_ball_mass(const HierPosterior& post,
                                            const DriftSpec& b0, double radius,
                                            long n, Rng& rng) {
    if (n < 100) throw std::domain_error("posterior_ball_mass: n must be >= 100");
    // allocate draws to components, then factorize each used component once
    std::vector<double> cum(post.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < post.size(); ++i) {
        acc += post.weight(i);
        cum[i] = acc;
    }
    std::vector<long> counts(post.size(), 0);
    for (long i = 0; i < n; ++i) {
        const double u = rng.uniform01() * acc;
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cum.begin());
        if (idx >= post.size()) idx = post.size() - 1;
        ++counts[idx];
    }
    long hits = 0;
    for (std::size_t i = 0; i < post.size(); ++i) {
        if (counts[i] == 0) continue;
        const PosteriorGaussian comp = post.component(i);
        for (long j = 0; j < counts[i]; ++j)
            if (detail::norm_against(comp.sample(rng), b0) >= radius) ++hits;
    }
    return detail::bernoulli_estimate(hits, n);
}

// --- JSON summaries ---------------------------------------------------------

inline void to_json(nlohmann::json& j, const SuffStats& s) {
    std::vector<std::vector<double>> sig(static_cast<std::size_t>(s.K));
    for (int r = 0; r < s.K; ++r)
        sig[static_cast<std::size_t>(r)] =
            std::vector<double>(s.sigma.row(r).begin(), s.sigma.row(r).end());
    j = nlohmann::json{{"T", s.T},
                       {"K", s.K},
                       {"dt", s.dt},
                       {"mu", std::vector<double>(s.mu.begin(), s.mu.end())},
                       {"sigma", sig}};
}

inline nlohmann::json posterior_summary_json(const PosteriorGaussian& post) {
    const Eigen::VectorXd d = post.cov_diag();
    return nlohmann::json{
        {"mean", std::vector<double>(post.mean().begin(), post.mean().end())},
        {"cov_diag", std::vector<double>(d.begin(), d.end())},
        {"log_marginal", post.log_marginal()},
        {"hyper",
         {{"alpha", post.hyper().alpha}, {"L", post.hyper().L}, {"K", post.dim()}}}};
}

inline nlohmann::json posterior_summary_json(const HierPosterior& post) {
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t i = 0; i < post.size(); ++i) {
        comps.push_back({{"alpha", post.grid()[i].alpha},
                         {"L", post.grid()[i].L},
                         {"log_weight", post.log_weights()[i]},
                         {"log_marginal", post.log_marginals()[i]}});
    }
    const Eigen::VectorXd m = post.mixture_mean();
    return nlohmann::json{
        {"over", post.over() == HierPosterior::Over::scale ? "scale" : "regularity"},
        {"mixture_mean", std::vector<double>(m.begin(), m.end())},
        {"weighted_mean_alpha", post.weighted_mean_alpha()},
        {"weighted_mean_scale", post.weighted_mean_scale()},
        {"components", comps}};
}

} // namespace driftlab
