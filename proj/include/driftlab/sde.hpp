#pragma once
// Euler-Maruyama simulation of the periodic diffusion dX = b(X) dt + dB,
// periodic local time, the invariant density, the scale function, and the
// empirical L2 geometry along a path.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftlab/basis.hpp"
#include "driftlab/quadrature.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

struct SimulationError : std::runtime_error {
    std::size_t step;
    explicit SimulationError(std::size_t step_)
        : std::runtime_error("simulation produced a non-finite state at step " +
                             std::to_string(step_)),
          step(step_) {}
};

// A discretized sample path on a uniform grid, X_0 = 0.
struct PathRecord {
    double T = 0.0;
    double dt = 0.0;
    std::vector<double> x; // N+1 states
    DriftSpec drift;
    std::uint64_t seed = 0;

    std::size_t steps() const { return x.empty() ? 0 : x.size() - 1; }

    void validate() const {
        if (x.empty()) throw std::invalid_argument("PathRecord: empty state vector");
        if (x.front() != 0.0)
            throw std::invalid_argument("PathRecord: X_0 must be 0");
        const double n_dt = static_cast<double>(steps()) * dt;
        if (std::abs(n_dt - T) > 1e-12 * std::max(1.0, std::abs(T)))
            throw std::invalid_argument("PathRecord: N*dt does not match T");
        for (double v : x)
            if (!std::isfinite(v))
                throw std::invalid_argument("PathRecord: non-finite state value");
    }
};

namespace detail {

inline std::size_t steps_for(double T, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("simulate: dt must be > 0");
    if (!(dt <= T)) throw std::domain_error("simulate: requires dt <= T");
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    if (n == 0 || std::abs(static_cast<double>(n) * dt - T) >
                      1e-9 * std::max(1.0, std::abs(T)))
        throw std::domain_error("simulate: T must be an integer multiple of dt");
    return n;
}

// Shared stepping core.  Calls visit(i, x_i, dx_i) with the left point and
// the increment of every step, in order; all consumers of a path see the
// identical arithmetic for a given seed.
template <typename Visitor>
double euler_walk(const DriftSpec& b, double T, double dt, std::uint64_t seed,
                  Visitor&& visit) {
    if (!b.all_finite())
        throw std::invalid_argument("simulate: drift coefficients must be finite");
    const std::size_t n = steps_for(T, dt);
    const double sqrt_dt = std::sqrt(dt);
    Rng rng(seed);
    double x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = eval_drift(b, x) * dt + sqrt_dt * rng.normal();
        visit(i, x, dx);
        x += dx;
        if (!std::isfinite(x)) throw SimulationError(i);
    }
    return x;
}

} // namespace detail

// Euler-Maruyama: X_{i+1} = X_i + b(X_i) dt + sqrt(dt) xi_i.  Deterministic
// given (drift, T, dt, seed).
inline PathRecord simulate_path(const DriftSpec& b, double T, double dt,
                                std::uint64_t seed) {
    PathRecord p;
    p.T = T;
    p.dt = dt;
    p.drift = b;
    p.seed = seed;
    p.x.reserve(detail::steps_for(T, dt) + 1);
    p.x.push_back(0.0);
    const double last = detail::euler_walk(
        b, T, dt, seed, [&p](std::size_t, double x, double dx) { p.x.push_back(x + dx); });
    (void)last;
    return p;
}

// Binned occupation estimate on [0,1) bin centers.  `values` are density
// values (mass per unit length); sum(values)/bins equals total_mass.
struct OccupationDensity {
    int bins = 0;
    std::vector<double> values;
    double total_mass = 0.0;

    double bin_width() const { return 1.0 / static_cast<double>(bins); }
    double center(int i) const { return (i + 0.5) / static_cast<double>(bins); }

    // Rescale so the density integrates to 1.
    OccupationDensity normalized() const {
        OccupationDensity out = *this;
        if (total_mass > 0.0) {
            for (double& v : out.values) v /= total_mass;
            out.total_mass = 1.0;
        }
        return out;
    }
};

// Histogram estimator of the periodic local time: each step deposits mass dt
// in the bin containing X_i mod 1 (left-point convention).  Returned with
// normalization T.
inline OccupationDensity periodic_local_time(const PathRecord& path, int bins) {
    if (bins < 2) throw std::domain_error("periodic_local_time: bins must be >= 2");
    OccupationDensity occ;
    occ.bins = bins;
    occ.values.assign(static_cast<std::size_t>(bins), 0.0);
    const std::size_t n = path.steps();
    for (std::size_t i = 0; i < n; ++i) {
        auto bi = static_cast<std::size_t>(detail::frac(path.x[i]) * bins);
        if (bi >= static_cast<std::size_t>(bins)) bi = static_cast<std::size_t>(bins) - 1;
        occ.values[bi] += path.dt;
    }
    const double width = occ.bin_width();
    for (double& v : occ.values) v /= width;
    occ.total_mass = static_cast<double>(n) * path.dt;
    return occ;
}

// Same estimator without materializing the path.
inline OccupationDensity simulate_local_time(const DriftSpec& b, double T,
                                             double dt, std::uint64_t seed,
                                             int bins) {
    if (bins < 2) throw std::domain_error("simulate_local_time: bins must be >= 2");
    OccupationDensity occ;
    occ.bins = bins;
    occ.values.assign(static_cast<std::size_t>(bins), 0.0);
    std::size_t n = 0;
    detail::euler_walk(b, T, dt, seed, [&](std::size_t, double x, double) {
        auto bi = static_cast<std::size_t>(detail::frac(x) * bins);
        if (bi >= static_cast<std::size_t>(bins)) bi = static_cast<std::size_t>(bins) - 1;
        occ.values[bi] += dt;
        ++n;
    });
    const double width = occ.bin_width();
    for (double& v : occ.values) v /= width;
    occ.total_mass = static_cast<double>(n) * dt;
    return occ;
}

// Invariant density rho(x) proportional to exp(2 int_0^x b), evaluated at
// `grid` bin centers by cumulative quadrature of b and normalized so the
// midpoint sum integrates to exactly 1.
inline OccupationDensity invariant_density(const DriftSpec& b, int grid) {
    if (grid < 2) throw std::domain_error("invariant_density: grid must be >= 2");
    // internal resolution: an even multiple of `grid`, at least ~32k panels,
    // so the cumulative Simpson error sits far below the comparison
    // tolerances used in tests.
    const int r = 2 * std::max(1, (16384 + grid - 1) / grid);
    const std::size_t n_int = static_cast<std::size_t>(r) * static_cast<std::size_t>(grid);
    const std::vector<double> cum = quad::cumulative_simpson(
        [&b](double x) { return eval_drift(b, x); }, 0.0, 1.0, n_int);

    OccupationDensity occ;
    occ.bins = grid;
    occ.values.resize(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const std::size_t edge = static_cast<std::size_t>(i) * r + r / 2;
        occ.values[static_cast<std::size_t>(i)] = std::exp(2.0 * cum[edge]);
    }
    double z = 0.0;
    for (double v : occ.values) z += v;
    z /= static_cast<double>(grid);
    for (double& v : occ.values) v /= z;
    occ.total_mass = 1.0;
    return occ;
}

// Scale function s(x) = int_0^x exp(-2 int_0^xi b) dxi, strictly increasing.
// The outer integral is adaptive quadrature; the inner integral uses the
// exact antiderivative of the finite series.
inline double scale_function(const DriftSpec& b, double x) {
    if (x == 0.0) return 0.0;
    auto f = [&b](double xi) { return std::exp(-2.0 * drift_antiderivative(b, xi)); };
    const int panels = std::max(8, static_cast<int>(std::ceil(std::abs(x) * 4.0)));
    return quad::adaptive_simpson(f, 0.0, x, 1e-10, panels);
}

// Path average of f(X)^2: (1/T) sum_i f(X_i)^2 dt (left-point Riemann sum).
template <typename F>
double empirical_l2_distance(const PathRecord& path, F&& diff) {
    const std::size_t n = path.steps();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = diff(path.x[i]);
        acc += d * d;
    }
    return acc * path.dt / path.T;
}

// Squared empirical L2 distance between two drifts along the path:
// (1/T) int_0^T (b - b0)^2(X_t) dt.  With a shared basis the difference is
// itself a finite series.
inline double empirical_l2_distance(const PathRecord& path, const DriftSpec& b,
                                    const DriftSpec& b0) {
    detail::require_trig(b.basis, "empirical_l2_distance");
    detail::require_trig(b0.basis, "empirical_l2_distance");
    DriftSpec diff;
    diff.coeffs.resize(std::max(b.coeffs.size(), b0.coeffs.size()), 0.0);
    for (std::size_t i = 0; i < diff.coeffs.size(); ++i) {
        const double bi = i < b.coeffs.size() ? b.coeffs[i] : 0.0;
        const double ci = i < b0.coeffs.size() ? b0.coeffs[i] : 0.0;
        diff.coeffs[i] = bi - ci;
    }
    return empirical_l2_distance(path, [&diff](double x) { return eval_drift(diff, x); });
}

// Sup distance between two occupation densities on a shared grid.
inline double sup_distance(const OccupationDensity& a, const OccupationDensity& b) {
    if (a.bins != b.bins)
        throw std::invalid_argument("sup_distance: bin counts differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

} // namespace driftlab
