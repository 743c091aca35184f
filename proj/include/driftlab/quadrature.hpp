#pragma once
// One-dimensional quadrature helpers: adaptive Simpson with an absolute
// error target, and cumulative composite Simpson on a uniform grid.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace driftlab::quad {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance.
// The interval is pre-split into `panels` equal pieces before adapting, so
// sharply localized integrands are not missed by the first few samples.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol,
                        int panels = 16, int max_depth = 40) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: abs_tol must be > 0");
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    if (panels < 1) panels = 1;
    const double h = (b - a) / panels;
    const double panel_tol = abs_tol / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == panels) ? b : a + (i + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), fm = f(xm), f1 = f(x1);
        const double whole = ((x1 - x0) / 6.0) * (f0 + 4.0 * fm + f1);
        total += detail::adaptive_simpson_rec(f, x0, x1, f0, fm, f1, whole,
                                              panel_tol, max_depth);
    }
    return sign * total;
}

// Cumulative integral of f from `a` on a uniform grid with `n` panels:
// returns F of size n+1 with F[i] = integral from a to a + i*h, h=(b-a)/n.
// Each panel uses Simpson's rule (midpoint evaluation), so the edge values
// carry the usual O(h^4) composite accuracy.
template <typename F>
std::vector<double> cumulative_simpson(const F& f, double a, double b,
                                       std::size_t n) {
    if (n == 0) throw std::invalid_argument("cumulative_simpson: n must be >= 1");
    std::vector<double> out(n + 1, 0.0);
    const double h = (b - a) / static_cast<double>(n);
    double acc = 0.0;
    double f_left = f(a);
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = a + static_cast<double>(i) * h;
        const double x1 = a + static_cast<double>(i + 1) * h;
        const double fm = f(0.5 * (x0 + x1));
        const double f_right = f(x1);
        acc += (h / 6.0) * (f_left + 4.0 * fm + f_right);
        out[i + 1] = acc;
        f_left = f_right;
    }
    return out;
}

} // namespace driftlab::quad
