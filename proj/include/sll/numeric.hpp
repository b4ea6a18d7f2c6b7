#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sll {

// Solver gave up; carries the diagnostics the caller would otherwise lose.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, std::vector<double> residual_history = {})
        : std::runtime_error(what), residuals(std::move(residual_history)) {}
    std::vector<double> residuals;
};

// Bisection for the boundary of {p : predicate(p)} on [lo, hi], assuming the
// predicate holds at lo and eventually fails towards hi. Returns the boundary
// to within tol.
inline double bisect_boundary(const std::function<bool(double)>& predicate, double lo, double hi,
                              double tol = 1e-12, int max_iter = 200) {
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (predicate(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Root of a monotone function f on [lo, hi] with f(lo), f(hi) of opposite
// signs. Throws if the bracket is invalid.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-12, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Binomial pmf over k = 0..n at success probability x. Direct products for
// small n, log-space otherwise.
inline void binomial_pmf(int n, double x, std::span<double> out) {
    if (x <= 0.0) {
        for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = 0.0;
        out[0] = 1.0;
        return;
    }
    if (x >= 1.0) {
        for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = 0.0;
        out[static_cast<std::size_t>(n)] = 1.0;
        return;
    }
    if (n <= 30) {
        // Pascal recurrence on the coefficient, direct powers.
        double coef = 1.0;
        for (int k = 0; k <= n; ++k) {
            out[static_cast<std::size_t>(k)] =
                coef * std::pow(x, k) * std::pow(1.0 - x, n - k);
            coef = coef * static_cast<double>(n - k) / static_cast<double>(k + 1);
        }
    } else {
        double lx = std::log(x), l1x = std::log1p(-x);
        for (int k = 0; k <= n; ++k) {
            double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            out[static_cast<std::size_t>(k)] = std::exp(lc + k * lx + (n - k) * l1x);
        }
    }
}

// Mean and standard error of a correlated series via batch means.
struct BatchStats {
    double mean = 0.0;
    double se = 0.0;
};

inline BatchStats batch_means(std::span<const double> batch_values) {
    BatchStats s;
    const std::size_t b = batch_values.size();
    if (b == 0) return s;
    double sum = 0.0;
    for (double v : batch_values) sum += v;
    s.mean = sum / static_cast<double>(b);
    if (b > 1) {
        double ss = 0.0;
        for (double v : batch_values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / (static_cast<double>(b) * (static_cast<double>(b) - 1.0)));
    }
    return s;
}

}  // namespace sll
