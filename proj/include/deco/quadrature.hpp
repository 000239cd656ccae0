#ifndef DECO_QUADRATURE_HPP
#define DECO_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace deco {

struct quad_options {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    std::size_t max_evals = 1'000'000;
};

struct quad_result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evals = 0;
};

/// One Gauss-Kronrod 7-15 panel on [a,b].
quad_result gk15(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Kronrod on [a,b]. `breakpoints` seeds the initial
/// subdivision (interior points only; values outside (a,b) are ignored) —
/// used for density kinks and for the zeros of oscillatory factors, so each
/// starting panel is smooth. Worst-panel bisection afterwards, compensated
/// accumulation of panel sums. Throws quadrature_error on budget exhaustion.
quad_result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                               const quad_options& opt = {},
                               std::vector<double> breakpoints = {});

namespace detail {

/// sin(x)/x, stable at 0.
inline double sinc(double x) {
    double ax = x < 0 ? -x : x;
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// Neumaier compensated accumulator.
struct kahan_sum {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace detail
} // namespace deco

#endif
