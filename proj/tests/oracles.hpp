#pragma once

// Independent reference computations used as test oracles.

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

inline double simpson_adaptive_step(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb,
                                    double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_adaptive_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_adaptive_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int depth = 50)
{
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_adaptive_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Li2(x) by plain summation of x^k/k^2 in long double (x < 1).
inline double dilog_direct(double x, int terms = 200000)
{
    long double s = 0.0L;
    long double p = 1.0L;
    for (int k = 1; k <= terms; ++k) {
        p *= x;
        s += p / (static_cast<long double>(k) * k);
        if (p < 1e-30L) {
            break;
        }
    }
    return static_cast<double>(s);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace oracle
