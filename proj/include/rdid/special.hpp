#pragma once

#include "errors.hpp"
#include "real.hpp"

#include <cmath>

namespace rdid {

namespace detail {

// Li2(x) = sum_{k>=1} x^k / k^2, for 0 <= x <= 1/2.
template <typename T>
T dilog_series(const T& x)
{
    const T eps = unit_roundoff<T>();
    T sum(0);
    T power = x;
    for (long k = 1; k < 100000; ++k) {
        const T term = power / T(k * k);
        sum += term;
        if (term <= eps * sum) {
            break;
        }
        power *= x;
    }
    return sum;
}

// Li2(x) given x and 1 - x separately, so that arguments close to 1 coming
// from exp(-small) keep their accuracy.
template <typename T>
T dilog_split(const T& x, const T& one_minus_x)
{
    using std::log;
    if (x <= T(1) / T(2)) {
        return dilog_series(x);
    }
    const T base = pi<T>() * pi<T>() / T(6);
    if (one_minus_x == T(0)) {
        return base;
    }
    return base - log(x) * log(one_minus_x) - dilog_series(one_minus_x);
}

} // namespace detail

/// Dilogarithm Li2(x) on [0, 1].
template <typename T>
T dilog(const T& x)
{
    if (!(x >= T(0) && x <= T(1))) {
        throw DomainError("dilog: argument outside [0, 1]");
    }
    return detail::dilog_split(x, T(T(1) - x));
}

/// Li2(exp(-a)) for a >= 0, with 1 - exp(-a) formed without cancellation.
template <typename T>
T dilog_exp(const T& a)
{
    using std::exp;
    if (a < T(0)) {
        throw DomainError("dilog_exp: negative exponent");
    }
    if (is_infinite(a)) {
        return T(0);
    }
    return detail::dilog_split(T(exp(-a)), T(-expm1_(T(-a))));
}

} // namespace rdid
