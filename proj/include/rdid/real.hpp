#pragma once

// Working-precision scalar types. Precision is chosen once per run and the
// whole computation is instantiated for the matching scalar type.

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace rdid {

namespace mp = boost::multiprecision;

using Real16 = double;
using Real32 = mp::number<mp::mpfr_float_backend<32>, mp::et_off>;
using Real100 = mp::number<mp::mpfr_float_backend<100>, mp::et_off>;

template <typename T>
inline constexpr bool is_supported_real_v =
    std::is_same_v<T, Real16> || std::is_same_v<T, Real32> ||
    std::is_same_v<T, Real100>;

/// Nominal decimal digits D of a working-precision type.
template <typename T>
constexpr int decimal_digits()
{
    if constexpr (std::is_same_v<T, double>) {
        return 16;
    } else {
        return std::numeric_limits<T>::digits10;
    }
}

/// 10^k in working precision.
template <typename T>
T pow10(int k)
{
    using std::pow;
    return pow(T(10), T(k));
}

/// Threshold 10^(-D+4) used for pivots, ranks and node collisions.
template <typename T>
T pivot_tolerance()
{
    return pow10<T>(-decimal_digits<T>() + 4);
}

template <typename T>
T unit_roundoff()
{
    return std::numeric_limits<T>::epsilon();
}

template <typename T>
T pi()
{
    return boost::math::constants::pi<T>();
}

/// Parses a decimal literal at full working precision, so that "0.1" is the
/// correctly rounded value of 1/10 at every precision.
template <typename T>
T from_decimal(std::string_view text)
{
    if constexpr (std::is_same_v<T, double>) {
        return std::stod(std::string(text));
    } else {
        return T(std::string(text));
    }
}

template <typename T>
double to_double(const T& x)
{
    if constexpr (std::is_same_v<T, double>) {
        return x;
    } else {
        return x.template convert_to<double>();
    }
}

template <typename T>
bool is_finite(const T& x)
{
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(x);
}

template <typename T>
bool is_infinite(const T& x)
{
    using std::isinf;
    using boost::multiprecision::isinf;
    return isinf(x);
}

template <typename T>
T expm1_(const T& x)
{
    if constexpr (std::is_same_v<T, double>) {
        return std::expm1(x);
    } else {
        return boost::math::expm1(x);
    }
}

template <typename T>
T log1p_(const T& x)
{
    if constexpr (std::is_same_v<T, double>) {
        return std::log1p(x);
    } else {
        return boost::math::log1p(x);
    }
}

/// Formats a value for CSV output: '.' decimal point, scientific notation for
/// 0 < |x| < 1e-4 (and for very large magnitudes), plain notation otherwise.
template <typename T>
std::string format_real(const T& x, int significant = 17)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(significant);
    os << x;
    return os.str();
}

/// Calls fn(std::type_identity<T>{}) with T the scalar type for `digits`.
template <typename Fn>
decltype(auto) dispatch_precision(int digits, Fn&& fn)
{
    switch (digits) {
    case 16:
        return std::forward<Fn>(fn)(std::type_identity<Real16>{});
    case 32:
        return std::forward<Fn>(fn)(std::type_identity<Real32>{});
    case 100:
        return std::forward<Fn>(fn)(std::type_identity<Real100>{});
    default:
        throw std::invalid_argument("precision must be one of 16, 32, 100; got " +
                                    std::to_string(digits));
    }
}

} // namespace rdid
