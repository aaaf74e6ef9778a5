#pragma once

// Small dense linear-algebra kernels, generic over the working-precision type.
// Sizes of interest are n <= 16 (exponential fitting) and n <= a few hundred
// (finite-difference operators); no attempt is made at blocking.

#include "errors.hpp"
#include "matrix.hpp"
#include "real.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace rdid {

namespace detail {

template <typename T>
T copysign_(const T& magnitude, const T& sign_of)
{
    using std::abs;
    return sign_of >= T(0) ? T(abs(magnitude)) : T(-abs(magnitude));
}

template <typename T>
T hypot_(const T& a, const T& b)
{
    using std::abs;
    using std::sqrt;
    const T aa = abs(a);
    const T bb = abs(b);
    if (aa > bb) {
        const T r = bb / aa;
        return aa * sqrt(T(1) + r * r);
    }
    if (bb != T(0)) {
        const T r = aa / bb;
        return bb * sqrt(T(1) + r * r);
    }
    return T(0);
}

} // namespace detail

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularMatrix when a pivot falls below 10^(-D+4) ||A||_inf.
template <typename T>
Vector<T> solve_linear(Matrix<T> a, Vector<T> b)
{
    using std::abs;
    using std::swap;
    const std::size_t n = a.rows();
    if (!a.square() || b.size() != n) {
        throw DimensionMismatch("solve_linear: need square A and matching b");
    }
    const T threshold = pivot_tolerance<T>() * norm_inf(a);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (abs(a(i, k)) > abs(a(p, k))) {
                p = i;
            }
        }
        if (!(abs(a(p, k)) > threshold)) {
            throw SingularMatrix("solve_linear: pivot below threshold in column " +
                                 std::to_string(k));
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) {
                swap(a(k, j), a(p, j));
            }
            swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a(i, k) / a(k, k);
            if (f == T(0)) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= f * a(k, j);
            }
            b[i] -= f * b[k];
        }
    }
    Vector<T> x(n);
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= a(i, j) * x[j];
        }
        x[i] = s / a(i, i);
    }
    return x;
}

/// Gaussian elimination in the given row/column order, without pivoting.
///
/// For totally positive matrices (e.g. confluent Vandermonde matrices with
/// positive nodes in increasing order) elimination without pivoting is
/// componentwise backward stable, which keeps exponentially graded solution
/// components accurate where partial pivoting loses them. Only exact zero or
/// non-finite pivots are rejected.
template <typename T>
Vector<T> solve_without_pivoting(Matrix<T> a, Vector<T> b)
{
    const std::size_t n = a.rows();
    if (!a.square() || b.size() != n) {
        throw DimensionMismatch("solve_without_pivoting: need square A and matching b");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == T(0) || !is_finite(a(k, k))) {
            throw SingularMatrix("solve_without_pivoting: zero pivot in column " +
                                 std::to_string(k));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a(i, k) / a(k, k);
            if (f == T(0)) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= f * a(k, j);
            }
            b[i] -= f * b[k];
        }
    }
    Vector<T> x(n);
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= a(i, j) * x[j];
        }
        x[i] = s / a(i, i);
    }
    return x;
}

/// Minimizes ||A x - b||_2 via Householder QR (m >= n, full column rank).
template <typename T>
Vector<T> least_squares(Matrix<T> a, Vector<T> b)
{
    using std::abs;
    using std::sqrt;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n || b.size() != m) {
        throw DimensionMismatch("least_squares: need m >= n and len(b) == m");
    }
    T scale(0);
    for (std::size_t j = 0; j < n; ++j) {
        T s(0);
        for (std::size_t i = 0; i < m; ++i) {
            s += a(i, j) * a(i, j);
        }
        scale = std::max(scale, T(sqrt(s)));
    }
    const T threshold = pivot_tolerance<T>() * scale;

    for (std::size_t k = 0; k < n; ++k) {
        T norm(0);
        for (std::size_t i = k; i < m; ++i) {
            norm += a(i, k) * a(i, k);
        }
        norm = sqrt(norm);
        if (!(norm > threshold)) {
            throw RankDeficient("least_squares: R(" + std::to_string(k) + "," +
                                std::to_string(k) + ") below threshold");
        }
        const T alpha = a(k, k) > T(0) ? T(-norm) : norm;
        // v = x - alpha e1, stored in column k below the diagonal
        std::vector<T> v(m - k);
        v[0] = a(k, k) - alpha;
        for (std::size_t i = k + 1; i < m; ++i) {
            v[i - k] = a(i, k);
        }
        T vnorm2(0);
        for (const auto& vi : v) {
            vnorm2 += vi * vi;
        }
        if (vnorm2 != T(0)) {
            for (std::size_t j = k; j < n; ++j) {
                T s(0);
                for (std::size_t i = k; i < m; ++i) {
                    s += v[i - k] * a(i, j);
                }
                s = T(2) * s / vnorm2;
                for (std::size_t i = k; i < m; ++i) {
                    a(i, j) -= s * v[i - k];
                }
            }
            T s(0);
            for (std::size_t i = k; i < m; ++i) {
                s += v[i - k] * b[i];
            }
            s = T(2) * s / vnorm2;
            for (std::size_t i = k; i < m; ++i) {
                b[i] -= s * v[i - k];
            }
        }
    }
    Vector<T> x(n);
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= a(i, j) * x[j];
        }
        x[i] = s / a(i, i);
    }
    return x;
}

template <typename T>
struct SvdResult {
    Matrix<T> u;    // m x n, orthonormal columns
    Vector<T> s;    // non-increasing
    Matrix<T> v;    // n x n, orthogonal
};

/// One-sided (Hestenes) Jacobi SVD of an m x n matrix with m >= n.
///
/// Columns are orthogonalized by plane rotations until every pair satisfies
/// |<a_i, a_j>| <= eps ||a_i|| ||a_j||. Singular values are the resulting
/// column norms; this gives high relative accuracy on graded matrices.
template <typename T>
SvdResult<T> svd(const Matrix<T>& a, int max_sweeps = 30)
{
    using std::abs;
    using std::sqrt;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) {
        throw DimensionMismatch("svd: need rows >= cols");
    }
    Matrix<T> w = a;
    Matrix<T> v = Matrix<T>::identity(n);
    const T tol = unit_roundoff<T>();

    bool converged = n < 2;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                T alpha(0), beta(0), gamma(0);
                for (std::size_t k = 0; k < m; ++k) {
                    alpha += w(k, i) * w(k, i);
                    beta += w(k, j) * w(k, j);
                    gamma += w(k, i) * w(k, j);
                }
                if (gamma == T(0) || abs(gamma) <= tol * sqrt(alpha) * sqrt(beta)) {
                    continue;
                }
                converged = false;
                const T zeta = (beta - alpha) / (T(2) * gamma);
                const T t = detail::copysign_(T(1), zeta) /
                            (abs(zeta) + sqrt(T(1) + zeta * zeta));
                const T c = T(1) / sqrt(T(1) + t * t);
                const T s = c * t;
                for (std::size_t k = 0; k < m; ++k) {
                    const T wi = w(k, i);
                    const T wj = w(k, j);
                    w(k, i) = c * wi - s * wj;
                    w(k, j) = s * wi + c * wj;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const T vi = v(k, i);
                    const T vj = v(k, j);
                    v(k, i) = c * vi - s * vj;
                    v(k, j) = s * vi + c * vj;
                }
            }
        }
    }
    if (!converged) {
        throw NoConvergence("svd: Jacobi sweeps exhausted");
    }

    std::vector<T> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        T s(0);
        for (std::size_t k = 0; k < m; ++k) {
            s += w(k, j) * w(k, j);
        }
        norms[j] = sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    SvdResult<T> r{Matrix<T>(m, n), Vector<T>(n), Matrix<T>(n, n)};
    const T zero_cut = norms.empty() ? T(0) : norms[order[0]] * tol * T(static_cast<long>(m));
    std::vector<bool> filled(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t j = order[c];
        r.s[c] = norms[j];
        for (std::size_t k = 0; k < n; ++k) {
            r.v(k, c) = v(k, j);
        }
        if (norms[j] > zero_cut && norms[j] != T(0)) {
            for (std::size_t k = 0; k < m; ++k) {
                r.u(k, c) = w(k, j) / norms[j];
            }
            filled[c] = true;
        }
    }
    // Complete the left basis for numerically null columns (Gram-Schmidt
    // against unit vectors).
    for (std::size_t c = 0; c < n; ++c) {
        if (filled[c]) {
            continue;
        }
        for (std::size_t e = 0; e < m; ++e) {
            Vector<T> cand(m, T(0));
            cand[e] = T(1);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t o = 0; o < n; ++o) {
                    if (!filled[o]) {
                        continue;
                    }
                    T proj(0);
                    for (std::size_t k = 0; k < m; ++k) {
                        proj += r.u(k, o) * cand[k];
                    }
                    for (std::size_t k = 0; k < m; ++k) {
                        cand[k] -= proj * r.u(k, o);
                    }
                }
            }
            T nn(0);
            for (const auto& x : cand) {
                nn += x * x;
            }
            nn = sqrt(nn);
            if (nn > T(1) / T(2)) {
                for (std::size_t k = 0; k < m; ++k) {
                    r.u(k, c) = cand[k] / nn;
                }
                filled[c] = true;
                break;
            }
        }
    }
    return r;
}

/// Complex number carried as a pair of working-precision reals.
template <typename T>
struct ComplexValue {
    T re;
    T im;

    T abs() const { return detail::hypot_(re, im); }
};

namespace detail {

// Radix-2 balancing of a general matrix; similarity transform, exact in
// binary floating point.
template <typename T>
void balance(Matrix<T>& a)
{
    using std::abs;
    const std::size_t n = a.rows();
    const T radix(2);
    const T sqrdx = radix * radix;
    bool done = false;
    for (int guard = 0; !done && guard < 1000; ++guard) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            T r(0), c(0);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    c += abs(a(j, i));
                    r += abs(a(i, j));
                }
            }
            if (c != T(0) && r != T(0)) {
                T g = r / radix;
                T f(1);
                const T s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < T(95) / T(100) * s) {
                    done = false;
                    g = T(1) / f;
                    for (std::size_t j = 0; j < n; ++j) {
                        a(i, j) *= g;
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        a(j, i) *= f;
                    }
                }
            }
        }
    }
}

// Householder reduction to upper Hessenberg form.
template <typename T>
void to_hessenberg(Matrix<T>& a)
{
    using std::sqrt;
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        T norm(0);
        for (std::size_t i = k + 1; i < n; ++i) {
            norm += a(i, k) * a(i, k);
        }
        norm = sqrt(norm);
        if (norm == T(0)) {
            continue;
        }
        const T alpha = a(k + 1, k) > T(0) ? T(-norm) : norm;
        std::vector<T> v(n - k - 1);
        v[0] = a(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            v[i - k - 1] = a(i, k);
        }
        T vn(0);
        for (const auto& x : v) {
            vn += x * x;
        }
        if (vn == T(0)) {
            continue;
        }
        // A <- H A
        for (std::size_t j = 0; j < n; ++j) {
            T s(0);
            for (std::size_t i = k + 1; i < n; ++i) {
                s += v[i - k - 1] * a(i, j);
            }
            s = T(2) * s / vn;
            for (std::size_t i = k + 1; i < n; ++i) {
                a(i, j) -= s * v[i - k - 1];
            }
        }
        // A <- A H
        for (std::size_t i = 0; i < n; ++i) {
            T s(0);
            for (std::size_t j = k + 1; j < n; ++j) {
                s += a(i, j) * v[j - k - 1];
            }
            s = T(2) * s / vn;
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= s * v[j - k - 1];
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = T(0);
        }
    }
}

} // namespace detail

/// All eigenvalues of a small general real matrix (n <= 16): balancing,
/// Householder reduction to Hessenberg form, then the Francis double-shift
/// QR iteration. Throws NoConvergence after 100 n iterations.
template <typename T>
std::vector<ComplexValue<T>> eig_small(Matrix<T> a)
{
    using std::abs;
    using std::sqrt;
    using detail::copysign_;
    if (!a.square()) {
        throw DimensionMismatch("eig_small: matrix must be square");
    }
    const int n = static_cast<int>(a.rows());
    if (n > 16) {
        throw InvalidInput("eig_small: n must be <= 16");
    }
    std::vector<ComplexValue<T>> w(n, ComplexValue<T>{T(0), T(0)});
    if (n == 0) {
        return w;
    }
    detail::balance(a);
    detail::to_hessenberg(a);

    const T eps = unit_roundoff<T>();
    T anorm(0);
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(i - 1, 0); j < n; ++j) {
            anorm += abs(a(i, j));
        }
    }
    const int budget = 100 * n;
    int total_its = 0;
    int nn = n - 1;
    T t(0);
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                T s = abs(a(l - 1, l - 1)) + abs(a(l, l));
                if (s == T(0)) {
                    s = anorm;
                }
                if (abs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = T(0);
                    break;
                }
            }
            T x = a(nn, nn);
            if (l == nn) {
                w[nn] = {x + t, T(0)};
                --nn;
            } else {
                T y = a(nn - 1, nn - 1);
                T ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    const T p = (y - x) / T(2);
                    const T q = p * p + ww;
                    T z = sqrt(abs(q));
                    x += t;
                    if (q >= T(0)) {
                        z = p + copysign_(z, p);
                        w[nn - 1] = {x + z, T(0)};
                        w[nn] = {x + z, T(0)};
                        if (z != T(0)) {
                            w[nn].re = x - ww / z;
                        }
                    } else {
                        w[nn] = {x + p, T(-z)};
                        w[nn - 1] = {x + p, z};
                    }
                    nn -= 2;
                } else {
                    if (total_its >= budget) {
                        throw NoConvergence("eig_small: QR iteration budget exhausted");
                    }
                    if (its == 10 || its == 20) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) {
                            a(i, i) -= x;
                        }
                        const T s = abs(a(nn, nn - 1)) + abs(a(nn - 1, nn - 2));
                        x = T(3) / T(4) * s;
                        y = x;
                        ww = T(-7) / T(16) * s * s;
                    }
                    ++its;
                    ++total_its;
                    int m = nn - 2;
                    T p(0), q(0), r(0), z(0);
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        T s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = abs(p) + abs(q) + abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) {
                            break;
                        }
                        const T u = abs(a(m, m - 1)) * (abs(q) + abs(r));
                        const T v = abs(p) * (abs(a(m - 1, m - 1)) + abs(z) +
                                              abs(a(m + 1, m + 1)));
                        if (u <= eps * v) {
                            break;
                        }
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = T(0);
                        if (i != m) {
                            a(i + 2, i - 1) = T(0);
                        }
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = T(0);
                            if (k + 1 != nn) {
                                r = a(k + 2, k - 1);
                            }
                            x = abs(p) + abs(q) + abs(r);
                            if (x != T(0)) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const T s = copysign_(T(sqrt(p * p + q * q + r * r)), p);
                        if (s != T(0)) {
                            if (k == m) {
                                if (l != m) {
                                    a(k, k - 1) = -a(k, k - 1);
                                }
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

template <typename T>
struct SymmetricEigen {
    Vector<T> values;   // ascending
    Matrix<T> vectors;  // column j is the unit eigenvector of values[j]
};

/// Eigen-decomposition of a dense symmetric matrix: Householder
/// tridiagonalization followed by the implicit QL algorithm.
template <typename T>
SymmetricEigen<T> symmetric_eigen(const Matrix<T>& a)
{
    using std::abs;
    using std::sqrt;
    using detail::hypot_;
    if (!a.square()) {
        throw DimensionMismatch("symmetric_eigen: matrix must be square");
    }
    const int n = static_cast<int>(a.rows());
    Matrix<T> v = a;
    std::vector<T> d(n), e(n);
    if (n == 0) {
        return {};
    }

    // Tridiagonalization.
    for (int j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
    }
    for (int i = n - 1; i > 0; --i) {
        T scale(0), h(0);
        for (int k = 0; k < i; ++k) {
            scale += abs(d[k]);
        }
        if (scale == T(0)) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = T(0);
                v(j, i) = T(0);
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            T f = d[i - 1];
            T g = sqrt(h);
            if (f > T(0)) {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) {
                e[j] = T(0);
            }
            for (int j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = T(0);
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const T hh = f / (h + h);
            for (int j = 0; j < i; ++j) {
                e[j] -= hh * d[j];
            }
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) {
                    v(k, j) -= (f * e[k] + g * d[k]);
                }
                d[j] = v(i - 1, j);
                v(i, j) = T(0);
            }
        }
        d[i] = h;
    }
    for (int i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = T(1);
        const T h = d[i + 1];
        if (h != T(0)) {
            for (int k = 0; k <= i; ++k) {
                d[k] = v(k, i + 1) / h;
            }
            for (int j = 0; j <= i; ++j) {
                T g(0);
                for (int k = 0; k <= i; ++k) {
                    g += v(k, i + 1) * v(k, j);
                }
                for (int k = 0; k <= i; ++k) {
                    v(k, j) -= g * d[k];
                }
            }
        }
        for (int k = 0; k <= i; ++k) {
            v(k, i + 1) = T(0);
        }
    }
    for (int j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = T(0);
    }
    v(n - 1, n - 1) = T(1);
    e[0] = T(0);

    // Implicit QL.
    for (int i = 1; i < n; ++i) {
        e[i - 1] = e[i];
    }
    e[n - 1] = T(0);
    T f(0), tst1(0);
    const T eps = unit_roundoff<T>();
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, T(abs(d[l]) + abs(e[l])));
        int m = l;
        while (m < n) {
            if (abs(e[m]) <= eps * tst1) {
                break;
            }
            ++m;
        }
        if (m == n) {
            m = n - 1;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 60) {
                    throw NoConvergence("symmetric_eigen: QL iteration did not converge");
                }
                T g = d[l];
                T p = (d[l + 1] - g) / (T(2) * e[l]);
                T r = hypot_(p, T(1));
                if (p < T(0)) {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const T dl1 = d[l + 1];
                T h = g - d[l];
                for (int i = l + 2; i < n; ++i) {
                    d[i] -= h;
                }
                f += h;
                p = d[m];
                T c(1), c2(1), c3(1);
                const T el1 = e[l + 1];
                T s(0), s2(0);
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot_(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (int k = 0; k < n; ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = T(0);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
    SymmetricEigen<T> out{Vector<T>(n), Matrix<T>(n, n)};
    for (int c = 0; c < n; ++c) {
        out.values[c] = d[order[c]];
        for (int k = 0; k < n; ++k) {
            out.vectors(k, c) = v(k, order[c]);
        }
    }
    return out;
}

/// Number of eigenvalues strictly below x of the symmetric tridiagonal matrix
/// with diagonal `diag` and off-diagonal `off` (Sturm sequence count).
template <typename T>
std::size_t sturm_count(const Vector<T>& diag, const Vector<T>& off, const T& x)
{
    using std::abs;
    const std::size_t n = diag.size();
    std::size_t count = 0;
    T q = diag[0] - x;
    const T tiny = unit_roundoff<T>() * unit_roundoff<T>();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            if (q == T(0)) {
                q = tiny;
            }
            q = (diag[i] - x) - off[i - 1] * off[i - 1] / q;
        }
        if (q < T(0)) {
            ++count;
        }
    }
    return count;
}

/// k-th smallest (0-based) eigenvalue of a symmetric tridiagonal matrix by
/// bisection on the Sturm count.
template <typename T>
T tridiagonal_eigenvalue(const Vector<T>& diag, const Vector<T>& off, std::size_t k)
{
    using std::abs;
    const std::size_t n = diag.size();
    T lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        T r(0);
        if (i > 0) {
            r += abs(off[i - 1]);
        }
        if (i + 1 < n) {
            r += abs(off[i]);
        }
        lo = std::min(lo, T(diag[i] - r));
        hi = std::max(hi, T(diag[i] + r));
    }
    const T eps = unit_roundoff<T>();
    const int max_iter = 64 + 4 * decimal_digits<T>();
    for (int it = 0; it < max_iter; ++it) {
        const T mid = (lo + hi) / T(2);
        if (hi - lo <= T(2) * eps * std::max(T(abs(lo)), T(abs(hi))) || mid == lo ||
            mid == hi) {
            break;
        }
        if (sturm_count(diag, off, mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return (lo + hi) / T(2);
}

/// Unit eigenvector of a symmetric tridiagonal matrix for an accurately known
/// eigenvalue, by inverse iteration with a partially pivoted tridiagonal solve.
template <typename T>
Vector<T> tridiagonal_eigenvector(const Vector<T>& diag, const Vector<T>& off,
                                  const T& lambda)
{
    using std::abs;
    using std::sqrt;
    using std::swap;
    const std::size_t n = diag.size();
    T scale(0);
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, T(abs(diag[i])));
    }
    const T shift = lambda + unit_roundoff<T>() * (scale + abs(lambda)) * T(4);
    Vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        // deterministic, not orthogonal to any eigenvector of interest
        x[i] = T(1) + T(static_cast<long>(i % 7)) / T(13);
    }
    for (int iter = 0; iter < 3; ++iter) {
        // LU with partial pivoting of (T - shift I); U has two superdiagonals.
        std::vector<T> a(n), b(n, T(0)), c(n, T(0)), rhs = x;
        std::vector<T> sub(n, T(0));
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = diag[i] - shift;
            if (i + 1 < n) {
                b[i] = off[i];
                sub[i] = off[i];
            }
        }
        // rows: a[i] diag, b[i] super, c[i] super-super; sub[i] below row i
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (abs(sub[i]) > abs(a[i])) {
                // swap rows i and i+1
                T na = sub[i];
                T nb = a[i + 1];
                T nc = (i + 2 < n) ? b[i + 1] : T(0);
                T oa = a[i], ob = b[i], oc = c[i];
                a[i] = na;
                b[i] = nb;
                c[i] = nc;
                swap(rhs[i], rhs[i + 1]);
                const T f = oa / na;
                a[i + 1] = ob - f * nb;
                if (i + 2 < n) {
                    b[i + 1] = oc - f * nc;
                }
                rhs[i + 1] -= f * rhs[i];
            } else {
                if (a[i] == T(0)) {
                    a[i] = unit_roundoff<T>() * scale;
                }
                const T f = sub[i] / a[i];
                a[i + 1] -= f * b[i];
                if (i + 2 < n) {
                    b[i + 1] -= f * c[i];
                }
                rhs[i + 1] -= f * rhs[i];
            }
        }
        if (a[n - 1] == T(0)) {
            a[n - 1] = unit_roundoff<T>() * scale;
        }
        for (std::size_t i = n; i-- > 0;) {
            T s = rhs[i];
            if (i + 1 < n) {
                s -= b[i] * x[i + 1];
            }
            if (i + 2 < n) {
                s -= c[i] * x[i + 2];
            }
            x[i] = s / a[i];
        }
        T nrm(0);
        for (const auto& xi : x) {
            nrm += xi * xi;
        }
        nrm = sqrt(nrm);
        for (auto& xi : x) {
            xi /= nrm;
        }
    }
    return x;
}

} // namespace rdid
