#pragma once

// Dirichlet Sturm-Liouville spectra for  A h = -(p h')' - q h  on (0, 1):
// closed-form eigenpairs for constant coefficients, second-order finite
// differences otherwise, and empirical eigenvalue-gap constants.

#include "errors.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "real.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rdid {

template <typename T>
struct SturmLiouvilleProblem {
    using Coefficient = std::function<T(const T&)>;

    Coefficient p;
    Coefficient q;
    Coefficient dp;  // p', optional; needed only by the fourth-order stencil
    T p_lo, p_hi, q_lo, q_hi;
    bool constant = false;

    static SturmLiouvilleProblem constant_coefficients(const T& p0, const T& q0)
    {
        if (!(p0 > T(0))) {
            throw DomainError("p must be positive");
        }
        SturmLiouvilleProblem s;
        s.p = [p0](const T&) { return p0; };
        s.q = [q0](const T&) { return q0; };
        s.dp = [](const T&) { return T(0); };
        s.p_lo = s.p_hi = p0;
        s.q_lo = s.q_hi = q0;
        s.constant = true;
        return s;
    }

    /// Bounds are taken from `samples` equispaced evaluations on [0, 1].
    static SturmLiouvilleProblem from_functions(Coefficient p, Coefficient q,
                                                Coefficient dp = nullptr,
                                                std::size_t samples = 1001)
    {
        SturmLiouvilleProblem s;
        s.p = std::move(p);
        s.q = std::move(q);
        s.dp = std::move(dp);
        s.p_lo = s.p_hi = s.p(T(0));
        s.q_lo = s.q_hi = s.q(T(0));
        for (std::size_t i = 0; i < samples; ++i) {
            const T x = T(static_cast<long>(i)) / T(static_cast<long>(samples - 1));
            const T pv = s.p(x);
            const T qv = s.q(x);
            s.p_lo = std::min(s.p_lo, pv);
            s.p_hi = std::max(s.p_hi, pv);
            s.q_lo = std::min(s.q_lo, qv);
            s.q_hi = std::max(s.q_hi, qv);
        }
        if (!(s.p_lo > T(0))) {
            throw DomainError("p must be positive on [0, 1]");
        }
        return s;
    }
};

/// Eigenpairs on the interior grid x_i = i h, i = 1..N_x, h = 1/(N_x+1).
/// Eigenfunctions satisfy h * sum v_i^2 = 1 and v_1 > 0.
template <typename T>
struct SpectralData {
    std::size_t nx = 0;
    T h;
    Vector<T> eigenvalues;
    std::vector<Vector<T>> eigenfunctions;

    T x(std::size_t i) const { return T(static_cast<long>(i + 1)) * h; }
};

template <typename T>
struct GapConstants {
    T lower;  // upsilon
    T upper;  // Upsilon
};

template <typename T>
T grid_inner_product(const Vector<T>& a, const Vector<T>& b, const T& h)
{
    return h * dot(a, b);
}

namespace detail {

template <typename T>
void normalize_mode(Vector<T>& v, const T& h)
{
    using std::sqrt;
    const T nrm = sqrt(grid_inner_product(v, v, h));
    const T sign = v.front() < T(0) ? T(-1) : T(1);
    for (auto& vi : v) {
        vi *= sign / nrm;
    }
}

} // namespace detail

/// lambda_n = pi^2 n^2 p0 - q0,  psi_n(x) = sqrt(2) sin(n pi x).
template <typename T>
SpectralData<T> analytic_spectrum(const T& p0, const T& q0, std::size_t k, std::size_t nx = 60)
{
    using std::sin;
    using std::sqrt;
    if (!(p0 > T(0))) {
        throw DomainError("p must be positive");
    }
    SpectralData<T> s;
    s.nx = nx;
    s.h = T(1) / T(static_cast<long>(nx + 1));
    const T pi_ = pi<T>();
    const T root2 = sqrt(T(2));
    for (std::size_t n = 1; n <= k; ++n) {
        const T nn = T(static_cast<long>(n));
        s.eigenvalues.push_back(pi_ * pi_ * nn * nn * p0 - q0);
        Vector<T> v(nx);
        for (std::size_t i = 0; i < nx; ++i) {
            v[i] = root2 * sin(nn * pi_ * s.x(i));
        }
        s.eigenfunctions.push_back(std::move(v));
    }
    return s;
}

/// Symmetric tridiagonal matrix of the conservative three-point scheme,
/// p evaluated at cell midpoints: returns (diagonal, off-diagonal).
template <typename T>
std::pair<Vector<T>, Vector<T>> fd_operator(const SturmLiouvilleProblem<T>& prob, std::size_t nx)
{
    const T h = T(1) / T(static_cast<long>(nx + 1));
    const T inv_h2 = T(1) / (h * h);
    Vector<T> diag(nx), off(nx > 0 ? nx - 1 : 0);
    for (std::size_t i = 0; i < nx; ++i) {
        const T xi = T(static_cast<long>(i + 1)) * h;
        const T left = prob.p(T(xi - h / T(2)));
        const T right = prob.p(T(xi + h / T(2)));
        diag[i] = (left + right) * inv_h2 - prob.q(xi);
        if (i + 1 < nx) {
            off[i] = -right * inv_h2;
        }
    }
    return {diag, off};
}

/// K smallest eigenpairs of the three-point discretization with N_x interior
/// points (bisection on Sturm counts plus inverse iteration).
template <typename T>
SpectralData<T> fd_spectrum(const SturmLiouvilleProblem<T>& prob, std::size_t nx, std::size_t k)
{
    if (2 * k > nx) {
        throw ResolutionError("requested " + std::to_string(k) + " eigenpairs but only N_x/2 = " +
                              std::to_string(nx / 2) + " are resolved");
    }
    const auto [diag, off] = fd_operator(prob, nx);
    SpectralData<T> s;
    s.nx = nx;
    s.h = T(1) / T(static_cast<long>(nx + 1));
    for (std::size_t n = 0; n < k; ++n) {
        const T lam = tridiagonal_eigenvalue(diag, off, n);
        auto v = tridiagonal_eigenvector(diag, off, lam);
        detail::normalize_mode(v, s.h);
        s.eigenvalues.push_back(lam);
        s.eigenfunctions.push_back(std::move(v));
    }
    return s;
}

/// pi^2 n^2 p_lo - q_hi <= lambda_n <= pi^2 n^2 p_hi - q_lo  (n is 1-based).
template <typename T>
std::pair<T, T> eigenvalue_bounds(const SturmLiouvilleProblem<T>& prob, std::size_t n)
{
    const T c = pi<T>() * pi<T>() * T(static_cast<long>(n * n));
    return {c * prob.p_lo - prob.q_hi, c * prob.p_hi - prob.q_lo};
}

/// Smallest and largest (lambda_m - lambda_n) / (m^2 - n^2) over all pairs.
template <typename T>
GapConstants<T> estimate_gap_constants(const Vector<T>& eigenvalues)
{
    const std::size_t k = eigenvalues.size();
    if (k < 2) {
        throw InsufficientData("gap constants need at least two eigenvalues");
    }
    GapConstants<T> g{T(0), T(0)};
    bool first = true;
    for (std::size_t n = 1; n <= k; ++n) {
        for (std::size_t m = n + 1; m <= k; ++m) {
            const T r = (eigenvalues[m - 1] - eigenvalues[n - 1]) /
                        T(static_cast<long>(m * m - n * n));
            if (first) {
                g.lower = g.upper = r;
                first = false;
            } else {
                g.lower = std::min(g.lower, r);
                g.upper = std::max(g.upper, r);
            }
        }
    }
    return g;
}

template <typename T>
GapConstants<T> estimate_gap_constants(const SpectralData<T>& spec)
{
    return estimate_gap_constants(spec.eigenvalues);
}

} // namespace rdid
