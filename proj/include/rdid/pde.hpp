#pragma once

// Method-of-lines solution of  z_t = (p z_x)_x + q z  on (0, 1) with
// homogeneous Dirichlet data, non-local measurements y(t) = int c z dx, and the
// identification pipeline: measure -> subsample -> ESPRIT -> modes -> (p, q).

#include "errors.hpp"
#include "esprit.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "real.hpp"
#include "spectral.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rdid {

template <typename T>
struct PdeConfig {
    SturmLiouvilleProblem<T> problem = SturmLiouvilleProblem<T>::constant_coefficients(T(1), T(0));
    std::size_t nx = 60;
    int order = 4;
    T horizon = T(2);
    Vector<T> initial_modes;  // z_n(0), n = 1, 2, ...
};

/// z_n(0) = (-1)^(n+1) / (sqrt(2) n^3), n = 1..count.
template <typename T>
Vector<T> cubic_initial_modes(std::size_t count)
{
    using std::sqrt;
    Vector<T> z;
    for (std::size_t n = 1; n <= count; ++n) {
        const T nn = T(static_cast<long>(n));
        const T v = T(1) / (sqrt(T(2)) * nn * nn * nn);
        z.push_back(n % 2 == 1 ? v : T(-v));
    }
    return z;
}

/// Reference eigenpairs on the interior grid: closed form for constant
/// coefficients, the three-point scheme otherwise.
template <typename T>
SpectralData<T> reference_spectrum(const SturmLiouvilleProblem<T>& prob, std::size_t nx,
                                   std::size_t k)
{
    if (prob.constant) {
        return analytic_spectrum(prob.p(T(0)), prob.q(T(0)), k, nx);
    }
    return fd_spectrum(prob, nx, k);
}

/// Dense matrix of  p z'' + p' z' + q z  on the interior grid. Order 4 uses the
/// five-point stencils with odd reflection z(-h) = -z(h) at both ends; order 2
/// uses the conservative three-point form.
template <typename T>
Matrix<T> fd_generator(const SturmLiouvilleProblem<T>& prob, std::size_t nx, int order)
{
    Matrix<T> a(nx, nx);
    const T h = T(1) / T(static_cast<long>(nx + 1));
    if (order == 2) {
        const auto [diag, off] = fd_operator(prob, nx);
        for (std::size_t i = 0; i < nx; ++i) {
            a(i, i) = -diag[i];
            if (i + 1 < nx) {
                a(i, i + 1) = -off[i];
                a(i + 1, i) = -off[i];
            }
        }
        return a;
    }
    if (order != 4) {
        throw InvalidInput("stencil order must be 2 or 4");
    }
    if (nx < 3) {
        throw ResolutionError("fourth-order stencil needs at least 3 interior points");
    }
    if (!prob.dp && !prob.constant) {
        throw InvalidInput("fourth-order stencil needs p'");
    }
    const T c2 = T(1) / (T(12) * h * h);
    const T c1 = T(1) / (T(12) * h);
    const long n = static_cast<long>(nx);
    for (long i = 0; i < n; ++i) {
        const T xi = T(i + 1) * h;
        const T pv = prob.p(xi);
        const T dpi = prob.dp ? prob.dp(xi) : T(0);
        const T w2[5] = {-c2, T(16) * c2, T(-30) * c2, T(16) * c2, -c2};
        const T w1[5] = {c1, T(-8) * c1, T(0), T(8) * c1, -c1};
        for (long o = -2; o <= 2; ++o) {
            const T w = pv * w2[o + 2] + dpi * w1[o + 2];
            long j = i + o;
            T sign(1);
            if (j == -1 || j == n) {
                continue;  // boundary node, z = 0
            }
            if (j == -2) {
                j = 0;
                sign = T(-1);
            } else if (j == n + 1) {
                j = n - 1;
                sign = T(-1);
            }
            a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += sign * w;
        }
        a(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) += prob.q(xi);
    }
    return a;
}

/// Diagonal d with D A D^{-1} symmetric, built from the first off-diagonal and
/// checked on the whole band.
template <typename T>
Vector<T> symmetrizer(const Matrix<T>& a)
{
    using std::abs;
    using std::sqrt;
    const std::size_t n = a.rows();
    Vector<T> d(n, T(1));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const T up = a(i, i + 1);
        const T down = a(i + 1, i);
        if (up == T(0) && down == T(0)) {
            d[i + 1] = d[i];
            continue;
        }
        if (!(up * down > T(0))) {
            throw NonSymmetrizable("off-diagonal pair of opposite sign at row " +
                                   std::to_string(i + 1));
        }
        d[i + 1] = d[i] * sqrt(down / up);
    }
    T scale(0), worst(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const T bij = d[i] * a(i, j) / d[j];
            const T bji = d[j] * a(j, i) / d[i];
            scale = std::max(scale, T(abs(bij)));
            worst = std::max(worst, T(abs(T(bij - bji))));
        }
    }
    const T tol = pow10<T>(-decimal_digits<T>() / 2);
    if (worst > tol * scale) {
        throw NonSymmetrizable("stencil is not diagonally symmetrizable (asymmetry " +
                               format_real(to_double(T(worst / scale)), 3) + ")");
    }
    return d;
}

/// Discrete modal solution z(t) = sum_n alpha_n e^{-r_n t} m_n.
template <typename T>
struct Simulation {
    std::size_t nx = 0;
    T h;
    int order = 4;
    Vector<T> rates;            // -eigenvalues of the generator, ascending
    std::vector<Vector<T>> modes;
    Vector<T> alpha;
    std::vector<std::string> warnings;

    T x(std::size_t i) const { return T(static_cast<long>(i + 1)) * h; }

    Vector<T> field(const T& t) const
    {
        using std::exp;
        Vector<T> z(nx, T(0));
        for (std::size_t n = 0; n < rates.size(); ++n) {
            const T c = alpha[n] * exp(-rates[n] * t);
            for (std::size_t i = 0; i < nx; ++i) {
                z[i] += c * modes[n][i];
            }
        }
        return z;
    }
};

template <typename T>
Simulation<T> simulate(const PdeConfig<T>& cfg)
{
    if (cfg.nx < 3) {
        throw ResolutionError("need at least 3 interior points");
    }
    if (!(cfg.horizon > T(0))) {
        throw DomainError("time horizon must be positive");
    }
    Simulation<T> sim;
    sim.nx = cfg.nx;
    sim.h = T(1) / T(static_cast<long>(cfg.nx + 1));
    sim.order = cfg.order;

    Matrix<T> a = fd_generator(cfg.problem, cfg.nx, cfg.order);
    Vector<T> d;
    try {
        d = symmetrizer(a);
    } catch (const NonSymmetrizable& e) {
        if (cfg.order == 2) {
            throw;
        }
        sim.warnings.push_back(std::string(e.what()) + "; falling back to order 2");
        sim.order = 2;
        a = fd_generator(cfg.problem, cfg.nx, 2);
        d = Vector<T>(cfg.nx, T(1));
    }

    const std::size_t n = cfg.nx;
    Matrix<T> b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            b(i, j) = d[i] * a(i, j) / d[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const T m = (b(i, j) + b(j, i)) / T(2);
            b(i, j) = b(j, i) = m;
        }
    }
    const auto eig = symmetric_eigen(b);

    Vector<T> z0(n, T(0));
    if (!cfg.initial_modes.empty()) {
        const std::size_t k = std::min(cfg.initial_modes.size(),
                                       cfg.problem.constant ? cfg.initial_modes.size() : n / 2);
        const auto ref = reference_spectrum(cfg.problem, n, k);
        for (std::size_t m = 0; m < k; ++m) {
            for (std::size_t i = 0; i < n; ++i) {
                z0[i] += cfg.initial_modes[m] * ref.eigenfunctions[m][i];
            }
        }
        if (k < cfg.initial_modes.size()) {
            sim.warnings.push_back("initial condition truncated to " + std::to_string(k) +
                                   " resolved modes");
        }
    }

    // eigenvalues ascending -> decay rates ascending when read backwards
    for (std::size_t c = n; c-- > 0;) {
        Vector<T> v(n);
        T a0(0);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = eig.vectors(i, c) / d[i];
            a0 += eig.vectors(i, c) * d[i] * z0[i];
        }
        sim.rates.push_back(-eig.values[c]);
        sim.modes.push_back(std::move(v));
        sim.alpha.push_back(a0);
    }
    return sim;
}

/// Composite Simpson on nodes 0..N with spacing h; for odd N the last three
/// intervals use the 3/8 rule.
template <typename T>
T simpson(const Vector<T>& f, const T& h)
{
    const std::size_t intervals = f.size() - 1;
    if (f.size() < 2) {
        return T(0);
    }
    if (intervals == 1) {
        return h * (f[0] + f[1]) / T(2);
    }
    std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
    T s(0);
    for (std::size_t i = 0; i + 2 <= even; i += 2) {
        s += h / T(3) * (f[i] + T(4) * f[i + 1] + f[i + 2]);
    }
    if (even != intervals) {
        const std::size_t i = even;
        s += T(3) * h / T(8) * (f[i] + T(3) * f[i + 1] + T(3) * f[i + 2] + f[i + 3]);
    }
    return s;
}

/// int_0^1 c z dx from interior grid values (zero at both ends).
template <typename T>
T grid_integral(const Vector<T>& c, const Vector<T>& z, const T& h)
{
    Vector<T> f(c.size() + 2, T(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        f[i + 1] = c[i] * z[i];
    }
    return simpson(f, h);
}

template <typename T>
struct MeasurementFilter {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    T epsilon = T(0);
    Vector<T> coefficients;  // c_n, n = 1..N1+N2
    std::optional<std::uint64_t> seed;

    /// c_n uniform on [1, 2] from a seeded 64-bit Mersenne twister (53-bit mantissa).
    static MeasurementFilter random(std::size_t n1, std::size_t n2, const T& eps,
                                    std::uint64_t seed)
    {
        MeasurementFilter f;
        f.n1 = n1;
        f.n2 = n2;
        f.epsilon = eps;
        f.seed = seed;
        std::mt19937_64 rng(seed);
        for (std::size_t n = 0; n < n1 + n2; ++n) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            f.coefficients.push_back(T(1) + T(u));
        }
        return f;
    }

    /// Weight of mode n (0-based) in c: c_n for main modes, eps c_n for the tail.
    T weight(std::size_t n) const
    {
        if (n >= coefficients.size()) {
            return T(0);
        }
        return n < n1 ? coefficients[n] : T(epsilon * coefficients[n]);
    }

    Vector<T> values(const SpectralData<T>& basis) const
    {
        if (basis.eigenfunctions.size() < n1 + n2) {
            throw InvalidInput("filter needs " + std::to_string(n1 + n2) + " basis functions");
        }
        Vector<T> c(basis.nx, T(0));
        for (std::size_t n = 0; n < n1 + n2; ++n) {
            const T w = weight(n);
            for (std::size_t i = 0; i < basis.nx; ++i) {
                c[i] += w * basis.eigenfunctions[n][i];
            }
        }
        return c;
    }

    void validate() const
    {
        if (coefficients.size() != n1 + n2) {
            throw DimensionMismatch("filter needs N1+N2 coefficients");
        }
        if (epsilon < T(0)) {
            throw DomainError("filter eps must be non-negative");
        }
    }
};

/// y(t_k) = int c z(., t_k) dx by Simpson quadrature of each discrete mode.
template <typename T>
Vector<T> measure(const Simulation<T>& sim, const Vector<T>& filter_values, const Vector<T>& times)
{
    using std::exp;
    if (filter_values.size() != sim.nx) {
        throw DimensionMismatch("filter grid does not match the simulation grid");
    }
    Vector<T> g(sim.rates.size());
    for (std::size_t n = 0; n < sim.rates.size(); ++n) {
        g[n] = sim.alpha[n] * grid_integral(filter_values, sim.modes[n], sim.h);
    }
    Vector<T> y(times.size(), T(0));
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t n = 0; n < g.size(); ++n) {
            y[k] += g[n] * exp(-sim.rates[n] * times[k]);
        }
    }
    return y;
}

/// z_n(0) = y_n / c_n for the first n0 matched amplitudes.
template <typename T>
Vector<T> recover_modes(const Vector<T>& y_matched, const MeasurementFilter<T>& filter,
                        std::size_t n0)
{
    if (n0 > filter.n1 || n0 > y_matched.size()) {
        throw InvalidInput("cannot report more modes than N1");
    }
    Vector<T> z;
    for (std::size_t n = 0; n < n0; ++n) {
        if (filter.coefficients[n] == T(0)) {
            throw ZeroFilterCoefficient("c_" + std::to_string(n + 1) + " is zero");
        }
        z.push_back(y_matched[n] / filter.coefficients[n]);
    }
    return z;
}

/// Least-squares (p, q) from lambda_n = pi^2 n^2 p - q, n = 1..N1.
template <typename T>
std::pair<T, T> fit_pq(const Vector<T>& lambda)
{
    if (lambda.size() < 2) {
        throw InvalidInput("fit_pq needs at least two eigenvalues");
    }
    Matrix<T> a(lambda.size(), 2);
    const T pi2 = pi<T>() * pi<T>();
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        const T nn = T(static_cast<long>(n + 1));
        a(n, 0) = pi2 * nn * nn;
        a(n, 1) = T(-1);
    }
    const auto pq = least_squares(a, lambda);
    return {pq[0], pq[1]};
}

template <typename T>
struct PipelineConfig {
    T p = T(1) / T(10);
    T q = T(1) / T(10);
    std::size_t nx = 60;
    int order = 4;
    std::size_t n1 = 4;
    std::size_t n2 = 2;
    T epsilon = T(1) / T(10000);
    std::uint64_t seed = 1;
    std::size_t samples = 1025;
    T horizon = T(2);
    std::size_t initial_modes = 30;
    std::size_t stride_min = 1;
    std::size_t stride_max = 0;  // 0: largest stride that fits 2 N1 samples
};

template <typename T>
struct PipelinePoint {
    std::size_t stride = 0;
    T delta;
    bool ok = false;
    std::string failure;
    Vector<T> lambda;       // matched, ascending
    Vector<T> y;
    Vector<T> z0;
    Vector<T> rel_lambda;   // |lambda~ - lambda| / lambda
    T p_hat, q_hat, rel_p, rel_q;
};

template <typename T>
struct PipelineSetup {
    MeasurementFilter<T> filter;
    Simulation<T> simulation;
    Vector<T> times;
    Vector<T> series;
    Vector<T> true_lambda;  // n = 1..N1
    Vector<T> true_z0;
    std::size_t stride_max = 0;
};

template <typename T>
PipelineSetup<T> prepare_pipeline(const PipelineConfig<T>& cfg)
{
    if (cfg.n1 < 2) {
        throw InvalidInput("pipeline needs N1 >= 2 for the (p, q) fit");
    }
    if (cfg.samples < 2 * cfg.n1) {
        throw InsufficientData("need at least 2*N1 samples");
    }
    PipelineSetup<T> s;
    s.filter = MeasurementFilter<T>::random(cfg.n1, cfg.n2, cfg.epsilon, cfg.seed);
    PdeConfig<T> pde;
    pde.problem = SturmLiouvilleProblem<T>::constant_coefficients(cfg.p, cfg.q);
    pde.nx = cfg.nx;
    pde.order = cfg.order;
    pde.horizon = cfg.horizon;
    pde.initial_modes = cubic_initial_modes<T>(std::max(cfg.initial_modes, cfg.n1 + cfg.n2));
    s.simulation = simulate(pde);
    const auto basis = reference_spectrum(pde.problem, cfg.nx, cfg.n1 + cfg.n2);
    const T step = cfg.horizon / T(static_cast<long>(cfg.samples - 1));
    for (std::size_t k = 0; k < cfg.samples; ++k) {
        s.times.push_back(T(static_cast<long>(k)) * step);
    }
    s.series = measure(s.simulation, s.filter.values(basis), s.times);
    s.true_lambda = Vector<T>(basis.eigenvalues.begin(), basis.eigenvalues.begin() + cfg.n1);
    s.true_z0 = Vector<T>(pde.initial_modes.begin(), pde.initial_modes.begin() + cfg.n1);
    s.stride_max = (cfg.samples - 1) / (2 * cfg.n1 - 1);
    if (cfg.stride_max != 0) {
        s.stride_max = std::min(s.stride_max, cfg.stride_max);
    }
    return s;
}

/// One sweep point: subsample at `stride`, fit, match, and regress (p, q).
template <typename T>
PipelinePoint<T> pipeline_point(const PipelineConfig<T>& cfg, const PipelineSetup<T>& s,
                                std::size_t stride)
{
    using std::abs;
    PipelinePoint<T> pt;
    pt.stride = stride;
    pt.delta = s.times[1] * T(static_cast<long>(stride));
    try {
        const auto window = subsample(s.series, stride, 2 * cfg.n1);
        const auto r = match_fit(esprit_fit(window, FitConfig<T>{cfg.n1, pt.delta}), s.true_lambda);
        pt.lambda = r.lambda;
        pt.y = r.y;
        pt.z0 = recover_modes(r.y, s.filter, cfg.n1);
        for (std::size_t n = 0; n < cfg.n1; ++n) {
            pt.rel_lambda.push_back(abs(T(r.lambda[n] - s.true_lambda[n])) / s.true_lambda[n]);
        }
        const auto [ph, qh] = fit_pq(r.lambda);
        pt.p_hat = ph;
        pt.q_hat = qh;
        pt.rel_p = abs(T(ph - cfg.p)) / abs(cfg.p);
        pt.rel_q = abs(T(qh - cfg.q)) / abs(cfg.q);
        pt.ok = true;
    } catch (const NumericalBreakdown& e) {
        pt.failure = e.what();
    } catch (const InvalidInput& e) {
        pt.failure = e.what();
    }
    return pt;
}

/// Index of an interior minimum of log(err) with at least a factor `contrast`
/// of decrease before it and increase after it; nullopt if the curve has no
/// such dip. Non-positive or non-finite values are skipped.
template <typename T>
std::optional<std::size_t> error_dip(const Vector<T>& err, const T& contrast = T(2))
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < err.size(); ++i) {
        if (err[i] > T(0) && is_finite(err[i])) {
            idx.push_back(i);
        }
    }
    if (idx.size() < 3) {
        return std::nullopt;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        if (err[idx[k]] < err[idx[best]]) {
            best = k;
        }
    }
    if (best == 0 || best + 1 == idx.size()) {
        return std::nullopt;
    }
    T before(0), after(0);
    for (std::size_t k = 0; k < best; ++k) {
        before = std::max(before, err[idx[k]]);
    }
    for (std::size_t k = best + 1; k < idx.size(); ++k) {
        after = std::max(after, err[idx[k]]);
    }
    const T lo = err[idx[best]];
    if (before < contrast * lo || after < contrast * lo) {
        return std::nullopt;
    }
    return idx[best];
}

} // namespace rdid
