#pragma once

// ESPRIT recovery of decay rates and amplitudes from 2 N1 equispaced samples,
// rank pairing against reference rates, and error rescaling by the noise level.

#include "conditioning.hpp"
#include "errors.hpp"
#include "expmodel.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "real.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace rdid {

template <typename T>
struct FitConfig {
    std::size_t n1 = 1;
    T delta = T(1);
};

template <typename T>
struct EspritFit {
    Vector<T> phi;     // recovered nodes, in eigenvalue order
    Vector<T> lambda;  // -log(phi) / Delta
    Vector<T> y;
};

/// |Im phi| / |phi| above this raises ComplexNodes.
template <typename T>
T imaginary_tolerance()
{
    return decimal_digits<T>() >= 32 ? T(1) / T(1000000) : T(1) / T(1000);
}

template <typename T>
EspritFit<T> esprit_fit(const Vector<T>& samples, const FitConfig<T>& cfg)
{
    using std::abs;
    using std::log;
    const std::size_t n1 = cfg.n1;
    if (n1 == 0) {
        throw InvalidInput("esprit: model order must be at least 1");
    }
    if (samples.size() < 2 * n1) {
        throw InsufficientData("esprit: need at least 2*N1 samples, got " +
                               std::to_string(samples.size()));
    }
    if (!(cfg.delta > T(0))) {
        throw DomainError("esprit: sample step must be positive");
    }
    for (const auto& s : samples) {
        if (!is_finite(s)) {
            throw InvalidInput("esprit: non-finite sample");
        }
    }

    Matrix<T> hankel(n1 + 1, n1);
    for (std::size_t i = 0; i <= n1; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            hankel(i, j) = samples[i + j];
        }
    }
    const auto dec = svd(hankel);
    const Matrix<T> top = dec.u.block(0, 0, n1, n1);
    const Matrix<T> bottom = dec.u.block(1, 0, n1, n1);

    Matrix<T> psi(n1, n1);
    for (std::size_t c = 0; c < n1; ++c) {
        const auto col = least_squares(top, bottom.column(c));
        for (std::size_t r = 0; r < n1; ++r) {
            psi(r, c) = col[r];
        }
    }
    const auto nodes = eig_small(psi);

    EspritFit<T> fit;
    const T tol = imaginary_tolerance<T>();
    for (const auto& z : nodes) {
        if (abs(z.im) > tol * z.abs()) {
            throw ComplexNodes("esprit: node with relative imaginary part " +
                               format_real(to_double(T(abs(z.im) / z.abs())), 3));
        }
        if (!(z.re > T(0))) {
            throw NonPositiveNode("esprit: node with non-positive real part " +
                                  format_real(to_double(z.re), 6));
        }
        fit.phi.push_back(z.re);
        fit.lambda.push_back(-log(z.re) / cfg.delta);
    }

    Matrix<T> vander(2 * n1, n1);
    for (std::size_t n = 0; n < n1; ++n) {
        T p(1);
        for (std::size_t k = 0; k < 2 * n1; ++k) {
            vander(k, n) = p;
            p *= fit.phi[n];
        }
    }
    fit.y = least_squares(vander, Vector<T>(samples.begin(), samples.begin() + 2 * n1));
    return fit;
}

/// Order of lambda_est ascending (stable), to be paired positionally with the
/// reference rates, which are taken in their given (ascending) order.
template <typename T>
std::vector<std::size_t> index_match(const Vector<T>& lambda_est, const Vector<T>& lambda_true)
{
    if (lambda_est.size() != lambda_true.size()) {
        throw DimensionMismatch("index_match: lengths differ");
    }
    std::vector<std::size_t> perm(lambda_est.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return lambda_est[a] < lambda_est[b];
    });
    return perm;
}

template <typename T>
struct RecoveryResult {
    Vector<T> lambda;                 // matched, ascending
    Vector<T> y;                      // matched
    std::vector<std::size_t> permutation;
    Vector<T> err_lambda;             // |lambda~ - lambda| / eps
    Vector<T> err_y;                  // |y~ - y| / eps
    Vector<T> z0;                     // y~ / c, when a filter is known
    std::optional<T> p_hat;
    std::optional<T> q_hat;
};

/// Applies index_match to a fit and returns the matched estimates.
template <typename T>
RecoveryResult<T> match_fit(const EspritFit<T>& fit, const Vector<T>& lambda_true)
{
    RecoveryResult<T> r;
    r.permutation = index_match(fit.lambda, lambda_true);
    for (auto i : r.permutation) {
        r.lambda.push_back(fit.lambda[i]);
        r.y.push_back(fit.y[i]);
    }
    return r;
}

/// (|lambda~_n - lambda_n| / eps, |y~_n - y_n| / eps) for matched estimates.
template <typename T>
std::pair<Vector<T>, Vector<T>> rescaled_errors(const Vector<T>& lambda_est, const Vector<T>& y_est,
                                                const Vector<T>& lambda_true,
                                                const Vector<T>& y_true, const T& eps)
{
    using std::abs;
    if (eps == T(0)) {
        throw DivideByZero("rescaled errors need eps > 0; use raw errors at eps = 0");
    }
    if (lambda_est.size() != lambda_true.size() || y_est.size() != y_true.size() ||
        lambda_est.size() != y_est.size()) {
        throw DimensionMismatch("rescaled_errors: lengths differ");
    }
    Vector<T> el, ey;
    for (std::size_t n = 0; n < lambda_est.size(); ++n) {
        el.push_back(abs(T(lambda_est[n] - lambda_true[n])) / eps);
        ey.push_back(abs(T(y_est[n] - y_true[n])) / eps);
    }
    return {el, ey};
}

/// Every `stride`-th sample starting at `offset`, `count` values in total.
template <typename T>
Vector<T> subsample(const Vector<T>& series, std::size_t stride, std::size_t count,
                    std::size_t offset = 0)
{
    if (stride == 0) {
        throw InvalidInput("subsample: stride must be positive");
    }
    if (count == 0 || offset + (count - 1) * stride >= series.size()) {
        throw InsufficientData("subsample: record too short for " + std::to_string(count) +
                               " samples at stride " + std::to_string(stride));
    }
    Vector<T> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = series[offset + k * stride];
    }
    return out;
}

/// Whether ESPRIT errors at this step size can reflect the first-order
/// condition numbers rather than rounding: for each n, eps |K_lambda(n)| must
/// exceed 10^3 times the rounding floor of lambda_n recovered from the samples.
template <typename T>
std::vector<bool> esprit_reliability(const ExponentialModel<T>& model, const T& delta,
                                     const ConditionReport<T>& kappa)
{
    using std::abs;
    const auto grid = SampleGrid<T>::minimal(delta, model.n1());
    const auto samples = synthesize(model, grid).total;
    const auto floor = roundoff_floor(CandidateParameters<T>::from_main(model), grid, samples);
    std::vector<bool> ok(model.n1());
    for (std::size_t n = 0; n < model.n1(); ++n) {
        ok[n] = model.epsilon * abs(kappa.k_lambda[n]) >= T(1000) * floor[2 * n + 1];
    }
    return ok;
}

} // namespace rdid
