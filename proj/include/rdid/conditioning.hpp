#pragma once

// First-order condition numbers of the eps-approximation, by the Hermite
// closed form and by a Jacobian solve, plus the auxiliary quantities used to
// bound them (node products xi, log-sums theta, Theta, sigma, J integrals).

#include "errors.hpp"
#include "expmodel.hpp"
#include "interpolation.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "real.hpp"
#include "special.hpp"
#include "spectral.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <string>
#include <vector>

namespace rdid {

enum class ConditionRoute { closed_form, linear_solve };

inline const char* route_name(ConditionRoute r)
{
    return r == ConditionRoute::closed_form ? "closed-form" : "linear-solve";
}

template <typename T>
struct ConditionReport {
    ConditionRoute route = ConditionRoute::linear_solve;
    T delta;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    int digits = decimal_digits<T>();
    Vector<T> k_y;       // index n is the 0-based main component
    Vector<T> k_lambda;
};

/// K_y(n) = y_{N1+1} H_n(phi_{N1+1}),
/// K_lambda(n) = -y_{N1+1} Htilde_n(phi_{N1+1}) / (Delta y_n phi_n).
template <typename T>
ConditionReport<T> condition_closed_form(const ExponentialModel<T>& model, const T& delta)
{
    model.validate();
    if (model.n2() != 1) {
        throw InvalidInput("closed-form condition numbers need exactly one tail component");
    }
    const auto phi = model.nodes_for(delta);
    const std::size_t n1 = model.n1();
    const NodeSet<T> chi(Vector<T>(phi.begin(), phi.begin() + static_cast<long>(n1)));
    const T zt = phi[n1];
    const T yt = model.tail_y[0];
    ConditionReport<T> r{ConditionRoute::closed_form, delta, n1, 1, decimal_digits<T>(),
                         Vector<T>(n1), Vector<T>(n1)};
    for (std::size_t n = 0; n < n1; ++n) {
        const auto [h, ht] = hermite_values(chi, n, zt);
        r.k_y[n] = yt * h;
        r.k_lambda[n] = -yt * ht / (delta * model.main_y[n] * phi[n]);
    }
    return r;
}

namespace detail {

template <typename T>
Vector<T> tail_superposition(const ExponentialModel<T>& model, const SampleGrid<T>& grid)
{
    using std::exp;
    Vector<T> s(grid.count, T(0));
    for (std::size_t k = 0; k < grid.count; ++k) {
        for (std::size_t m = 0; m < model.n2(); ++m) {
            s[k] += model.tail_y[m] * exp(-model.tail_lambda[m] * grid.t(k));
        }
    }
    return s;
}

} // namespace detail

/// Solves dF/dP(P, 0) kappa = sum_m y_m (phi_m^k)_k over the tail components.
template <typename T>
ConditionReport<T> condition_linear_solve(const ExponentialModel<T>& model, const T& delta)
{
    model.validate();
    const std::size_t n1 = model.n1();
    const auto grid = SampleGrid<T>::minimal(delta, n1);
    const auto truth = CandidateParameters<T>::from_main(model);
    const auto kappa = solve_jacobian_system(jacobian(truth, grid),
                                             detail::tail_superposition(model, grid),
                                             model.main_lambda);
    ConditionReport<T> r{ConditionRoute::linear_solve, delta, n1, model.n2(), decimal_digits<T>(),
                         Vector<T>(n1), Vector<T>(n1)};
    for (std::size_t n = 0; n < n1; ++n) {
        r.k_y[n] = kappa[2 * n];
        r.k_lambda[n] = kappa[2 * n + 1];
    }
    return r;
}

/// Rounding-error floor of the parameters recovered from samples s through the
/// Jacobian at `at`: u * sum_k |(J^{-1})_{i,k}| |s_k| for each parameter i
/// (interleaved like CandidateParameters).
template <typename T>
Vector<T> roundoff_floor(const CandidateParameters<T>& at, const SampleGrid<T>& grid,
                         const Vector<T>& s)
{
    using std::abs;
    const std::size_t m = 2 * at.n1();
    if (grid.count != m || s.size() != m) {
        throw DimensionMismatch("roundoff_floor: need 2*N1 samples");
    }
    Vector<T> rates(at.n1());
    for (std::size_t n = 0; n < at.n1(); ++n) {
        rates[n] = at.lambda(n);
    }
    const auto j = jacobian(at, grid);
    Vector<T> floor(m, T(0));
    for (std::size_t k = 0; k < m; ++k) {
        Vector<T> e(m, T(0));
        e[k] = T(1);
        const auto col = solve_jacobian_system(j, e, rates);
        for (std::size_t i = 0; i < m; ++i) {
            floor[i] += abs(col[i]) * abs(s[k]);
        }
    }
    for (auto& f : floor) {
        f *= unit_roundoff<T>();
    }
    return floor;
}

template <typename T>
struct ConditionSweepPoint {
    T delta;
    std::optional<ConditionReport<T>> linear;
    std::optional<ConditionReport<T>> closed;
    bool reliable = false;
    T disagreement = T(0);  // max relative route difference (N2 = 1)
    std::string failure;    // breakdown message, empty if both routes ran
};

/// Both routes at one step size. With one tail component the point is reliable
/// when the routes agree to relative 1e-4; with more tail components (no
/// closed form) when the rounding floor of every condition number is below
/// 1e-4 of its magnitude.
template <typename T>
ConditionSweepPoint<T> condition_point(const ExponentialModel<T>& model, const T& delta)
{
    using std::abs;
    ConditionSweepPoint<T> p;
    p.delta = delta;
    const T limit = T(1) / T(10000);
    auto finite = [](const ConditionReport<T>& r) {
        for (std::size_t n = 0; n < r.n1; ++n) {
            if (!is_finite(r.k_y[n]) || !is_finite(r.k_lambda[n])) {
                return false;
            }
        }
        return true;
    };
    try {
        p.linear = condition_linear_solve(model, delta);
    } catch (const NumericalBreakdown& e) {
        p.failure = e.what();
    }
    if (model.n2() == 1) {
        try {
            p.closed = condition_closed_form(model, delta);
        } catch (const InvalidInput& e) {
            p.failure = e.what();
        } catch (const NumericalBreakdown& e) {
            p.failure = e.what();
        }
        if (p.linear && p.closed && finite(*p.linear) && finite(*p.closed)) {
            T worst(0);
            for (std::size_t n = 0; n < model.n1(); ++n) {
                for (auto [a, b] : {std::pair{p.linear->k_y[n], p.closed->k_y[n]},
                                    std::pair{p.linear->k_lambda[n], p.closed->k_lambda[n]}}) {
                    const T scale = std::max(T(abs(a)), T(abs(b)));
                    if (scale > T(0)) {
                        worst = std::max(worst, T(abs(T(a - b)) / scale));
                    }
                }
            }
            p.disagreement = worst;
            p.reliable = worst <= limit;
        }
    } else if (p.linear && finite(*p.linear)) {
        const auto grid = SampleGrid<T>::minimal(delta, model.n1());
        const auto floor = roundoff_floor(CandidateParameters<T>::from_main(model), grid,
                                          detail::tail_superposition(model, grid));
        p.reliable = true;
        for (std::size_t n = 0; n < model.n1(); ++n) {
            p.reliable = p.reliable && floor[2 * n] <= limit * abs(p.linear->k_y[n]) &&
                         floor[2 * n + 1] <= limit * abs(p.linear->k_lambda[n]);
        }
    }
    return p;
}

/// J_{w1,w2}(alpha) = (Li2(e^{-alpha w1}) - Li2(e^{-alpha w2})) / alpha,
/// the integral of -log(1 - e^{-alpha x}) over [w1, w2]; w2 may be infinite.
template <typename T>
T J_integral(const T& w1, const T& w2, const T& alpha)
{
    if (!(w1 >= T(0)) || !(w2 > w1) || !(alpha > T(0))) {
        throw DomainError("J_integral: need 0 <= w1 < w2 and alpha > 0");
    }
    return (dilog_exp(T(alpha * w1)) - dilog_exp(T(alpha * w2))) / alpha;
}

template <typename T>
T infinity()
{
    return std::numeric_limits<T>::infinity();
}

/// sigma(n, N1) = N1(N1+1)(2N1+1)/6 - n(n+1)(2n+1)/6 - (N1-n) n^2, n 1-based.
inline long sigma_index(long n, long n1)
{
    return n1 * (n1 + 1) * (2 * n1 + 1) / 6 - n * (n + 1) * (2 * n + 1) / 6 - (n1 - n) * n * n;
}

template <typename T>
struct BoundDiagnostics {
    std::size_t n = 0;  // 1-based index
    std::size_t n1 = 0;
    T delta;
    T xi1, xi2, xi3, xi4;
    T theta1, theta2, theta3;
    T Theta;
    long sigma = 0;
    T lagrange_sq;            // L^2_{Phi,n}(phi_{N1+1}) = xi1 / (xi2 xi3)
    T lagrange_sq_theta;      // the same from the Theta representation
    // relative residuals of the exact rewritings of xi1, xi2, xi3 and L^2
    T identity_residual[4];
};

namespace detail {

// -log(1 - e^{-x}) for x > 0
template <typename T>
T neg_log_one_minus_exp(const T& x)
{
    using std::exp;
    using std::log;
    if (x < T(7) / T(10)) {
        return -log(T(-expm1_(T(-x))));
    }
    return -log1p_(T(-exp(-x)));
}

} // namespace detail

/// Node products and log-sums for main index n (1-based) with N1 main and the
/// (N1+1)-th eigenvalue as the tail; `lambda` must hold at least N1+1 values.
template <typename T>
BoundDiagnostics<T> bound_diagnostics(const Vector<T>& lambda, std::size_t n, std::size_t n1,
                                      const T& delta)
{
    using std::abs;
    using std::exp;
    using std::log;
    if (n < 1 || n > n1 || lambda.size() < n1 + 1) {
        throw InvalidInput("bound_diagnostics: need 1 <= n <= N1 and N1+1 eigenvalues");
    }
    auto lam = [&](std::size_t j) { return lambda[j - 1]; };
    auto phi = [&](std::size_t j) { return T(exp(-lam(j) * delta)); };

    BoundDiagnostics<T> b;
    b.n = n;
    b.n1 = n1;
    b.delta = delta;
    b.xi1 = b.xi2 = b.xi3 = T(1);
    b.xi4 = b.theta1 = b.theta2 = b.theta3 = T(0);
    T sum_ne(0), sum_lt(0), sum_gt_gap(0);
    for (std::size_t j = 1; j <= n1; ++j) {
        if (j != n) {
            const T d1 = phi(n1 + 1) - phi(j);
            b.xi1 *= d1 * d1;
            b.xi4 += T(1) / abs(T(phi(n) - phi(j)));
            b.theta1 += detail::neg_log_one_minus_exp(T(delta * (lam(n1 + 1) - lam(j))));
            sum_ne += lam(j);
        }
        if (j < n) {
            const T d = phi(n) - phi(j);
            b.xi2 *= d * d;
            b.theta2 += detail::neg_log_one_minus_exp(T(delta * (lam(n) - lam(j))));
            sum_lt += lam(j);
        }
        if (j > n) {
            const T d = phi(n) - phi(j);
            b.xi3 *= d * d;
            b.theta3 += detail::neg_log_one_minus_exp(T(delta * (lam(j) - lam(n))));
            sum_gt_gap += lam(j) - lam(n);
        }
    }
    b.Theta = T(-2) * (b.theta1 - b.theta2 - b.theta3);
    b.sigma = sigma_index(static_cast<long>(n), static_cast<long>(n1));
    b.lagrange_sq = b.xi1 / (b.xi2 * b.xi3);
    b.lagrange_sq_theta = exp(T(-2) * delta * sum_gt_gap + b.Theta);

    const T xi1_id = exp(T(-2) * delta * sum_ne - T(2) * b.theta1);
    const T xi2_id = exp(T(-2) * delta * sum_lt - T(2) * b.theta2);
    const T xi3_id =
        exp(T(-2) * delta * T(static_cast<long>(n1 - n)) * lam(n) - T(2) * b.theta3);
    auto rel = [](const T& a, const T& ref) { return T(abs(T(a - ref)) / abs(ref)); };
    b.identity_residual[0] = rel(xi1_id, b.xi1);
    b.identity_residual[1] = rel(xi2_id, b.xi2);
    b.identity_residual[2] = rel(xi3_id, b.xi3);
    b.identity_residual[3] = rel(b.lagrange_sq_theta, b.lagrange_sq);
    return b;
}

/// One inequality, lower <= value <= upper (either side may be absent).
template <typename T>
struct InequalityCheck {
    std::string name;
    std::optional<T> lower;
    T value;
    std::optional<T> upper;

    bool holds() const
    {
        return (!lower || *lower <= value) && (!upper || value <= *upper);
    }
};

/// The theta bounds in terms of J integrals and the gap constants.
template <typename T>
std::vector<InequalityCheck<T>> theta_inequalities(const BoundDiagnostics<T>& b,
                                                   const GapConstants<T>& g)
{
    using std::exp;
    using std::log;
    const T d = b.delta;
    const T n = T(static_cast<long>(b.n));
    const T n1 = T(static_cast<long>(b.n1));
    const T inf = infinity<T>();
    std::vector<InequalityCheck<T>> out;
    auto log1m = [](const T& x) { return T(-detail::neg_log_one_minus_exp(x)); };
    out.push_back({"theta1",
                   J_integral(T(1), T(2), T(d * g.upper * (T(2) * n1 + T(1)))) +
                       log1m(T(d * g.upper * (n1 + T(1) - n) * (T(2) * n1 + T(1)))),
                   b.theta1,
                   J_integral(T(0), inf, T(d * g.lower * n1)) +
                       log1m(T(d * g.lower * (n1 + T(1) - n) * (n1 + T(1))))});
    if (b.n > 1) {
        out.push_back({"theta2", J_integral(T(1), T(2), T(d * g.upper * (T(2) * n - T(1)))),
                       b.theta2, J_integral(T(0), inf, T(d * g.lower * (n + T(1))))});
    }
    if (b.n < b.n1) {
        out.push_back({"theta3", J_integral(T(1), T(2), T(d * g.upper * (n1 + n + T(1)))),
                       b.theta3, J_integral(T(0), inf, T(d * g.lower * (T(2) * n + T(1))))});
    }
    return out;
}

/// M_phi = exp(2 (J_{0,inf}(2 upsilon Delta_min) + J_{0,inf}(3 upsilon Delta_min))).
template <typename T>
T lagrange_bound_constant(const T& upsilon, const T& delta_min)
{
    using std::exp;
    const T inf = infinity<T>();
    return exp(T(2) * (J_integral(T(0), inf, T(T(2) * upsilon * delta_min)) +
                       J_integral(T(0), inf, T(T(3) * upsilon * delta_min))));
}

/// xi4 * Delta * e^{-Delta lambda_{N1}}.
template <typename T>
T scaled_xi4(const BoundDiagnostics<T>& b, const Vector<T>& lambda)
{
    using std::exp;
    return b.xi4 * b.delta * exp(-b.delta * lambda[b.n1 - 1]);
}

template <typename T>
struct EnvelopeFit {
    T rho;       // decay rate: log(|K| Delta) ~ -rho Delta + log(zeta)
    T zeta;
    T log_zeta;
};

/// Least-squares fit of log|K| + log Delta against -rho Delta + log zeta.
template <typename T>
EnvelopeFit<T> envelope_fit(const Vector<T>& deltas, const Vector<T>& values)
{
    using std::abs;
    using std::exp;
    using std::log;
    if (deltas.size() != values.size()) {
        throw DimensionMismatch("envelope_fit: lengths differ");
    }
    if (deltas.size() < 5) {
        throw InsufficientData("envelope_fit: need at least 5 step sizes");
    }
    Matrix<T> a(deltas.size(), 2);
    Vector<T> b(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (values[i] == T(0) || !(deltas[i] > T(0))) {
            throw DomainError("envelope_fit: values must be nonzero and steps positive");
        }
        a(i, 0) = -deltas[i];
        a(i, 1) = T(1);
        b[i] = log(T(abs(values[i]))) + log(deltas[i]);
    }
    const auto x = least_squares(a, b);
    return {x[0], T(exp(x[1])), x[1]};
}

} // namespace rdid
