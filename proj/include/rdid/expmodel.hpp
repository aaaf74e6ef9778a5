#pragma once

// Sampled exponential sums with a small structured tail,
//   y(t_k) = sum_{n<N1} y_n e^{-lambda_n k Delta} + eps * sum_{tail} y_m e^{-lambda_m k Delta},
// the residual map of an N1-term candidate against such data, its Jacobian,
// and a Newton solver for the candidate that reproduces the data exactly.

#include "errors.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "real.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace rdid {

template <typename T>
struct ExponentialModel {
    Vector<T> main_lambda;
    Vector<T> main_y;
    Vector<T> tail_lambda;
    Vector<T> tail_y;
    T epsilon = T(0);
    // Optional ratio bounds; zero means "not enforced".
    T m_c = T(0);
    T m_z = T(0);
    T m_y = T(0);

    std::size_t n1() const noexcept { return main_lambda.size(); }
    std::size_t n2() const noexcept { return tail_lambda.size(); }

    void validate() const
    {
        using std::abs;
        if (main_y.size() != main_lambda.size() || tail_y.size() != tail_lambda.size()) {
            throw DimensionMismatch("model: amplitude and rate lists differ in length");
        }
        if (n1() == 0) {
            throw InvalidInput("model: N1 must be at least 1");
        }
        if (epsilon < T(0)) {
            throw DomainError("model: epsilon must be non-negative");
        }
        Vector<T> all = main_lambda;
        all.insert(all.end(), tail_lambda.begin(), tail_lambda.end());
        for (std::size_t i = 1; i < all.size(); ++i) {
            if (!(all[i] > all[i - 1])) {
                throw InvalidInput("model: decay rates must be strictly increasing");
            }
        }
        for (std::size_t n = 0; n < n1(); ++n) {
            if (main_y[n] == T(0)) {
                throw InvalidInput("model: main amplitude " + std::to_string(n + 1) + " is zero");
            }
        }
        if (m_y > T(0)) {
            for (const auto& yt : tail_y) {
                for (const auto& ym : main_y) {
                    if (abs(yt) > m_y * abs(ym)) {
                        throw InvalidInput("model: tail/main amplitude ratio exceeds M_y");
                    }
                }
            }
        }
    }

    /// phi_n = e^{-lambda_n Delta} for main followed by tail components.
    Vector<T> nodes_for(const T& delta) const
    {
        using std::exp;
        Vector<T> phi;
        for (const auto& l : main_lambda) {
            phi.push_back(exp(-l * delta));
        }
        for (const auto& l : tail_lambda) {
            phi.push_back(exp(-l * delta));
        }
        return phi;
    }

    /// lambda_n = n^2, y_n = 1 for n = 1..N1+N2.
    static ExponentialModel squares(std::size_t n1, std::size_t n2, const T& eps)
    {
        ExponentialModel m;
        for (std::size_t n = 1; n <= n1 + n2; ++n) {
            const T l = T(static_cast<long>(n * n));
            if (n <= n1) {
                m.main_lambda.push_back(l);
                m.main_y.push_back(T(1));
            } else {
                m.tail_lambda.push_back(l);
                m.tail_y.push_back(T(1));
            }
        }
        m.epsilon = eps;
        return m;
    }
};

template <typename T>
struct SampleGrid {
    T delta;
    std::size_t count;

    SampleGrid(const T& d, std::size_t c) : delta(d), count(c)
    {
        if (!(delta > T(0))) {
            throw DomainError("sample step must be positive");
        }
        if (count == 0) {
            throw InvalidInput("sample count must be positive");
        }
    }

    static SampleGrid minimal(const T& d, std::size_t n1) { return SampleGrid(d, 2 * n1); }

    T t(std::size_t k) const { return T(static_cast<long>(k)) * delta; }
};

/// Interleaved (y_1, lambda_1, y_2, lambda_2, ...), 0-based accessors.
template <typename T>
struct CandidateParameters {
    Vector<T> values;

    CandidateParameters() = default;
    explicit CandidateParameters(std::size_t n1) : values(2 * n1, T(0)) {}

    static CandidateParameters from_main(const ExponentialModel<T>& m)
    {
        CandidateParameters c(m.n1());
        for (std::size_t n = 0; n < m.n1(); ++n) {
            c.y(n) = m.main_y[n];
            c.lambda(n) = m.main_lambda[n];
        }
        return c;
    }

    std::size_t n1() const noexcept { return values.size() / 2; }
    T& y(std::size_t n) { return values[2 * n]; }
    const T& y(std::size_t n) const { return values[2 * n]; }
    T& lambda(std::size_t n) { return values[2 * n + 1]; }
    const T& lambda(std::size_t n) const { return values[2 * n + 1]; }

    bool strictly_increasing() const
    {
        for (std::size_t n = 1; n < n1(); ++n) {
            if (!(lambda(n) > lambda(n - 1))) {
                return false;
            }
        }
        return true;
    }
};

template <typename T>
struct Synthesis {
    Vector<T> total;
    Vector<T> main;
    Vector<T> tail;  // without the eps factor
};

template <typename T>
Synthesis<T> synthesize(const ExponentialModel<T>& model, const SampleGrid<T>& grid)
{
    using std::exp;
    Synthesis<T> s{Vector<T>(grid.count, T(0)), Vector<T>(grid.count, T(0)),
                   Vector<T>(grid.count, T(0))};
    for (std::size_t k = 0; k < grid.count; ++k) {
        const T t = grid.t(k);
        for (std::size_t n = 0; n < model.n1(); ++n) {
            s.main[k] += model.main_y[n] * exp(-model.main_lambda[n] * t);
        }
        for (std::size_t m = 0; m < model.n2(); ++m) {
            s.tail[k] += model.tail_y[m] * exp(-model.tail_lambda[m] * t);
        }
        s.total[k] = model.epsilon == T(0) ? s.main[k] : T(s.main[k] + model.epsilon * s.tail[k]);
    }
    return s;
}

/// F_k = sum_n yhat_n e^{-lambdahat_n Delta k} - data_k, k < 2 N1.
template <typename T>
Vector<T> residual(const CandidateParameters<T>& c, const Vector<T>& data, const SampleGrid<T>& grid)
{
    using std::exp;
    if (data.size() != 2 * c.n1() || grid.count != data.size()) {
        throw DimensionMismatch("residual: need 2*N1 samples");
    }
    Vector<T> f(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) {
        T s(0);
        for (std::size_t n = 0; n < c.n1(); ++n) {
            s += c.y(n) * exp(-c.lambda(n) * grid.t(k));
        }
        f[k] = s - data[k];
    }
    return f;
}

/// dF_k/dyhat_n = e^{-lambdahat_n t_k},  dF_k/dlambdahat_n = -t_k yhat_n e^{-lambdahat_n t_k}.
template <typename T>
Matrix<T> jacobian(const CandidateParameters<T>& c, const SampleGrid<T>& grid)
{
    using std::exp;
    Matrix<T> j(grid.count, 2 * c.n1());
    for (std::size_t k = 0; k < grid.count; ++k) {
        const T t = grid.t(k);
        for (std::size_t n = 0; n < c.n1(); ++n) {
            const T e = exp(-c.lambda(n) * t);
            j(k, 2 * n) = e;
            j(k, 2 * n + 1) = -t * c.y(n) * e;
        }
    }
    return j;
}

/// Solves J x = b for a square Jacobian of the form above. Columns are
/// processed in order of increasing node e^{-lambda Delta} (largest rate
/// first), which makes elimination without pivoting accurate; falls back to
/// partial pivoting if that order meets a zero pivot.
template <typename T>
Vector<T> solve_jacobian_system(const Matrix<T>& j, const Vector<T>& b, const Vector<T>& rates)
{
    const std::size_t n1 = rates.size();
    if (!j.square() || j.cols() != 2 * n1) {
        throw DimensionMismatch("Jacobian must be 2N1 x 2N1");
    }
    std::vector<std::size_t> order(n1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return rates[a] > rates[c]; });
    std::vector<std::size_t> cols;
    for (auto n : order) {
        cols.push_back(2 * n);
        cols.push_back(2 * n + 1);
    }
    Matrix<T> p(j.rows(), j.cols());
    for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            p(r, c) = j(r, cols[c]);
        }
    }
    Vector<T> xp;
    try {
        xp = solve_without_pivoting(p, b);
    } catch (const SingularMatrix&) {
        try {
            xp = solve_linear(p, b);
        } catch (const SingularMatrix& e) {
            throw SingularJacobian(e.what());
        }
    }
    Vector<T> x(xp.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        x[cols[c]] = xp[c];
    }
    for (const auto& v : x) {
        if (!is_finite(v)) {
            throw SingularJacobian("Jacobian solve produced non-finite values");
        }
    }
    return x;
}

template <typename T>
struct NewtonResult {
    CandidateParameters<T> estimate;
    // estimate minus the true main parameters, accurate even where the
    // difference is below the resolution of the estimate itself
    CandidateParameters<T> offset;
    int steps = 0;
    T residual_norm = T(0);
};

/// Newton iteration for the eps-approximation: the N1-term candidate whose
/// first 2 N1 samples coincide with the model's noisy samples, on the branch
/// through the true main parameters.
///
/// The unknowns are carried as offsets from the true parameters and the
/// residual is formed without subtracting nearly equal samples, so offsets far
/// below the magnitude of lambda are still resolved.
template <typename T>
NewtonResult<T> solve_eps_approximation(const ExponentialModel<T>& model, const SampleGrid<T>& grid,
                                        const CandidateParameters<T>* start = nullptr)
{
    using std::abs;
    using std::exp;
    model.validate();
    const std::size_t n1 = model.n1();
    if (grid.count != 2 * n1) {
        throw InvalidInput("eps-approximation needs exactly 2*N1 samples");
    }
    const auto truth = CandidateParameters<T>::from_main(model);
    const auto syn = synthesize(model, grid);
    const T data_norm = norm_inf(syn.total);
    const T tol = pow10<T>(-decimal_digits<T>() + 6) * data_norm;

    Vector<T> dy(n1, T(0)), dl(n1, T(0));
    if (start != nullptr) {
        if (start->n1() != n1) {
            throw DimensionMismatch("starting candidate has wrong order");
        }
        for (std::size_t n = 0; n < n1; ++n) {
            dy[n] = start->y(n) - truth.y(n);
            dl[n] = start->lambda(n) - truth.lambda(n);
        }
    }
    if (model.epsilon == T(0) && start == nullptr) {
        return {truth, CandidateParameters<T>(n1), 0, T(0)};
    }

    auto eval = [&](Vector<T>& r) {
        r.assign(2 * n1, T(0));
        for (std::size_t k = 0; k < 2 * n1; ++k) {
            const T t = grid.t(k);
            T s(0);
            for (std::size_t n = 0; n < n1; ++n) {
                const T base = model.main_y[n] * exp(-model.main_lambda[n] * t);
                const T shift = -dl[n] * t;
                s += dy[n] * exp(-model.main_lambda[n] * t) * exp(shift) + base * expm1_(shift);
            }
            r[k] = s - model.epsilon * syn.tail[k];
        }
        return norm_inf(r);
    };
    auto current = [&]() {
        CandidateParameters<T> c(n1);
        for (std::size_t n = 0; n < n1; ++n) {
            c.y(n) = truth.y(n) + dy[n];
            c.lambda(n) = truth.lambda(n) + dl[n];
        }
        return c;
    };
    auto step = [&](const Vector<T>& r) {
        const auto c = current();
        Vector<T> rates(n1);
        for (std::size_t n = 0; n < n1; ++n) {
            rates[n] = c.lambda(n);
        }
        auto rhs = r;
        for (auto& v : rhs) {
            v = -v;
        }
        const auto upd = solve_jacobian_system(jacobian(c, grid), rhs, rates);
        for (std::size_t n = 0; n < n1; ++n) {
            dy[n] += upd[2 * n];
            dl[n] += upd[2 * n + 1];
        }
    };

    Vector<T> r;
    T norm = eval(r);
    T prev = norm;
    int increases = 0;
    int steps = 0;
    while (!(norm <= tol)) {
        if (steps >= 50) {
            throw NewtonDiverged("Newton: no convergence within 50 steps");
        }
        step(r);
        ++steps;
        norm = eval(r);
        if (!is_finite(norm)) {
            throw NewtonDiverged("Newton: residual became non-finite");
        }
        increases = norm > prev ? increases + 1 : 0;
        if (increases >= 5) {
            throw NewtonDiverged("Newton: residual increased over 5 consecutive steps");
        }
        prev = norm;
    }
    // one polishing step after the stopping test
    step(r);
    ++steps;
    norm = eval(r);

    auto est = current();
    if (!est.strictly_increasing()) {
        throw NewtonDiverged("Newton: decay rates lost their ordering");
    }
    CandidateParameters<T> off(n1);
    for (std::size_t n = 0; n < n1; ++n) {
        off.y(n) = dy[n];
        off.lambda(n) = dl[n];
    }
    return {est, off, steps, norm};
}

} // namespace rdid
