#include "oracles.hpp"

#include <rdid/conditioning.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace rdid;

namespace {

template <typename T>
double rel(const T& a, const T& b)
{
    using std::abs;
    return to_double(T(abs(T(a - b)) / abs(b)));
}

} // namespace

TEST(ClosedForm, SingleModeExamples)
{
    ExponentialModel<double> m;
    m.main_lambda = {1.0};
    m.main_y = {1.0};
    m.tail_lambda = {4.0};
    m.tail_y = {1.0};
    const auto r = condition_closed_form(m, 1.0);
    EXPECT_DOUBLE_EQ(r.k_y[0], 1.0);
    const double p1 = std::exp(-1.0), p2 = std::exp(-4.0);
    EXPECT_NEAR(r.k_lambda[0], -(p2 - p1) / p1, 1e-15);
    EXPECT_NEAR(r.k_lambda[0], 0.95021, 1e-5);

    m.tail_y = {0.0};
    const auto z = condition_closed_form(m, 1.0);
    EXPECT_EQ(z.k_y[0], 0.0);
    EXPECT_EQ(z.k_lambda[0], 0.0);
}

TEST(ClosedForm, RejectsSeveralTailTerms)
{
    EXPECT_THROW(condition_closed_form(ExponentialModel<double>::squares(2, 2, 0.0), 1.0),
                 InvalidInput);
}

TEST(ClosedForm, CollidingNodes)
{
    ExponentialModel<double> m;
    m.main_lambda = {1.0, 1.0 + 1e-13};
    m.main_y = {1.0, 1.0};
    m.tail_lambda = {4.0};
    m.tail_y = {1.0};
    EXPECT_THROW(condition_closed_form(m, 1.0), DuplicateNodes);
}

TEST(RouteAgreement, HighPrecisionSweep)
{
    using T = Real32;
    for (std::size_t n1 : {2u, 3u, 4u}) {
        const auto m = ExponentialModel<T>::squares(n1, 1, T(0));
        for (int i = 1; i <= 40; ++i) {
            const T delta = T(i) / T(10);
            const auto a = condition_closed_form(m, delta);
            const auto b = condition_linear_solve(m, delta);
            for (std::size_t n = 0; n < n1; ++n) {
                EXPECT_LT(rel(b.k_y[n], a.k_y[n]), 1e-24) << n1 << " " << i;
                EXPECT_LT(rel(b.k_lambda[n], a.k_lambda[n]), 1e-24) << n1 << " " << i;
            }
        }
    }
}

TEST(LinearSolve, ZeroSecondTailTerm)
{
    auto m2 = ExponentialModel<double>::squares(3, 2, 0.0);
    m2.tail_y[1] = 0.0;
    const auto m1 = ExponentialModel<double>::squares(3, 1, 0.0);
    const auto a = condition_linear_solve(m2, 0.8);
    const auto b = condition_linear_solve(m1, 0.8);
    for (std::size_t n = 0; n < 3; ++n) {
        EXPECT_EQ(a.k_y[n], b.k_y[n]);
        EXPECT_EQ(a.k_lambda[n], b.k_lambda[n]);
    }
}

TEST(LinearSolve, SquaresOrderingAndDecay)
{
    using T = Real32;
    const auto m = ExponentialModel<T>::squares(4, 1, T(0));
    Vector<T> prev;
    for (int i = 2; i <= 8; ++i) {
        const T delta = T(i) / T(2);
        const auto r = condition_linear_solve(m, delta);
        for (std::size_t n = 0; n + 1 < 4; ++n) {
            EXPECT_LT(abs(r.k_lambda[n]), abs(r.k_lambda[n + 1])) << i;
        }
        if (!prev.empty()) {
            for (std::size_t n = 0; n < 4; ++n) {
                EXPECT_LT(abs(r.k_lambda[n]), abs(prev[n])) << i;
            }
        }
        prev = r.k_lambda;
    }
}

TEST(ConditionPoint, ReliabilityFlag)
{
    using T = Real32;
    const auto m = ExponentialModel<T>::squares(4, 1, T(0));
    const auto good = condition_point(m, T(1));
    EXPECT_TRUE(good.reliable);
    EXPECT_LT(to_double(good.disagreement), 1e-20);

    // double precision, far past the resolvable range of the smallest node
    const auto md = ExponentialModel<double>::squares(4, 1, 0.0);
    const auto bad = condition_point(md, 6.0);
    EXPECT_FALSE(bad.reliable);

    const auto m2 = ExponentialModel<T>::squares(4, 2, T(0));
    EXPECT_TRUE(condition_point(m2, T(1)).reliable);
}

TEST(DerivativeConsistency, NewtonQuotientMatchesBothRoutes)
{
    using T = Real32;
    auto m = ExponentialModel<T>::squares(3, 1, T("1e-6"));
    for (const char* d : {"0.5", "1.5", "3", "4"}) {
        const T delta(d);
        const auto r = solve_eps_approximation(m, SampleGrid<T>::minimal(delta, 3));
        const auto a = condition_closed_form(m, delta);
        for (std::size_t n = 0; n < 3; ++n) {
            const T q = r.offset.lambda(n) / m.epsilon;
            const T qy = r.offset.y(n) / m.epsilon;
            EXPECT_LT(rel(q, a.k_lambda[n]), 1e-4) << d << " " << n;
            EXPECT_LT(rel(qy, a.k_y[n]), 1e-4) << d << " " << n;
        }
    }
}

TEST(JIntegral, Examples)
{
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(J_integral(0.0, inf, 1.0), M_PI * M_PI / 6, 1e-14);
    EXPECT_NEAR(J_integral(0.0, inf, 1.0), 1.6449341, 1e-7);
    EXPECT_LT(J_integral(0.0, inf, 2.0), J_integral(0.0, inf, 1.0));
    EXPECT_LT(J_integral(1.0, 2.0, 50.0), 1e-20);
    EXPECT_GT(J_integral(1.0, 2.0, 50.0), 0.0);
    EXPECT_THROW(J_integral(2.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(J_integral(0.0, 1.0, 0.0), DomainError);
}

TEST(JIntegral, MatchesQuadrature)
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double w1 = 0.05 + 2.0 * u(rng);
        const double w2 = w1 + 0.1 + 3.0 * u(rng);
        const double alpha = 0.2 + 3.0 * u(rng);
        const double q = oracle::adaptive_simpson(
            [alpha](double x) { return -std::log1p(-std::exp(-alpha * x)); }, w1, w2, 1e-14);
        EXPECT_NEAR(J_integral(w1, w2, alpha), q, 1e-10 * std::max(1.0, std::abs(q)));
    }
}

TEST(BoundDiagnostics, Examples)
{
    EXPECT_EQ(sigma_index(1, 2), 3);
    for (long n1 = 1; n1 <= 7; ++n1) {
        for (long n = 1; n <= n1; ++n) {
            long s = 0;
            for (long j = n + 1; j <= n1; ++j) {
                s += j * j - n * n;
            }
            EXPECT_EQ(sigma_index(n, n1), s);
        }
    }
    const Vector<double> lam{1, 4, 9};
    const auto b = bound_diagnostics(lam, 1, 2, 1.0);
    EXPECT_NEAR(b.xi4, 1.0 / (std::exp(-1.0) - std::exp(-4.0)), 1e-14);
    EXPECT_NEAR(b.xi4, 2.86071, 1e-5);
    EXPECT_EQ(b.xi2, 1.0);
    EXPECT_EQ(b.theta2, 0.0);
    EXPECT_THROW(bound_diagnostics(lam, 3, 3, 1.0), InvalidInput);
}

TEST(BoundDiagnostics, IdentitiesAndInequalities)
{
    using T = Real32;
    for (std::size_t n1 : {3u, 4u, 5u}) {
        Vector<T> lam;
        for (std::size_t j = 1; j <= n1 + 1; ++j) {
            lam.push_back(T(static_cast<long>(j * j)));
        }
        const auto g = estimate_gap_constants(lam);
        const T m_phi = lagrange_bound_constant(g.lower, T("0.25"));
        for (const char* d : {"0.5", "1", "2", "4"}) {
            const T delta(d);
            for (std::size_t n = 1; n <= n1; ++n) {
                const auto b = bound_diagnostics(lam, n, n1, delta);
                for (const auto& r : b.identity_residual) {
                    EXPECT_LT(to_double(r), 1e-25);
                }
                EXPECT_GT(b.xi1, T(0));
                EXPECT_GT(b.theta1, T(0));
                for (const auto& c : theta_inequalities(b, g)) {
                    EXPECT_TRUE(c.holds()) << c.name << " n1=" << n1 << " n=" << n << " d=" << d;
                }
                if (n < n1) {
                    using std::exp;
                    const T scaled = b.lagrange_sq * exp(T(2) * delta * g.lower * T(b.sigma));
                    EXPECT_LE(scaled, m_phi) << n1 << " " << n << " " << d;
                }
            }
        }
    }
}

TEST(BoundDiagnostics, ScaledXi4IsBoundedAndStable)
{
    using T = Real32;
    for (std::size_t n1 : {3u, 4u, 5u}) {
        Vector<T> lam;
        for (std::size_t j = 1; j <= n1 + 1; ++j) {
            lam.push_back(T(static_cast<long>(j * j)));
        }
        auto sup = [&](int steps) {
            T best(0);
            for (int i = 0; i <= steps; ++i) {
                const T delta = T("0.25") + T("3.75") * T(i) / T(steps);
                for (std::size_t n = 1; n <= n1; ++n) {
                    best = std::max(best, scaled_xi4(bound_diagnostics(lam, n, n1, delta), lam));
                }
            }
            return best;
        };
        const T coarse = sup(60);
        const T fine = sup(240);
        EXPECT_TRUE(is_finite(fine));
        EXPECT_LT(rel(coarse, fine), 1e-2);
    }
}

TEST(EnvelopeFit, ExactModel)
{
    Vector<double> d, k;
    for (int i = 1; i <= 8; ++i) {
        d.push_back(0.5 * i);
        k.push_back(3.0 * std::exp(-2.0 * d.back()) / d.back());
    }
    const auto f = envelope_fit(d, k);
    EXPECT_NEAR(f.rho, 2.0, 1e-6);
    EXPECT_NEAR(f.zeta, 3.0, 1e-6);
    EXPECT_THROW(envelope_fit(Vector<double>{1, 2, 3, 4}, Vector<double>{1, 2, 3, 4}),
                 InsufficientData);
}

TEST(EnvelopeFit, SquaresConfigurationDecays)
{
    using T = Real32;
    const auto m = ExponentialModel<T>::squares(4, 1, T(0));
    std::vector<Vector<T>> kl(4);
    Vector<T> deltas;
    for (int i = 2; i <= 8; ++i) {
        const T delta = T(i) / T(2);
        const auto r = condition_linear_solve(m, delta);
        deltas.push_back(delta);
        for (std::size_t n = 0; n < 4; ++n) {
            kl[n].push_back(r.k_lambda[n]);
        }
    }
    std::vector<T> rho;
    for (std::size_t n = 0; n < 4; ++n) {
        rho.push_back(envelope_fit(deltas, kl[n]).rho);
        EXPECT_GT(rho.back(), T(0)) << n;
    }
    EXPECT_GT(rho[0], rho[3]);
}
