#include <rdid/conditioning.hpp>
#include <rdid/esprit.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace rdid;

namespace {

template <typename T>
double rel(const T& a, const T& b)
{
    using std::abs;
    return to_double(T(abs(T(a - b)) / abs(b)));
}

template <typename T>
ExponentialModel<T> random_model(std::mt19937_64& rng, std::size_t n1)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ExponentialModel<T> m;
    double l = 0.1 + 0.9 * u(rng);
    for (std::size_t n = 0; n < n1; ++n) {
        m.main_lambda.push_back(T(l));
        m.main_y.push_back(T(0.5 + 1.5 * u(rng)));
        l += 0.5 + u(rng);
    }
    m.tail_lambda = {T(l + 1.0)};
    m.tail_y = {T(1)};
    return m;
}

} // namespace

TEST(EspritFit, TwoNodeExample)
{
    Vector<double> s(4);
    for (std::size_t k = 0; k < 4; ++k) {
        s[k] = std::pow(0.5, k) + std::pow(0.25, k);
    }
    const auto fit = esprit_fit(s, FitConfig<double>{2, 1.0});
    const auto r = match_fit(fit, Vector<double>{std::log(2.0), std::log(4.0)});
    EXPECT_NEAR(std::exp(-r.lambda[0]), 0.5, 1e-12);
    EXPECT_NEAR(std::exp(-r.lambda[1]), 0.25, 1e-12);
    EXPECT_NEAR(r.y[0], 1.0, 1e-12);
    EXPECT_NEAR(r.y[1], 1.0, 1e-12);
}

TEST(EspritFit, SingleNodeRatio)
{
    const double a = 2.5, phi = 0.3;
    const auto fit = esprit_fit(Vector<double>{a, a * phi}, FitConfig<double>{1, 0.7});
    EXPECT_NEAR(fit.phi[0], phi, 1e-15);
    EXPECT_NEAR(fit.y[0], a, 1e-14);
    EXPECT_NEAR(fit.lambda[0], -std::log(phi) / 0.7, 1e-14);
}

TEST(EspritFit, Errors)
{
    EXPECT_THROW(esprit_fit(Vector<double>{1, 2, 3}, FitConfig<double>{2, 1.0}), InsufficientData);
    EXPECT_THROW(esprit_fit(Vector<double>{1, -0.5}, FitConfig<double>{1, 1.0}), NonPositiveNode);
    // cos(k pi/2): nodes +-i
    EXPECT_THROW(esprit_fit(Vector<double>{1, 0, -1, 0}, FitConfig<double>{2, 1.0}), ComplexNodes);
    EXPECT_THROW(esprit_fit(Vector<double>{1, 0.5}, FitConfig<double>{0, 1.0}), InvalidInput);
}

TEST(IndexMatch, Examples)
{
    const auto p = index_match(Vector<double>{4.1, 0.9}, Vector<double>{1, 4});
    EXPECT_EQ(p, (std::vector<std::size_t>{1, 0}));
    const auto id = index_match(Vector<double>{1, 2, 3}, Vector<double>{1, 2, 3});
    EXPECT_EQ(id, (std::vector<std::size_t>{0, 1, 2}));

    const Vector<double> est{2.0, 2.0 + 1e-9}, truth{2.0 + 1e-9, 2.0};
    const auto q = index_match(est, truth);
    EXPECT_EQ(q, (std::vector<std::size_t>{0, 1}));
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(std::abs(est[q[i]] - truth[i]), 1e-9, 1e-15);
    }
    EXPECT_THROW(index_match(Vector<double>{1}, Vector<double>{1, 2}), DimensionMismatch);
}

TEST(RescaledErrors, Examples)
{
    const Vector<double> l{1, 4}, y{1, 1};
    const auto [el, ey] = rescaled_errors(l, y, l, y, 0.1);
    for (std::size_t n = 0; n < 2; ++n) {
        EXPECT_EQ(el[n], 0.0);
        EXPECT_EQ(ey[n], 0.0);
    }
    const auto [el2, ey2] = rescaled_errors(Vector<double>{1.001, 4}, y, l, y, 0.1);
    EXPECT_NEAR(el2[0], 1e-2, 1e-14);
    EXPECT_THROW(rescaled_errors(l, y, l, y, 0.0), DivideByZero);
}

TEST(EspritFit, NoiselessExactnessDouble)
{
    std::mt19937_64 rng(5);
    for (std::size_t n1 = 1; n1 <= 4; ++n1) {
        for (int trial = 0; trial < 40; ++trial) {
            const auto m = random_model<double>(rng, n1);
            const auto grid = SampleGrid<double>::minimal(0.5, n1);
            const auto fit = esprit_fit(synthesize(m, grid).total, FitConfig<double>{n1, 0.5});
            const auto r = match_fit(fit, m.main_lambda);
            for (std::size_t n = 0; n < n1; ++n) {
                EXPECT_LT(rel(r.lambda[n], m.main_lambda[n]), 1e-9) << n1 << " " << trial;
                EXPECT_LT(rel(r.y[n], m.main_y[n]), 1e-9) << n1 << " " << trial;
            }
        }
    }
}

TEST(EspritFit, NoiselessErrorStaysWithinRoundingFloor)
{
    std::mt19937_64 rng(15);
    for (std::size_t n1 = 1; n1 <= 6; ++n1) {
        for (int trial = 0; trial < 40; ++trial) {
            const auto m = random_model<double>(rng, n1);
            const auto grid = SampleGrid<double>::minimal(0.5, n1);
            const auto s = synthesize(m, grid).total;
            const auto floor = roundoff_floor(CandidateParameters<double>::from_main(m), grid, s);
            const auto r = match_fit(esprit_fit(s, FitConfig<double>{n1, 0.5}), m.main_lambda);
            for (std::size_t n = 0; n < n1; ++n) {
                EXPECT_LE(std::abs(r.lambda[n] - m.main_lambda[n]), 4 * floor[2 * n + 1])
                    << n1 << " " << trial;
                EXPECT_LE(std::abs(r.y[n] - m.main_y[n]), 4 * floor[2 * n]) << n1 << " " << trial;
            }
        }
    }
}

TEST(EspritFit, NoiselessExactnessHighPrecision)
{
    using T = Real32;
    std::mt19937_64 rng(6);
    for (std::size_t n1 = 1; n1 <= 6; ++n1) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto m = random_model<T>(rng, n1);
            const auto grid = SampleGrid<T>::minimal(T("0.5"), n1);
            const auto fit = esprit_fit(synthesize(m, grid).total, FitConfig<T>{n1, T("0.5")});
            const auto r = match_fit(fit, m.main_lambda);
            for (std::size_t n = 0; n < n1; ++n) {
                EXPECT_LT(rel(r.lambda[n], m.main_lambda[n]), 1e-20) << n1 << " " << trial;
                EXPECT_LT(rel(r.y[n], m.main_y[n]), 1e-20) << n1 << " " << trial;
            }
        }
    }
}

TEST(EspritFit, PermutationInvariance)
{
    std::mt19937_64 rng(11);
    const auto m = random_model<double>(rng, 4);
    const auto grid = SampleGrid<double>::minimal(0.5, 4);
    const auto base = match_fit(esprit_fit(synthesize(m, grid).total, FitConfig<double>{4, 0.5}),
                                m.main_lambda);
    std::vector<std::size_t> order{2, 0, 3, 1};
    Vector<double> shuffled(8, 0.0);
    for (std::size_t k = 0; k < 8; ++k) {
        for (auto n : order) {
            shuffled[k] += m.main_y[n] * std::exp(-m.main_lambda[n] * grid.t(k));
        }
    }
    const auto other =
        match_fit(esprit_fit(shuffled, FitConfig<double>{4, 0.5}), m.main_lambda);
    for (std::size_t n = 0; n < 4; ++n) {
        EXPECT_NEAR(other.lambda[n], base.lambda[n], 1e-10 * base.lambda[n]);
        EXPECT_NEAR(other.y[n], base.y[n], 1e-10 * std::abs(base.y[n]));
    }
}

TEST(EspritFit, AmplitudeScaleEquivariance)
{
    std::mt19937_64 rng(12);
    const auto m = random_model<double>(rng, 3);
    const auto s = synthesize(m, SampleGrid<double>::minimal(0.5, 3)).total;
    const auto a = esprit_fit(s, FitConfig<double>{3, 0.5});
    for (double scale : {1e-3, 0.37, 8.0, 1e5}) {
        Vector<double> t = s;
        for (auto& v : t) {
            v *= scale;
        }
        const auto b = esprit_fit(t, FitConfig<double>{3, 0.5});
        const auto ra = match_fit(a, m.main_lambda);
        const auto rb = match_fit(b, m.main_lambda);
        for (std::size_t n = 0; n < 3; ++n) {
            EXPECT_NEAR(rb.lambda[n], ra.lambda[n], 1e-11 * ra.lambda[n]);
            EXPECT_NEAR(rb.y[n], scale * ra.y[n], 1e-11 * scale * std::abs(ra.y[n]));
        }
    }
}

TEST(EspritFit, RescaledErrorTendsToConditionNumber)
{
    using T = Real32;
    const T delta(1);
    auto m = ExponentialModel<T>::squares(3, 1, T(0));
    const auto kappa = condition_linear_solve(m, delta);
    const auto grid = SampleGrid<T>::minimal(delta, 3);
    auto error = [&](const T& eps) {
        m.epsilon = eps;
        const auto r = match_fit(esprit_fit(synthesize(m, grid).total, FitConfig<T>{3, delta}),
                                 m.main_lambda);
        return rescaled_errors(r.lambda, r.y, m.main_lambda, m.main_y, eps);
    };
    const auto coarse = error(T("1e-5"));
    const auto fine = error(T("1e-10"));
    for (std::size_t n = 0; n < 3; ++n) {
        const T target = abs(kappa.k_lambda[n]);
        EXPECT_LT(rel(fine.first[n], target), 1e-6) << n;
        EXPECT_LT(rel(fine.first[n], target), rel(coarse.first[n], target)) << n;
        EXPECT_LT(rel(fine.second[n], T(abs(kappa.k_y[n]))), 1e-6) << n;
    }
}

TEST(EspritFit, ReliabilityFlagsFollowDelta)
{
    using T = Real32;
    const auto m = ExponentialModel<T>::squares(4, 1, T("0.1"));
    const auto near = esprit_reliability(m, T(1), condition_linear_solve(m, T(1)));
    for (bool b : near) {
        EXPECT_TRUE(b);
    }
    const auto far = esprit_reliability(m, T(8), condition_linear_solve(m, T(8)));
    EXPECT_FALSE(far.back());
}

TEST(Subsample, StrideAndBounds)
{
    Vector<double> s(20);
    for (std::size_t i = 0; i < 20; ++i) {
        s[i] = static_cast<double>(i);
    }
    const auto t = subsample(s, 3, 4, 1);
    EXPECT_EQ(t, (Vector<double>{1, 4, 7, 10}));
    EXPECT_THROW(subsample(s, 7, 4), InsufficientData);
    EXPECT_THROW(subsample(s, 0, 4), InvalidInput);
}
