#include <rdid/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace rdid;

TEST(AnalyticSpectrum, Examples)
{
    const double pi2 = M_PI * M_PI;
    auto s = analytic_spectrum(0.1, 0.1, 2);
    EXPECT_NEAR(s.eigenvalues[0], 0.1 * pi2 - 0.1, 1e-15);
    EXPECT_NEAR(s.eigenvalues[0], 0.886960, 1e-6);
    EXPECT_NEAR(s.eigenvalues[1] - s.eigenvalues[0], 3 * 0.1 * pi2, 1e-14);
    s = analytic_spectrum(1.0, 0.0, 2);
    EXPECT_NEAR(s.eigenvalues[1], 4 * pi2, 1e-13);
    EXPECT_GT(s.eigenfunctions[0][0], 0.0);
    EXPECT_NEAR(grid_inner_product(s.eigenfunctions[0], s.eigenfunctions[0], s.h), 1.0, 1e-13);
    EXPECT_THROW(analytic_spectrum(0.0, 0.0, 1), DomainError);
}

TEST(FdSpectrum, ConvergesToAnalytic)
{
    const auto lap = SturmLiouvilleProblem<double>::constant_coefficients(1.0, 0.0);
    const auto s = fd_spectrum(lap, 200, 3);
    EXPECT_LT(std::abs(s.eigenvalues[0] - M_PI * M_PI) / (M_PI * M_PI), 1e-3);

    const auto rd = SturmLiouvilleProblem<double>::constant_coefficients(0.1, 0.1);
    const auto r = fd_spectrum(rd, 200, 3);
    EXPECT_NEAR(r.eigenvalues[0], 0.886960, 1e-3);
}

TEST(FdSpectrum, ConstantShift)
{
    const auto a = fd_spectrum(SturmLiouvilleProblem<double>::constant_coefficients(1.0, 0.0), 80, 5);
    const auto b = fd_spectrum(SturmLiouvilleProblem<double>::constant_coefficients(1.0, -5.0), 80, 5);
    for (std::size_t n = 0; n < 5; ++n) {
        EXPECT_NEAR(b.eigenvalues[n], a.eigenvalues[n] + 5.0, 1e-9);
    }
}

TEST(FdSpectrum, SecondOrderConvergence)
{
    const auto lap = SturmLiouvilleProblem<double>::constant_coefficients(1.0, 0.0);
    std::vector<double> err;
    for (std::size_t nx : {49u, 99u, 199u}) {
        // N_x + 1 = 50, 100, 200 keeps h halving exactly
        err.push_back(std::abs(fd_spectrum(lap, nx, 1).eigenvalues[0] - M_PI * M_PI));
    }
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.05);
    EXPECT_NEAR(err[1] / err[2], 4.0, 0.05);
}

TEST(FdSpectrum, ResolutionLimit)
{
    const auto lap = SturmLiouvilleProblem<double>::constant_coefficients(1.0, 0.0);
    EXPECT_THROW(fd_spectrum(lap, 60, 31), ResolutionError);
    EXPECT_NO_THROW(fd_spectrum(lap, 60, 30));
}

TEST(FdSpectrum, VariableCoefficientsOrthonormalAndBounded)
{
    const auto prob = SturmLiouvilleProblem<double>::from_functions(
        [](const double& x) { return 1.0 + 0.5 * std::sin(3.0 * x); },
        [](const double& x) { return 2.0 * x - 1.0; });
    const std::size_t nx = 60;
    const auto s = fd_spectrum(prob, nx, 8);
    for (std::size_t n = 0; n < 8; ++n) {
        if (n > 0) {
            EXPECT_LT(s.eigenvalues[n - 1], s.eigenvalues[n]);
        }
        EXPECT_GT(s.eigenfunctions[n][0], 0.0);
        for (std::size_t m = 0; m < 8; ++m) {
            const double ip = grid_inner_product(s.eigenfunctions[n], s.eigenfunctions[m], s.h);
            EXPECT_NEAR(ip, n == m ? 1.0 : 0.0, 1e-6);
        }
        const auto [lo, hi] = eigenvalue_bounds(prob, n + 1);
        // the discrete spectrum sits below the continuous one by O((n pi h)^2)
        const double slack = std::pow((n + 1) * M_PI * s.h, 2) / 8.0 * std::abs(hi);
        EXPECT_GE(s.eigenvalues[n], lo - slack);
        EXPECT_LE(s.eigenvalues[n], hi);
    }
}

TEST(FdSpectrum, HighPrecisionMatchesDiscreteClosedForm)
{
    using T = Real32;
    const T p0("0.1"), q0("0.1");
    const auto s = fd_spectrum(SturmLiouvilleProblem<T>::constant_coefficients(p0, q0), 60, 4);
    for (std::size_t n = 1; n <= 4; ++n) {
        using std::sin;
        const T arg = pi<T>() * T(static_cast<long>(n)) * s.h / T(2);
        const T exact = T(4) * p0 / (s.h * s.h) * sin(arg) * sin(arg) - q0;
        EXPECT_LT(to_double(abs(T(s.eigenvalues[n - 1] - exact))), 1e-25);
    }
}

TEST(GapConstants, Examples)
{
    auto g = estimate_gap_constants(Vector<double>{1, 4, 9, 16});
    EXPECT_DOUBLE_EQ(g.lower, 1.0);
    EXPECT_DOUBLE_EQ(g.upper, 1.0);

    const auto s = analytic_spectrum(0.1, 0.1, 5);
    g = estimate_gap_constants(s);
    EXPECT_NEAR(g.lower, 0.1 * M_PI * M_PI, 1e-14);
    EXPECT_NEAR(g.upper, 0.1 * M_PI * M_PI, 1e-14);

    g = estimate_gap_constants(Vector<double>{1, 5, 11});
    EXPECT_DOUBLE_EQ(g.lower, 6.0 / 5.0);
    EXPECT_DOUBLE_EQ(g.upper, 4.0 / 3.0);

    EXPECT_THROW(estimate_gap_constants(Vector<double>{1}), InsufficientData);
}

TEST(GapConstants, DefiningInequalityOnFdSpectrum)
{
    const auto prob = SturmLiouvilleProblem<double>::from_functions(
        [](const double& x) { return 0.5 + x * x; }, [](const double&) { return 0.3; });
    const auto s = fd_spectrum(prob, 100, 6);
    const auto g = estimate_gap_constants(s);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t m = n + 1; m <= 6; ++m) {
            const double d = s.eigenvalues[m - 1] - s.eigenvalues[n - 1];
            const double w = static_cast<double>(m * m - n * n);
            EXPECT_LE(g.lower * w, d * (1 + 1e-14));
            EXPECT_GE(g.upper * w, d * (1 - 1e-14));
        }
    }
}
