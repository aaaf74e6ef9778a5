#include <rdid/interpolation.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace rdid;

namespace {

std::vector<double> random_nodes(std::mt19937_64& rng, std::size_t s)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x;
    while (x.size() < s) {
        const double c = u(rng);
        bool ok = true;
        for (double y : x) {
            ok = ok && std::abs(c - y) > 0.05;
        }
        if (ok) {
            x.push_back(c);
        }
    }
    return x;
}

} // namespace

TEST(Lagrange, Examples)
{
    auto l = lagrange_basis(NodeSet<double>({1.0, 2.0}), 0);
    EXPECT_DOUBLE_EQ(l[0], 2.0);
    EXPECT_DOUBLE_EQ(l[1], -1.0);

    l = lagrange_basis(NodeSet<double>({0.0}), 0);
    EXPECT_EQ(l.degree(), 0u);
    EXPECT_DOUBLE_EQ(l[0], 1.0);

    l = lagrange_basis(NodeSet<double>({0.0, 1.0, 2.0}), 1);
    EXPECT_DOUBLE_EQ(l[0], 0.0);
    EXPECT_DOUBLE_EQ(l[1], 2.0);
    EXPECT_DOUBLE_EQ(l[2], -1.0);
}

TEST(Lagrange, DuplicateNodes)
{
    EXPECT_THROW(NodeSet<double>({0.5, 0.5}), DuplicateNodes);
    EXPECT_THROW(NodeSet<double>({1.0, 1.0 + 1e-14}), DuplicateNodes);
    EXPECT_NO_THROW(NodeSet<double>({1.0, 1.0 + 1e-10}));
}

TEST(Hermite, TwoNodeExample)
{
    const NodeSet<double> chi({0.0, 1.0});
    const auto p = hermite_basis(chi, 0);
    // (1+2z)(1-z)^2 = 1 - 3z^2 + 2z^3 ; z(1-z)^2 = z - 2z^2 + z^3
    const std::vector<double> h{1, 0, -3, 2};
    const std::vector<double> ht{0, 1, -2, 1};
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_NEAR(p.h[j], h[j], 1e-15);
        EXPECT_NEAR(p.htilde[j], ht[j], 1e-15);
    }
    EXPECT_DOUBLE_EQ(p.h(0.0), 1.0);
    EXPECT_DOUBLE_EQ(p.h(1.0), 0.0);
    EXPECT_DOUBLE_EQ(p.htilde.derivative()(0.0), 1.0);
}

TEST(Hermite, SingleNode)
{
    const auto p = hermite_basis(NodeSet<double>({0.7}), 0);
    EXPECT_EQ(p.h.degree(), 0u);
    EXPECT_DOUBLE_EQ(p.h[0], 1.0);
    EXPECT_DOUBLE_EQ(p.htilde[0], -0.7);
    EXPECT_DOUBLE_EQ(p.htilde[1], 1.0);
}

TEST(HermiteMatrix, Examples)
{
    auto m = hermite_matrix(NodeSet<double>({0.3}));
    EXPECT_DOUBLE_EQ(m(0, 0), 1);
    EXPECT_DOUBLE_EQ(m(0, 1), 0);
    EXPECT_DOUBLE_EQ(m(1, 0), -0.3);
    EXPECT_DOUBLE_EQ(m(1, 1), 1);

    m = hermite_matrix(NodeSet<double>({0.0}));
    EXPECT_DOUBLE_EQ(m(0, 0), 1);
    EXPECT_DOUBLE_EQ(m(1, 0), 0);
    EXPECT_DOUBLE_EQ(m(1, 1), 1);

    const NodeSet<double> chi({0.0, 1.0});
    m = hermite_matrix(chi);
    const double z = 0.3;
    const Vector<double> powers{1, z, z * z, z * z * z};
    const auto lhs = m * powers;
    for (std::size_t n = 0; n < 2; ++n) {
        const auto p = hermite_basis(chi, n);
        EXPECT_NEAR(lhs[2 * n], p.h(z), 1e-15);
        EXPECT_NEAR(lhs[2 * n + 1], p.htilde(z), 1e-15);
    }
}

TEST(Hermite, RandomNodeSetsInterpolationConditions)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t s = 1 + trial % 8;
        const NodeSet<double> chi(random_nodes(rng, s));
        Polynomial<double> unity;
        for (std::size_t n = 0; n < s; ++n) {
            const auto p = hermite_basis(chi, n);
            EXPECT_LE(p.h.degree(), 2 * s - 1);
            EXPECT_LE(p.htilde.degree(), 2 * s - 1);
            const auto dh = p.h.derivative();
            const auto dht = p.htilde.derivative();
            for (std::size_t m = 0; m < s; ++m) {
                const double d = n == m ? 1.0 : 0.0;
                const double x = chi[m];
                EXPECT_NEAR(p.h(x), d, 1e-10 * std::max(1.0, p.h.magnitude(x)));
                EXPECT_NEAR(dh(x), 0.0, 1e-10 * std::max(1.0, dh.magnitude(x)));
                EXPECT_NEAR(p.htilde(x), 0.0, 1e-10 * std::max(1.0, p.htilde.magnitude(x)));
                EXPECT_NEAR(dht(x), d, 1e-10 * std::max(1.0, dht.magnitude(x)));
            }
            unity = unity + p.h;
            const double z = u(rng);
            const auto [hv, htv] = hermite_values(chi, n, z);
            EXPECT_NEAR(hv, p.h(z), 1e-10 * std::max(1.0, p.h.magnitude(z)));
            EXPECT_NEAR(htv, p.htilde(z), 1e-10 * std::max(1.0, p.htilde.magnitude(z)));
        }
        // partition of unity, coefficient by coefficient, relative to the
        // largest coefficient that entered the sum
        double coef_scale = 1.0;
        for (std::size_t n = 0; n < s; ++n) {
            for (const auto& c : hermite_basis(chi, n).h.coefficients()) {
                coef_scale = std::max(coef_scale, std::abs(c));
            }
        }
        EXPECT_NEAR(unity[0], 1.0, 1e-10 * coef_scale);
        for (std::size_t j = 1; j < unity.size(); ++j) {
            EXPECT_NEAR(unity[j], 0.0, 1e-10 * coef_scale);
        }
    }
}

TEST(Hermite, IndexOutOfRange)
{
    EXPECT_THROW(lagrange_basis(NodeSet<double>({0.0, 1.0}), 2), InvalidInput);
}

TEST(Hermite, HighPrecisionMatrixIdentity)
{
    using T = Real32;
    const NodeSet<T> chi({T("0.1"), T("0.35"), T("0.8")});
    const auto m = hermite_matrix(chi);
    const T z("0.47");
    Vector<T> powers(6);
    powers[0] = T(1);
    for (std::size_t j = 1; j < 6; ++j) {
        powers[j] = powers[j - 1] * z;
    }
    const auto lhs = m * powers;
    for (std::size_t n = 0; n < 3; ++n) {
        const auto [hv, htv] = hermite_values(chi, n, z);
        EXPECT_LT(to_double(abs(T(lhs[2 * n] - hv))), 1e-27);
        EXPECT_LT(to_double(abs(T(lhs[2 * n + 1] - htv))), 1e-27);
    }
}
