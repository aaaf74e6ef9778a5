#pragma once

// Lagrange and Hermite interpolation bases on a set of distinct nodes, in
// monomial coordinates, and the Hermite matrix built from them.

#include "errors.hpp"
#include "matrix.hpp"
#include "real.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace rdid {

/// Ordered list of pairwise distinct nodes.
template <typename T>
class NodeSet {
public:
    explicit NodeSet(std::vector<T> nodes) : chi_(std::move(nodes))
    {
        using std::abs;
        T scale(0);
        for (const auto& c : chi_) {
            scale = std::max(scale, T(abs(c)));
        }
        const T threshold = pivot_tolerance<T>() * scale;
        for (std::size_t i = 0; i < chi_.size(); ++i) {
            for (std::size_t j = i + 1; j < chi_.size(); ++j) {
                if (abs(T(chi_[i] - chi_[j])) <= threshold) {
                    throw DuplicateNodes("nodes " + std::to_string(i) + " and " +
                                         std::to_string(j) + " coincide numerically");
                }
            }
        }
    }

    std::size_t size() const noexcept { return chi_.size(); }
    const T& operator[](std::size_t i) const { return chi_[i]; }
    const std::vector<T>& values() const noexcept { return chi_; }

private:
    std::vector<T> chi_;
};

template <typename T>
struct HermitePair {
    Polynomial<T> h;
    Polynomial<T> htilde;
    std::size_t n = 0;
};

namespace detail {

template <typename T>
void check_index(const NodeSet<T>& chi, std::size_t n)
{
    if (n >= chi.size()) {
        throw InvalidInput("basis index " + std::to_string(n) + " out of range for " +
                           std::to_string(chi.size()) + " nodes");
    }
}

} // namespace detail

/// L_n(z) = prod_{j != n} (z - chi_j) / (chi_n - chi_j); n is 0-based.
template <typename T>
Polynomial<T> lagrange_basis(const NodeSet<T>& chi, std::size_t n)
{
    detail::check_index(chi, n);
    Polynomial<T> l = Polynomial<T>::constant(T(1));
    for (std::size_t j = 0; j < chi.size(); ++j) {
        if (j == n) {
            continue;
        }
        l = (T(1) / T(chi[n] - chi[j])) * (l * Polynomial<T>::linear_factor(chi[j]));
    }
    return l;
}

/// L_n'(chi_n) = sum_{j != n} 1 / (chi_n - chi_j).
template <typename T>
T lagrange_log_derivative(const NodeSet<T>& chi, std::size_t n)
{
    detail::check_index(chi, n);
    T s(0);
    for (std::size_t j = 0; j < chi.size(); ++j) {
        if (j != n) {
            s += T(1) / T(chi[n] - chi[j]);
        }
    }
    return s;
}

/// Value of L_n at z from the factored form.
template <typename T>
T lagrange_value(const NodeSet<T>& chi, std::size_t n, const T& z)
{
    detail::check_index(chi, n);
    T v(1);
    for (std::size_t j = 0; j < chi.size(); ++j) {
        if (j != n) {
            v *= T(z - chi[j]) / T(chi[n] - chi[j]);
        }
    }
    return v;
}

/// H = [1 - 2 (z - chi_n) L_n'(chi_n)] L_n^2,  Htilde = (z - chi_n) L_n^2.
template <typename T>
HermitePair<T> hermite_basis(const NodeSet<T>& chi, std::size_t n)
{
    const auto l = lagrange_basis(chi, n);
    const auto l2 = l * l;
    const T dl = lagrange_log_derivative(chi, n);
    const auto shift = Polynomial<T>::linear_factor(chi[n]);
    const auto factor =
        Polynomial<T>::constant(T(1)) + (T(-2) * dl) * shift;
    return {factor * l2, shift * l2, n};
}

/// (H_n(z), Htilde_n(z)) evaluated from the factored form.
template <typename T>
std::pair<T, T> hermite_values(const NodeSet<T>& chi, std::size_t n, const T& z)
{
    const T l = lagrange_value(chi, n, z);
    const T l2 = l * l;
    const T d = z - chi[n];
    return {(T(1) - T(2) * d * lagrange_log_derivative(chi, n)) * l2, d * l2};
}

/// 2S x 2S matrix whose rows 2n and 2n+1 hold the monomial coefficients of
/// H_n and Htilde_n, so that M * (1, z, ..., z^{2S-1}) lists the basis values.
template <typename T>
Matrix<T> hermite_matrix(const NodeSet<T>& chi)
{
    const std::size_t s = chi.size();
    Matrix<T> m(2 * s, 2 * s);
    for (std::size_t n = 0; n < s; ++n) {
        const auto pair = hermite_basis(chi, n);
        for (std::size_t j = 0; j < 2 * s; ++j) {
            m(2 * n, j) = pair.h[j];
            m(2 * n + 1, j) = pair.htilde[j];
        }
    }
    return m;
}

} // namespace rdid
