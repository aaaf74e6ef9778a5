#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace rdid {

template <typename T>
using Vector = std::vector<T>;

/// Dense row-major matrix with explicit dimensions.
template <typename T>
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    Matrix(std::initializer_list<std::initializer_list<T>> init)
        : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0)
    {
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) {
                throw DimensionMismatch("ragged matrix initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T(1);
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * cols_ + j];
    }

    Vector<T> column(std::size_t j) const
    {
        Vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    /// Submatrix of rows [r0, r0+nr) and columns [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                 std::size_t nc) const
    {
        if (r0 + nr > rows_ || c0 + nc > cols_) {
            throw DimensionMismatch("block out of range");
        }
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) {
                b(i, j) = (*this)(r0 + i, c0 + j);
            }
        }
        return b;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("matrix product: inner dimensions differ");
    }
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

template <typename T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x)
{
    if (a.cols() != x.size()) {
        throw DimensionMismatch("matrix-vector product: dimensions differ");
    }
    Vector<T> y(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            y[i] += a(i, j) * x[j];
        }
    }
    return y;
}

template <typename T>
T norm_inf(const Vector<T>& x)
{
    using std::abs;
    T m(0);
    for (const auto& v : x) {
        m = std::max(m, T(abs(v)));
    }
    return m;
}

/// Maximum absolute row sum.
template <typename T>
T norm_inf(const Matrix<T>& a)
{
    using std::abs;
    T m(0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T s(0);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += abs(a(i, j));
        }
        m = std::max(m, s);
    }
    return m;
}

template <typename T>
T max_abs(const Matrix<T>& a)
{
    using std::abs;
    T m(0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m = std::max(m, T(abs(a(i, j))));
        }
    }
    return m;
}

template <typename T>
T dot(const Vector<T>& a, const Vector<T>& b)
{
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot: lengths differ");
    }
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

/// Polynomial in monomial coordinates; coefficient j multiplies z^j.
template <typename T>
class Polynomial {
public:
    Polynomial() : coef_{T(0)} {}
    explicit Polynomial(std::vector<T> coefficients)
        : coef_(std::move(coefficients))
    {
        if (coef_.empty()) {
            coef_.push_back(T(0));
        }
    }

    static Polynomial constant(const T& c) { return Polynomial({c}); }
    /// z - root
    static Polynomial linear_factor(const T& root)
    {
        return Polynomial({T(-root), T(1)});
    }

    const std::vector<T>& coefficients() const noexcept { return coef_; }
    std::size_t size() const noexcept { return coef_.size(); }

    /// Coefficient of z^j, zero beyond the stored range.
    T operator[](std::size_t j) const { return j < coef_.size() ? coef_[j] : T(0); }

    /// Highest index holding a nonzero coefficient (0 for the zero polynomial).
    std::size_t degree() const
    {
        for (std::size_t j = coef_.size(); j-- > 0;) {
            if (coef_[j] != T(0)) {
                return j;
            }
        }
        return 0;
    }

    T operator()(const T& z) const
    {
        T acc(0);
        for (std::size_t j = coef_.size(); j-- > 0;) {
            acc = acc * z + coef_[j];
        }
        return acc;
    }

    /// sum_j |c_j| |z|^j, the natural scale of rounding errors in operator().
    T magnitude(const T& z) const
    {
        using std::abs;
        T acc(0);
        const T az = abs(z);
        for (std::size_t j = coef_.size(); j-- > 0;) {
            acc = acc * az + T(abs(coef_[j]));
        }
        return acc;
    }

    Polynomial derivative() const
    {
        if (coef_.size() <= 1) {
            return Polynomial();
        }
        std::vector<T> d(coef_.size() - 1);
        for (std::size_t j = 1; j < coef_.size(); ++j) {
            d[j - 1] = coef_[j] * T(static_cast<long>(j));
        }
        return Polynomial(std::move(d));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        std::vector<T> c(a.coef_.size() + b.coef_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.coef_.size(); ++i) {
            for (std::size_t j = 0; j < b.coef_.size(); ++j) {
                c[i + j] += a.coef_[i] * b.coef_[j];
            }
        }
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const T& s, Polynomial p)
    {
        for (auto& c : p.coef_) {
            c *= s;
        }
        return p;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<T> c(std::max(a.coef_.size(), b.coef_.size()), T(0));
        for (std::size_t j = 0; j < c.size(); ++j) {
            c[j] = a[j] + b[j];
        }
        return Polynomial(std::move(c));
    }

private:
    std::vector<T> coef_;
};

} // namespace rdid
