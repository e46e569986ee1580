#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <type_traits>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace orbivert {

namespace detail {

template <class T>
T checked_mul(const T& a, const T& b)
{
    if constexpr (std::is_same_v<T, std::int64_t>) {
        T r;
        if (__builtin_mul_overflow(a, b, &r))
            throw Error(ErrorCode::Overflow, "64-bit matrix product overflowed");
        return r;
    } else {
        return a * b;
    }
}

template <class T>
T checked_add(const T& a, const T& b)
{
    if constexpr (std::is_same_v<T, std::int64_t>) {
        T r;
        if (__builtin_add_overflow(a, b, &r))
            throw Error(ErrorCode::Overflow, "64-bit matrix sum overflowed");
        return r;
    } else {
        return a + b;
    }
}

} // namespace detail

// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }
    Matrix(std::initializer_list<std::initializer_list<T>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows)
    {
        Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has wrong length");
            for (std::size_t j = 0; j < m.cols_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> column(std::size_t j) const
    {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }

    std::vector<T> row(std::size_t i) const
    {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    T trace() const
    {
        T s(0);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
            s = detail::checked_add(s, (*this)(i, i));
        return s;
    }

    template <class U>
    Matrix<U> cast() const
    {
        Matrix<U> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i, j) = U((*this)(i, j));
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) = detail::checked_add(c(i, j), detail::checked_mul(aik, b(k, j)));
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v)
    {
        if (a.cols_ != v.size())
            throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
        std::vector<T> r(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                r[i] = detail::checked_add(r[i], detail::checked_mul(a(i, j), v[j]));
        return r;
    }

    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        a.require_same_shape(b);
        for (std::size_t k = 0; k < a.data_.size(); ++k)
            a.data_[k] = detail::checked_add(a.data_[k], b.data_[k]);
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        a.require_same_shape(b);
        for (std::size_t k = 0; k < a.data_.size(); ++k)
            a.data_[k] = detail::checked_add(a.data_[k], T(-b.data_[k]));
        return a;
    }

    friend Matrix operator*(const T& s, Matrix a)
    {
        for (auto& x : a.data_)
            x = detail::checked_mul(s, x);
        return a;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m)
    {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "\n[" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? " " : "") << m(i, j);
            os << "]";
        }
        return os;
    }

private:
    void require_same_shape(const Matrix& b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<std::int64_t>;
using BigMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

template <class T>
Matrix<T> power(const Matrix<T>& m, unsigned k)
{
    Matrix<T> result = Matrix<T>::identity(m.rows());
    for (unsigned i = 0; i < k; ++i)
        result = result * m;
    return result;
}

inline RatMatrix to_rational(const IntMatrix& m) { return m.cast<Rational>(); }

// Bilinear form u^T G v.
template <class T>
T bilinear(const Matrix<T>& gram, const std::vector<T>& u, const std::vector<T>& v)
{
    T s(0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == T(0))
            continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            s += u[i] * gram(i, j) * v[j];
    }
    return s;
}

} // namespace orbivert
