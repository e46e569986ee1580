#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "rational.hpp"

namespace orbivert::linalg {

// Fraction-free (Bareiss) elimination of a symmetric matrix without pivoting.
// Row k of `rows` holds the k-th Bareiss pivot row, whose diagonal entry is
// the k-th leading principal minor. For positive-definite A this yields
//   x^T A x = sum_k (sum_{j>=k} rows(k, j) x_j)^2 / (minor_{k-1} minor_k)
// with minor_0 = 1.
struct BareissLdl {
    BigMatrix rows;
    std::vector<Integer> minors; // minors[k] = leading principal minor of size k + 1
    // First index whose leading minor is not positive, if any.
    std::optional<std::size_t> first_nonpositive;
};

inline BareissLdl bareiss_ldl(const BigMatrix& a)
{
    const std::size_t n = a.rows();
    BareissLdl out{BigMatrix(n, n), {}, std::nullopt};
    BigMatrix w = a;
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const Integer pivot = w(k, k);
        for (std::size_t j = k; j < n; ++j)
            out.rows(k, j) = w(k, j);
        out.minors.push_back(pivot);
        if (pivot <= 0) {
            out.first_nonpositive = k;
            return out;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                w(i, j) = (pivot * w(i, j) - w(i, k) * w(k, j)) / prev;
        prev = pivot;
    }
    return out;
}

// Determinant by rational Gaussian elimination with partial pivoting.
inline Rational determinant(RatMatrix a)
{
    const std::size_t n = a.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c) == 0)
                continue;
            Rational f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j)
                a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

inline std::optional<RatMatrix> inverse(RatMatrix a)
{
    const std::size_t n = a.rows();
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            return std::nullopt;
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(p, j), a(c, j));
            std::swap(inv(p, j), inv(c, j));
        }
        Rational piv = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0)
                continue;
            Rational f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

struct ColumnEchelon {
    BigMatrix h;     // A * U, nonzero columns first, in echelon form
    BigMatrix u;     // unimodular transform
    std::size_t rank = 0;
};

// Column-style Hermite reduction: unimodular column operations bring A into
// lower echelon form. Columns rank..cols of U span ker(A) over Z.
inline ColumnEchelon column_echelon(const BigMatrix& a)
{
    const std::size_t r = a.rows();
    const std::size_t c = a.cols();
    ColumnEchelon out{a, BigMatrix::identity(c), 0};
    auto& h = out.h;
    auto& u = out.u;
    auto col_op = [&](std::size_t j1, std::size_t j2, const Integer& p, const Integer& q, const Integer& s,
                      const Integer& t) {
        // (col j1, col j2) <- (p*col j1 + q*col j2, s*col j1 + t*col j2)
        for (std::size_t i = 0; i < r; ++i) {
            Integer x = h(i, j1), y = h(i, j2);
            h(i, j1) = p * x + q * y;
            h(i, j2) = s * x + t * y;
        }
        for (std::size_t i = 0; i < c; ++i) {
            Integer x = u(i, j1), y = u(i, j2);
            u(i, j1) = p * x + q * y;
            u(i, j2) = s * x + t * y;
        }
    };
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < r && pivot < c; ++i) {
        for (std::size_t j = pivot + 1; j < c; ++j) {
            if (h(i, j) == 0)
                continue;
            if (h(i, pivot) == 0) {
                col_op(pivot, j, 0, 1, 1, 0);
                continue;
            }
            // Extended Euclid on (h(i,pivot), h(i,j)).
            Integer a0 = h(i, pivot), b0 = h(i, j);
            Integer old_r = a0, rr = b0, old_s = 1, ss = 0, old_t = 0, tt = 1;
            while (rr != 0) {
                Integer qq = old_r / rr;
                Integer tmp = old_r - qq * rr;
                old_r = rr;
                rr = tmp;
                tmp = old_s - qq * ss;
                old_s = ss;
                ss = tmp;
                tmp = old_t - qq * tt;
                old_t = tt;
                tt = tmp;
            }
            const Integer& g = old_r;
            // New pivot column gets g; the other column gets zero in row i.
            col_op(pivot, j, old_s, old_t, -b0 / g, a0 / g);
        }
        if (h(i, pivot) != 0) {
            if (h(i, pivot) < 0)
                col_op(pivot, pivot, -1, 0, -1, 0);
            // Size-reduce earlier pivot columns against this one.
            for (std::size_t j = 0; j < pivot; ++j) {
                Integer q = h(i, j) / h(i, pivot);
                if (h(i, j) - q * h(i, pivot) < 0)
                    q -= 1;
                if (q != 0)
                    col_op(j, pivot, 1, -q, 0, 1);
            }
            ++pivot;
        }
    }
    out.rank = pivot;
    return out;
}

// Z-basis (as columns) of {x in Z^n : A x = 0}.
inline BigMatrix integer_kernel(const BigMatrix& a)
{
    ColumnEchelon e = column_echelon(a);
    const std::size_t n = a.cols();
    BigMatrix k(n, n - e.rank);
    for (std::size_t j = e.rank; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            k(i, j - e.rank) = e.u(i, j);
    return k;
}

inline Integer common_denominator(const RatMatrix& m)
{
    Integer d = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            d = lcm(d, den(m(i, j)));
    return d;
}

inline Integer common_denominator(const RationalVector& v)
{
    Integer d = 1;
    for (const auto& x : v)
        d = lcm(d, den(x));
    return d;
}

// Independent Z-basis (columns) of the Z-module generated by the columns of g.
inline RatMatrix module_basis(const RatMatrix& g)
{
    const Integer d = common_denominator(g);
    BigMatrix scaled(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            scaled(i, j) = num(g(i, j) * d);
    ColumnEchelon e = column_echelon(scaled);
    RatMatrix basis(g.rows(), e.rank);
    for (std::size_t j = 0; j < e.rank; ++j)
        for (std::size_t i = 0; i < g.rows(); ++i)
            basis(i, j) = Rational(e.h(i, j), d);
    return basis;
}

} // namespace orbivert::linalg
