#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "rational.hpp"

namespace orbivert {

// Even, positive-definite integral lattice given by its Gram matrix on a
// fixed basis. Only constructible through validate().
class IntegralLattice {
public:
    static IntegralLattice validate(const IntMatrix& gram, std::string name = {})
    {
        if (!gram.square())
            throw Error(ErrorCode::DimensionMismatch,
                        "Gram matrix is " + std::to_string(gram.rows()) + "x" + std::to_string(gram.cols()));
        const std::size_t n = gram.rows();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (gram(i, j) != gram(j, i))
                    throw Error(ErrorCode::NotSymmetric,
                                "entry (" + std::to_string(i) + "," + std::to_string(j) + ") differs from its transpose");
        auto ldl = linalg::bareiss_ldl(gram.cast<Integer>());
        if (ldl.first_nonpositive)
            throw Error(ErrorCode::NotPositiveDefinite,
                        "leading principal minor of size " + std::to_string(*ldl.first_nonpositive + 1) +
                            " is not positive");
        for (std::size_t i = 0; i < n; ++i)
            if (gram(i, i) % 2 != 0)
                throw Error(ErrorCode::NotEven, "diagonal entry " + std::to_string(i) + " is odd");
        IntegralLattice l;
        l.gram_ = gram;
        l.det_ = n == 0 ? Integer(1) : ldl.minors.back();
        l.name_ = std::move(name);
        return l;
    }

    std::size_t rank() const noexcept { return gram_.rows(); }
    const IntMatrix& gram() const noexcept { return gram_; }
    const Integer& det() const noexcept { return det_; }
    bool unimodular() const noexcept { return det_ == 1; }
    const std::string& name() const noexcept { return name_; }

    std::int64_t inner(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const
    {
        return bilinear(gram_, a, b);
    }

    Rational inner(const RationalVector& a, const RationalVector& b) const
    {
        return bilinear(to_rational(gram_), a, b);
    }

    bool contains(const RationalVector& v) const
    {
        for (const auto& x : v)
            if (!is_integer(x))
                return false;
        return true;
    }

private:
    IntegralLattice() = default;

    IntMatrix gram_;
    Integer det_ = 1;
    std::string name_;
};

// Orthogonal sum L1 + L2 (block-diagonal Gram).
inline IntegralLattice orthogonal_sum(const IntegralLattice& a, const IntegralLattice& b, std::string name = {})
{
    const std::size_t n = a.rank() + b.rank();
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = 0; j < a.rank(); ++j)
            g(i, j) = a.gram()(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
        for (std::size_t j = 0; j < b.rank(); ++j)
            g(a.rank() + i, a.rank() + j) = b.gram()(i, j);
    return IntegralLattice::validate(g, std::move(name));
}

inline constexpr unsigned default_order_cap = 10000;

class LatticeIsometry {
public:
    const IntMatrix& matrix() const noexcept { return matrix_; }
    unsigned order() const noexcept { return order_; }
    bool is_identity() const noexcept { return order_ == 1; }

    // Matrix of nu^k, k taken modulo the order.
    IntMatrix power(unsigned k) const { return orbivert::power(matrix_, k % order_); }

    friend LatticeIsometry check_isometry(const IntegralLattice&, const IntMatrix&, unsigned);

private:
    IntMatrix matrix_;
    unsigned order_ = 1;
};

// Verifies M^T G M = G and finds the order of M by repeated multiplication.
inline LatticeIsometry check_isometry(const IntegralLattice& lattice, const IntMatrix& m,
                                      unsigned order_cap = default_order_cap)
{
    if (!m.square() || m.rows() != lattice.rank())
        throw Error(ErrorCode::DimensionMismatch, "automorphism must be " + std::to_string(lattice.rank()) + "x" +
                                                      std::to_string(lattice.rank()));
    if (!(m.transpose() * lattice.gram() * m == lattice.gram()))
        throw Error(ErrorCode::NotIsometry, "matrix does not preserve the Gram form");
    const IntMatrix id = IntMatrix::identity(m.rows());
    IntMatrix p = m;
    unsigned order = 1;
    while (!(p == id)) {
        if (++order > order_cap)
            throw Error(ErrorCode::OrderCapExceeded, "order exceeds cap " + std::to_string(order_cap));
        p = p * m;
    }
    LatticeIsometry iso;
    iso.matrix_ = m;
    iso.order_ = order;
    return iso;
}

inline std::vector<unsigned> divisors(unsigned n)
{
    std::vector<unsigned> d;
    for (unsigned k = 1; k <= n; ++k)
        if (n % k == 0)
            d.push_back(k);
    return d;
}

inline int moebius(unsigned n)
{
    int mu = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        n /= p;
        if (n % p == 0)
            return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

// Frame shape prod_t t^{b_t}: the characteristic polynomial is
// prod_t (x^t - 1)^{b_t}. Only nonzero exponents are stored.
struct FrameShape {
    std::map<unsigned, long long> exponents;

    long long b(unsigned t) const
    {
        auto it = exponents.find(t);
        return it == exponents.end() ? 0 : it->second;
    }

    // sum t*b_t, the rank (or number of permuted factors).
    long long degree() const
    {
        long long s = 0;
        for (auto [t, bt] : exponents)
            s += static_cast<long long>(t) * bt;
        return s;
    }

    // sum b_t: dimension of the fixed space.
    long long fixed_dimension() const
    {
        long long s = 0;
        for (auto [t, bt] : exponents)
            s += bt;
        return s;
    }

    // sum b_t (t - 1/t)
    Rational cycle_sum() const
    {
        Rational s = 0;
        for (auto [t, bt] : exponents)
            s += Rational(bt) * (Rational(t) - Rational(1, t));
        return s;
    }

    bool all_nonnegative() const
    {
        for (auto [t, bt] : exponents)
            if (bt < 0)
                return false;
        return true;
    }

    // sum_{t | gcd(k, m)} t b_t, the trace of nu^k predicted by the shape.
    long long predicted_trace(unsigned k) const
    {
        long long s = 0;
        for (auto [t, bt] : exponents)
            if (k % t == 0)
                s += static_cast<long long>(t) * bt;
        return s;
    }

    bool operator==(const FrameShape&) const = default;
};

namespace detail {

using Poly = std::vector<Integer>; // coefficients, index = degree

inline Poly poly_mul(const Poly& a, const Poly& b)
{
    Poly r(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

inline Poly xt_minus_1(unsigned t)
{
    Poly f(t + 1, Integer(0));
    f[0] = -1;
    f[t] = 1;
    return f;
}

// det(x I - M) by Faddeev-LeVerrier; every division is exact over Z.
inline Poly characteristic_polynomial(const IntMatrix& m)
{
    const std::size_t n = m.rows();
    const BigMatrix a = m.cast<Integer>();
    Poly c(n + 1, Integer(0));
    c[n] = 1;
    BigMatrix mk = BigMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        BigMatrix am = a * mk;
        Integer ck = -am.trace() / Integer(k);
        c[n - k] = ck;
        mk = am;
        for (std::size_t i = 0; i < n; ++i)
            mk(i, i) += ck;
    }
    return c;
}

} // namespace detail

// Moebius inversion of the power traces: t*b_t = sum_{d|t} mu(t/d) tr(M^d).
inline FrameShape frame_shape(const IntegralLattice& lattice, const LatticeIsometry& nu)
{
    const unsigned m = nu.order();
    std::vector<long long> traces(m + 1, 0);
    IntMatrix p = IntMatrix::identity(lattice.rank());
    for (unsigned k = 1; k <= m; ++k) {
        p = p * nu.matrix();
        traces[k] = p.trace();
    }
    FrameShape shape;
    for (unsigned t : divisors(m)) {
        long long s = 0;
        for (unsigned d : divisors(t))
            s += moebius(t / d) * traces[d];
        if (s % static_cast<long long>(t) != 0)
            throw Error(ErrorCode::InconsistentShape,
                        "non-integral exponent for t = " + std::to_string(t));
        if (s != 0)
            shape.exponents[t] = s / static_cast<long long>(t);
    }
    if (shape.degree() != static_cast<long long>(lattice.rank()))
        throw Error(ErrorCode::InconsistentShape, "sum t*b_t differs from the rank");
    for (unsigned k = 1; k <= m; ++k)
        if (shape.predicted_trace(k) != traces[k])
            throw Error(ErrorCode::InconsistentShape, "trace identity fails at k = " + std::to_string(k));

    // prod (x^t - 1)^{b_t} must equal the characteristic polynomial.
    detail::Poly charpoly = detail::characteristic_polynomial(nu.matrix());
    detail::Poly rhs{Integer(1)};
    for (auto [t, bt] : shape.exponents) {
        const detail::Poly f = detail::xt_minus_1(t);
        for (long long i = 0; i < bt; ++i)
            rhs = detail::poly_mul(rhs, f);
        for (long long i = 0; i < -bt; ++i)
            charpoly = detail::poly_mul(charpoly, f);
    }
    if (charpoly != rhs)
        throw Error(ErrorCode::InconsistentShape, "frame shape does not reproduce the characteristic polynomial");
    return shape;
}

struct FixedPointData {
    IntMatrix fixed_basis;      // columns: Z-basis of L^nu
    IntMatrix fixed_gram;       // Gram of L^nu on fixed_basis
    RatMatrix projector;        // (1/m) sum nu^i
    RatMatrix proj_generators;  // columns: Z-basis of pi_nu(L)
    RatMatrix proj_gram;        // Gram of pi_nu(L) on proj_generators

    std::size_t fixed_rank() const noexcept { return fixed_basis.cols(); }

    RationalVector project(const RationalVector& v) const { return projector * v; }
};

inline FixedPointData fixed_point_data(const IntegralLattice& lattice, const LatticeIsometry& nu)
{
    const std::size_t n = lattice.rank();
    FixedPointData data;

    BigMatrix shifted = nu.matrix().cast<Integer>() - BigMatrix::identity(n);
    BigMatrix kernel = linalg::integer_kernel(shifted);
    data.fixed_basis = IntMatrix(n, kernel.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < kernel.cols(); ++j)
            data.fixed_basis(i, j) = to_int64(kernel(i, j));
    data.fixed_gram = data.fixed_basis.transpose() * lattice.gram() * data.fixed_basis;

    RatMatrix sum(n, n);
    IntMatrix p = IntMatrix::identity(n);
    for (unsigned i = 0; i < nu.order(); ++i) {
        sum = sum + to_rational(p);
        p = p * nu.matrix();
    }
    data.projector = Rational(1, nu.order()) * sum;

    data.proj_generators = linalg::module_basis(data.projector);
    data.proj_gram = data.proj_generators.transpose() * to_rational(lattice.gram()) * data.proj_generators;
    return data;
}

// Whether the standard lift of nu has order 2m: m even and
// alpha -> <alpha, nu^{m/2} alpha> mod 2 not identically zero.
inline bool order_doubling(const IntegralLattice& lattice, const LatticeIsometry& nu)
{
    const unsigned m = nu.order();
    if (m % 2 != 0)
        return false;
    const IntMatrix half = nu.power(m / 2);
    const IntMatrix form = lattice.gram() * half;
    const std::size_t n = lattice.rank();
    // The form is additive mod 2, so basis vectors decide; pairwise sums are
    // checked as well since they are cheap.
    for (std::size_t i = 0; i < n; ++i) {
        if (form(i, i) % 2 != 0)
            return true;
        for (std::size_t j = i + 1; j < n; ++j)
            if ((form(i, i) + form(i, j) + form(j, i) + form(j, j)) % 2 != 0)
                return true;
    }
    return false;
}

} // namespace orbivert
