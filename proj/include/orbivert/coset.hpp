#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace orbivert {

using int128 = __int128;

// A coset Lambda + s of a lattice Lambda spanned by rational generators inside
// a rational quadratic space. The shift is split into a part in the span of
// Lambda and an orthogonal remainder.
class LatticeCoset {
public:
    LatticeCoset(const RatMatrix& ambient_gram, const RatMatrix& generators, RationalVector shift)
        : ambient_gram_(ambient_gram), shift_(std::move(shift))
    {
        if (!ambient_gram.square() || generators.rows() != ambient_gram.rows() || shift_.size() != ambient_gram.rows())
            throw Error(ErrorCode::DimensionMismatch, "coset generators, shift and Gram disagree in dimension");
        basis_ = linalg::module_basis(generators);
        basis_gram_ = basis_.transpose() * ambient_gram_ * basis_;
        const std::size_t k = basis_.cols();

        RationalVector parallel(shift_.size(), Rational(0));
        coords_.assign(k, Rational(0));
        if (k > 0) {
            auto inv = linalg::inverse(basis_gram_);
            if (!inv)
                throw Error(ErrorCode::DegenerateGram, "form is singular on the span of the generators");
            coords_ = *inv * (basis_.transpose() * (ambient_gram_ * shift_));
            parallel = basis_ * coords_;
        }
        perp_.resize(shift_.size());
        for (std::size_t i = 0; i < shift_.size(); ++i)
            perp_[i] = shift_[i] - parallel[i];
        perp_half_ = bilinear(ambient_gram_, perp_, perp_) / 2;
        if (perp_half_ < 0)
            throw Error(ErrorCode::DegenerateGram, "negative norm outside the span");

        scale_ = linalg::common_denominator(basis_gram_);
        shift_den_ = linalg::common_denominator(coords_);
        scaled_gram_ = BigMatrix(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                scaled_gram_(i, j) = num(basis_gram_(i, j) * Rational(scale_));
        ldl_ = linalg::bareiss_ldl(scaled_gram_);
        if (ldl_.first_nonpositive)
            throw Error(ErrorCode::DegenerateGram, "form is not positive-definite on the span of the generators");
    }

    // Coset of an integral lattice: L + shift.
    static LatticeCoset of_lattice(const IntegralLattice& lattice, RationalVector shift)
    {
        return LatticeCoset(to_rational(lattice.gram()), RatMatrix::identity(lattice.rank()), std::move(shift));
    }
    static LatticeCoset of_lattice(const IntegralLattice& lattice)
    {
        return of_lattice(lattice, RationalVector(lattice.rank(), Rational(0)));
    }

    std::size_t rank() const noexcept { return basis_.cols(); }
    std::size_t ambient_dimension() const noexcept { return ambient_gram_.rows(); }
    const RatMatrix& basis() const noexcept { return basis_; }
    const RatMatrix& basis_gram() const noexcept { return basis_gram_; }
    const RatMatrix& ambient_gram() const noexcept { return ambient_gram_; }
    const RationalVector& shift() const noexcept { return shift_; }
    // Shift coordinates with respect to basis().
    const RationalVector& shift_coordinates() const noexcept { return coords_; }
    const Rational& orthogonal_norm_half() const noexcept { return perp_half_; }

    // Ambient coordinates of sum_i (x_i + c_i) b_i + s_perp.
    RationalVector point(const std::vector<std::int64_t>& x) const
    {
        RationalVector c(coords_);
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] += x[i];
        RationalVector v = basis_ * c;
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += perp_[i];
        return v;
    }

    // Integer y = e*x + e*c satisfies y^T A y = scaled norm, with A the
    // integral rescaling of basis_gram().
    Rational norm_half_from_scaled(const Integer& q) const
    {
        return Rational(q, 2 * scale_ * shift_den_ * shift_den_) + perp_half_;
    }

    Integer scaled_norm(const std::vector<std::int64_t>& x) const
    {
        std::vector<Integer> y = scaled_point(x);
        Integer q = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j)
                q += y[i] * scaled_gram_(i, j) * y[j];
        return q;
    }

    Rational norm_half(const std::vector<std::int64_t>& x) const { return norm_half_from_scaled(scaled_norm(x)); }

    // Largest scaled norm q with norm_half_from_scaled(q) <= bound, or nullopt
    // if no coset vector can be that short.
    std::optional<Integer> scaled_bound(const Rational& bound) const
    {
        Rational c = (bound - perp_half_) * Rational(2 * scale_ * shift_den_ * shift_den_);
        if (c < 0)
            return std::nullopt;
        return floor(c);
    }

private:
    std::vector<Integer> scaled_point(const std::vector<std::int64_t>& x) const
    {
        std::vector<Integer> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = shift_den_ * x[i] + num(coords_[i] * Rational(shift_den_));
        return y;
    }

    friend class CosetEnumerator;

    RatMatrix ambient_gram_;
    RationalVector shift_;
    RatMatrix basis_;
    RatMatrix basis_gram_;
    RationalVector coords_;
    RationalVector perp_;
    Rational perp_half_;
    Integer scale_ = 1;
    Integer shift_den_ = 1;
    BigMatrix scaled_gram_;
    linalg::BareissLdl ldl_;
};

// Fincke-Pohst enumeration of short coset vectors with exact integer pruning.
// The fraction-free LDL^T decomposition writes the scaled norm as
//   Q(y) = sum_i (M_i y_i + s_i)^2 / (M_{i-1} M_i),  s_i = sum_{j>i} l_ij y_j,
// and all comparisons are done on Q * lcm_i(M_{i-1} M_i) in 128-bit integers.
class CosetEnumerator {
public:
    explicit CosetEnumerator(const LatticeCoset& coset) : coset_(coset)
    {
        const std::size_t k = coset.rank();
        const auto& ldl = coset.ldl_;
        Integer p = 1;
        Integer prev = 1;
        for (std::size_t i = 0; i < k; ++i) {
            p = lcm(p, prev * ldl.minors[i]);
            prev = ldl.minors[i];
        }
        p_ = checked(p);
        prev = 1;
        minor_.resize(k);
        weight_.resize(k);
        rows_.assign(k * k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            minor_[i] = checked(ldl.minors[i]);
            weight_[i] = checked(p / (prev * ldl.minors[i]));
            prev = ldl.minors[i];
            for (std::size_t j = i; j < k; ++j)
                rows_[i * k + j] = checked(ldl.rows(i, j));
        }
        den_ = to_int64(coset.shift_den_);
        residue_.resize(k);
        offset_.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            offset_[i] = to_int64(num(coset.coords_[i] * Rational(coset.shift_den_)));
            residue_[i] = ((offset_[i] % den_) + den_) % den_;
        }
    }

    // Visits every x whose coset vector has norm_half <= bound. The leaf is
    // called as leaf(acc, x, q, qmax) with q the scaled norm; it may lower
    // qmax to shrink the search. Per-worker accumulators are merged in
    // worker order.
    template <class Acc, class Leaf, class Merge>
    Acc run(const Integer& qmax_start, Acc init, Leaf leaf, Merge merge, unsigned workers = thread_count()) const
    {
        const std::size_t k = coset_.rank();
        if (qmax_start > Integer(1) << 90)
            throw Error(ErrorCode::Overflow, "enumeration bound too large for 128-bit pruning");
        const int128 qmax0 = static_cast<int128>(to_int64(qmax_start));
        if (k == 0) {
            int128 qmax = qmax0;
            if (qmax >= 0)
                leaf(init, std::vector<std::int64_t>{}, int128(0), qmax);
            return init;
        }
        auto results = run_workers<Acc>(workers, [&](unsigned w, unsigned nw) {
            Acc acc = init;
            State st{std::vector<std::int64_t>(k, 0), std::vector<std::int64_t>(k, 0), qmax0};
            descend(k - 1, 0, st, acc, leaf, w, nw);
            return acc;
        });
        Acc out = std::move(results.front());
        for (std::size_t i = 1; i < results.size(); ++i)
            merge(out, std::move(results[i]));
        return out;
    }

private:
    struct State {
        std::vector<std::int64_t> y;
        std::vector<std::int64_t> x;
        int128 qmax;
    };

    static int128 checked(const Integer& v)
    {
        if (boost::multiprecision::abs(v) > Integer(1) << 40)
            throw Error(ErrorCode::Overflow, "Gram data too large for 128-bit enumeration");
        return static_cast<int128>(to_int64(v));
    }

    static int128 isqrt(int128 v)
    {
        if (v <= 0)
            return 0;
        auto r = static_cast<int128>(std::sqrt(static_cast<long double>(v)));
        while (r * r > v)
            --r;
        while ((r + 1) * (r + 1) <= v)
            ++r;
        return r;
    }

    static int128 floor_div(int128 a, int128 b)
    {
        int128 q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0)))
            --q;
        return q;
    }

    template <class Acc, class Leaf>
    void descend(std::size_t level, int128 partial, State& st, Acc& acc, Leaf& leaf, unsigned w, unsigned nw) const
    {
        const std::size_t k = coset_.rank();
        const int128 budget = st.qmax * p_ - partial;
        if (budget < 0)
            return;
        int128 s = 0;
        for (std::size_t j = level + 1; j < k; ++j)
            s += rows_[level * k + j] * st.y[j];
        const int128 m = minor_[level];
        const int128 r = isqrt(budget / weight_[level]);
        // |m*y + s| <= r
        int128 lo = -floor_div(r + s, m);
        const int128 hi = floor_div(r - s, m);
        const int128 d = den_;
        const int128 rem = residue_[level];
        lo += ((rem - lo) % d + d) % d;
        std::size_t index = 0;
        for (int128 y = lo; y <= hi; y += d, ++index) {
            if (level == k - 1 && index % nw != w)
                continue;
            const int128 t = m * y + s;
            const int128 term = t * t * weight_[level];
            if (partial + term > st.qmax * p_)
                continue;
            st.y[level] = static_cast<std::int64_t>(y);
            st.x[level] = (st.y[level] - offset_[level]) / den_;
            if (level == 0) {
                const int128 q = (partial + term) / p_;
                leaf(acc, std::as_const(st.x), q, st.qmax);
            } else {
                descend(level - 1, partial + term, st, acc, leaf, w, nw);
            }
        }
        st.y[level] = 0;
        st.x[level] = 0;
    }

    const LatticeCoset& coset_;
    int128 p_ = 1;
    std::vector<int128> minor_;
    std::vector<int128> weight_;
    std::vector<int128> rows_;
    std::int64_t den_ = 1;
    std::vector<std::int64_t> residue_;
    std::vector<std::int64_t> offset_;
};

struct CosetMinimum {
    Rational min_norm_half;
    RationalVector witness; // ambient coordinates
};

// Exact minimum of <a,a>/2 over the coset; ties go to the lexicographically
// smallest ambient coordinate tuple.
inline CosetMinimum coset_min(const LatticeCoset& coset)
{
    const std::size_t k = coset.rank();
    std::vector<std::int64_t> start(k);
    for (std::size_t i = 0; i < k; ++i)
        start[i] = to_int64(round_nearest(-coset.shift_coordinates()[i]));
    const Integer q0 = coset.scaled_norm(start);

    struct Best {
        std::optional<int128> q;
        std::vector<std::vector<std::int64_t>> points;
    };
    CosetEnumerator en(coset);
    Best best = en.run(
        q0, Best{},
        [](Best& acc, const std::vector<std::int64_t>& x, int128 q, int128& qmax) {
            if (!acc.q || q < *acc.q) {
                acc.q = q;
                acc.points.clear();
                qmax = q;
            }
            if (q == *acc.q)
                acc.points.push_back(x);
        },
        [](Best& out, Best&& other) {
            if (!other.q)
                return;
            if (!out.q || *other.q < *out.q) {
                out = std::move(other);
            } else if (*other.q == *out.q) {
                out.points.insert(out.points.end(), other.points.begin(), other.points.end());
            }
        });
    if (!best.q)
        throw Error(ErrorCode::DegenerateGram, "enumeration missed the starting point");
    CosetMinimum out;
    out.min_norm_half = coset.norm_half_from_scaled(Integer(static_cast<long long>(*best.q)));
    for (const auto& x : best.points) {
        RationalVector v = coset.point(x);
        if (out.witness.empty() || v < out.witness)
            out.witness = std::move(v);
    }
    return out;
}

inline CosetMinimum coset_min(const RatMatrix& ambient_gram, const RatMatrix& generators, const RationalVector& shift)
{
    return coset_min(LatticeCoset(ambient_gram, generators, shift));
}

using ShellCounts = std::map<Rational, Integer>;

// Number of coset vectors per value of <a,a>/2, for all values <= bound.
inline ShellCounts shell_counts(const LatticeCoset& coset, const Rational& bound)
{
    auto qmax = coset.scaled_bound(bound);
    if (!qmax)
        return {};
    CosetEnumerator en(coset);
    ShellCounts shells;
    if (*qmax < (Integer(1) << 24)) {
        // Dense tally indexed by the scaled norm.
        using Tally = std::vector<std::uint64_t>;
        const auto size = static_cast<std::size_t>(to_int64(*qmax)) + 1;
        Tally tally = en.run(
            *qmax, Tally(size, 0),
            [](Tally& acc, const std::vector<std::int64_t>&, int128 q, int128&) { ++acc[static_cast<std::size_t>(q)]; },
            [](Tally& out, Tally&& other) {
                for (std::size_t i = 0; i < out.size(); ++i)
                    out[i] += other[i];
            });
        for (std::size_t q = 0; q < size; ++q)
            if (tally[q] != 0)
                shells[coset.norm_half_from_scaled(Integer(q))] += Integer(tally[q]);
        return shells;
    }
    using Tally = std::map<long long, std::uint64_t>;
    Tally tally = en.run(
        *qmax, Tally{},
        [](Tally& acc, const std::vector<std::int64_t>&, int128 q, int128&) { ++acc[static_cast<long long>(q)]; },
        [](Tally& out, Tally&& other) {
            for (auto [q, c] : other)
                out[q] += c;
        });
    for (auto [q, c] : tally)
        shells[coset.norm_half_from_scaled(Integer(q))] += Integer(c);
    return shells;
}

// Shell counts refined by a phase class: each vector contributes to residue
// (offset + sum_i x_i * weights_i) mod modulus of its shell.
using ResidueShells = std::map<Rational, std::vector<std::uint64_t>>;

inline ResidueShells shell_residue_counts(const LatticeCoset& coset, const Rational& bound,
                                          const std::vector<std::int64_t>& weights, std::int64_t offset,
                                          std::int64_t modulus)
{
    auto qmax = coset.scaled_bound(bound);
    if (!qmax)
        return {};
    if (modulus <= 0)
        throw Error(ErrorCode::DimensionMismatch, "residue modulus must be positive");
    const auto mod = static_cast<std::size_t>(modulus);
    if (*qmax * modulus >= (Integer(1) << 26))
        throw Error(ErrorCode::Overflow, "residue tally too large");
    const auto size = static_cast<std::size_t>(to_int64(*qmax)) + 1;
    // Dense tally: slot q * modulus + residue.
    using Tally = std::vector<std::uint64_t>;
    CosetEnumerator en(coset);
    Tally tally = en.run(
        *qmax, Tally(size * mod, 0),
        [&](Tally& acc, const std::vector<std::int64_t>& x, int128 q, int128&) {
            int128 r = offset;
            for (std::size_t i = 0; i < x.size(); ++i)
                r += static_cast<int128>(x[i]) * weights[i];
            r %= modulus;
            if (r < 0)
                r += modulus;
            ++acc[static_cast<std::size_t>(q) * mod + static_cast<std::size_t>(r)];
        },
        [](Tally& out, Tally&& other) {
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] += other[i];
        });
    ResidueShells shells;
    for (std::size_t q = 0; q < size; ++q) {
        auto first = tally.begin() + static_cast<std::ptrdiff_t>(q * mod);
        if (std::any_of(first, first + static_cast<std::ptrdiff_t>(mod), [](auto c) { return c != 0; }))
            shells[coset.norm_half_from_scaled(Integer(q))] =
                std::vector<std::uint64_t>(first, first + static_cast<std::ptrdiff_t>(mod));
    }
    return shells;
}

// All coset vectors (ambient coordinates) with norm_half <= bound, in
// enumeration order. Meant for small bounds.
inline std::vector<std::pair<Rational, RationalVector>> short_vectors(const LatticeCoset& coset, const Rational& bound)
{
    auto qmax = coset.scaled_bound(bound);
    if (!qmax)
        return {};
    CosetEnumerator en(coset);
    using Found = std::vector<std::pair<long long, std::vector<std::int64_t>>>;
    Found found = en.run(
        *qmax, Found{},
        [](Found& acc, const std::vector<std::int64_t>& x, int128 q, int128&) {
            acc.emplace_back(static_cast<long long>(q), x);
        },
        [](Found& out, Found&& other) { out.insert(out.end(), other.begin(), other.end()); });
    std::vector<std::pair<Rational, RationalVector>> out;
    out.reserve(found.size());
    for (auto& [q, x] : found)
        out.emplace_back(coset.norm_half_from_scaled(Integer(q)), coset.point(x));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace orbivert
