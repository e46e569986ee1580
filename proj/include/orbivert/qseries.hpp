#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "rational.hpp"

namespace orbivert {

using Complex = std::complex<double>;

enum class FieldMode { exact, complex };

namespace detail {

template <class C>
bool is_zero(const C& c)
{
    if constexpr (std::is_same_v<C, Complex>)
        return c.real() == 0.0 && c.imag() == 0.0;
    else
        return c == 0;
}

inline Complex to_complex(const Rational& r) { return Complex(to_double(r), 0.0); }
inline Complex to_complex(const Complex& c) { return c; }

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return to_int64(lcm(Integer(a), Integer(b))); }

} // namespace detail

// Truncated series sum_e c_e q^e with exponents in (1/N)Z, known exactly for
// all exponents below trunc(). Terms are kept sparse with nonzero
// coefficients, sorted by exponent.
template <class C>
class BasicSeries {
public:
    using coefficient_type = C;
    static constexpr FieldMode mode = std::is_same_v<C, Complex> ? FieldMode::complex : FieldMode::exact;

    BasicSeries() : BasicSeries(1, Rational(0)) {}

    // Zero series O(q^trunc) on the grid (1/denom)Z.
    BasicSeries(std::int64_t denom, Rational trunc) : denom_(denom), trunc_(std::move(trunc))
    {
        if (denom_ <= 0)
            throw Error(ErrorCode::DimensionMismatch, "exponent denominator must be positive");
    }

    static BasicSeries monomial(const C& c, const Rational& exponent, const Rational& trunc)
    {
        BasicSeries s(to_int64(den(exponent)), trunc);
        s.add_term(exponent, c);
        return s;
    }

    static BasicSeries constant(const C& c, const Rational& trunc) { return monomial(c, Rational(0), trunc); }

    std::int64_t denom() const noexcept { return denom_; }
    const Rational& trunc() const noexcept { return trunc_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    // Leading exponent; trunc() for a series that vanishes to its precision.
    Rational lead() const { return terms_.empty() ? trunc_ : exponent_of(terms_.front().first); }
    C lead_coefficient() const { return terms_.empty() ? C(0) : terms_.front().second; }

    std::vector<std::pair<Rational, C>> terms() const
    {
        std::vector<std::pair<Rational, C>> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_)
            out.emplace_back(exponent_of(e), c);
        return out;
    }

    C coefficient(const Rational& exponent) const
    {
        if (exponent >= trunc_)
            throw Error(ErrorCode::TailTooLarge, "coefficient of q^" + to_string(exponent) + " beyond truncation");
        Rational scaled = exponent * Rational(denom_);
        if (!is_integer(scaled))
            return C(0);
        const std::int64_t e = to_int64(num(scaled));
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const auto& term, std::int64_t v) { return term.first < v; });
        return (it != terms_.end() && it->first == e) ? it->second : C(0);
    }

    // Adds c q^exponent, refining the grid if needed. Terms at or beyond
    // trunc are dropped.
    void add_term(const Rational& exponent, const C& c)
    {
        if (exponent >= trunc_ || detail::is_zero(c))
            return;
        refine(detail::lcm64(denom_, to_int64(den(exponent))));
        const std::int64_t e = to_int64(num(exponent * Rational(denom_)));
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const auto& term, std::int64_t v) { return term.first < v; });
        if (it != terms_.end() && it->first == e) {
            it->second += c;
            if (detail::is_zero(it->second))
                terms_.erase(it);
        } else {
            terms_.insert(it, {e, c});
        }
    }

    // Lowers the truncation point, discarding terms at or beyond it.
    BasicSeries truncated(const Rational& trunc) const
    {
        BasicSeries s = *this;
        if (trunc < s.trunc_) {
            s.trunc_ = trunc;
            while (!s.terms_.empty() && s.exponent_of(s.terms_.back().first) >= trunc)
                s.terms_.pop_back();
        }
        return s;
    }

    // Re-expresses the series on the finer grid (1/denom)Z.
    void refine(std::int64_t denom)
    {
        if (denom == denom_)
            return;
        if (denom % denom_ != 0)
            throw Error(ErrorCode::DimensionMismatch, "grid refinement must be a multiple");
        const std::int64_t f = denom / denom_;
        for (auto& t : terms_)
            t.first *= f;
        denom_ = denom;
    }

    friend BasicSeries operator+(const BasicSeries& a, const BasicSeries& b)
    {
        BasicSeries out(detail::lcm64(a.denom_, b.denom_), std::min(a.trunc_, b.trunc_));
        BasicSeries x = a, y = b;
        x.refine(out.denom_);
        y.refine(out.denom_);
        std::map<std::int64_t, C> acc;
        for (const auto& [e, c] : x.terms_)
            acc[e] += c;
        for (const auto& [e, c] : y.terms_)
            acc[e] += c;
        out.assign_from(acc);
        return out;
    }

    friend BasicSeries operator-(const BasicSeries& a, const BasicSeries& b) { return a + b * C(-1); }

    friend BasicSeries operator*(const BasicSeries& a, const C& s)
    {
        BasicSeries out = a;
        if (detail::is_zero(s)) {
            out.terms_.clear();
            return out;
        }
        for (auto& t : out.terms_)
            t.second *= s;
        return out;
    }
    friend BasicSeries operator*(const C& s, const BasicSeries& a) { return a * s; }

    friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b)
    {
        const Rational trunc = std::min(a.trunc_ + b.lead(), b.trunc_ + a.lead());
        BasicSeries out(detail::lcm64(a.denom_, b.denom_), trunc);
        if (a.is_zero() || b.is_zero())
            return out;
        BasicSeries x = a, y = b;
        x.refine(out.denom_);
        y.refine(out.denom_);
        const std::int64_t base = x.terms_.front().first + y.terms_.front().first;
        const std::int64_t limit = out.grid_limit(); // exponents e with e < limit
        if (limit <= base)
            return out;
        std::vector<C> dense(static_cast<std::size_t>(limit - base), C(0));
        for (const auto& [ea, ca] : x.terms_) {
            for (const auto& [eb, cb] : y.terms_) {
                const std::int64_t e = ea + eb;
                if (e >= limit)
                    break;
                dense[static_cast<std::size_t>(e - base)] += ca * cb;
            }
        }
        out.assign_dense(base, dense);
        return out;
    }

    BasicSeries& operator+=(const BasicSeries& o) { return *this = *this + o; }
    BasicSeries& operator*=(const BasicSeries& o) { return *this = *this * o; }

    // Multiplicative inverse, accurate to the same relative precision.
    BasicSeries inverse() const
    {
        if (terms_.empty() || detail::is_zero(terms_.front().second))
            throw Error(ErrorCode::ZeroLeading, "cannot invert a series with vanishing leading coefficient");
        const std::int64_t a = terms_.front().first;
        const C c0 = terms_.front().second;
        const C inv0 = C(1) / c0;
        BasicSeries out(denom_, trunc_ - 2 * lead());
        // Relative grid points n with (a + n)/N < trunc.
        const std::int64_t count = grid_limit() - a;
        if (count <= 0)
            return out;
        // Work on the coarsest grid carrying all relative exponents.
        std::int64_t step = 0;
        for (std::size_t i = 1; i < terms_.size(); ++i)
            step = std::gcd(step, terms_[i].first - a);
        if (step == 0)
            step = count;
        std::vector<std::pair<std::int64_t, C>> g; // normalized tail terms, in steps
        for (std::size_t i = 1; i < terms_.size(); ++i)
            g.emplace_back((terms_[i].first - a) / step, terms_[i].second * inv0);
        const std::int64_t coarse = (count + step - 1) / step;
        std::vector<C> bc(static_cast<std::size_t>(coarse), C(0));
        bc[0] = C(1);
        for (std::int64_t n = 1; n < coarse; ++n) {
            C s(0);
            for (const auto& [j, gj] : g) {
                if (j > n)
                    break;
                const C& bn = bc[static_cast<std::size_t>(n - j)];
                if (!detail::is_zero(bn))
                    s += gj * bn;
            }
            bc[static_cast<std::size_t>(n)] = -s;
        }
        std::vector<C> b(static_cast<std::size_t>(count), C(0));
        for (std::int64_t n = 0; n < coarse && n * step < count; ++n)
            b[static_cast<std::size_t>(n * step)] = bc[static_cast<std::size_t>(n)] * inv0;
        out.assign_dense(-a, b);
        return out;
    }

    BasicSeries pow(long long k) const
    {
        if (k < 0)
            return inverse().pow(-k);
        BasicSeries result = constant(C(1), trunc_ - lead());
        BasicSeries base = *this;
        bool first = true;
        while (k > 0) {
            if (k & 1) {
                result = first ? base : result * base;
                first = false;
            }
            k >>= 1;
            if (k)
                base = base * base;
        }
        return result;
    }

    // Value at q = exp(-2 pi t) together with a geometric majorant of the
    // discarded tail, |last coefficient| e^{-2 pi t trunc} / (1 - e^{-2 pi t / N}).
    // The majorant is a heuristic: it ignores coefficient growth.
    std::pair<Complex, double> evaluate(double t) const
    {
        const double two_pi_t = 2.0 * std::numbers::pi * t;
        Complex value(0.0, 0.0);
        for (const auto& [e, c] : terms_)
            value += detail::to_complex(c) * std::exp(-two_pi_t * static_cast<double>(e) / static_cast<double>(denom_));
        double tail = 0.0;
        if (!terms_.empty()) {
            const double last = std::abs(detail::to_complex(terms_.back().second));
            tail = last * std::exp(-two_pi_t * to_double(trunc_)) /
                   (1.0 - std::exp(-two_pi_t / static_cast<double>(denom_)));
        }
        return {value, tail};
    }

    BasicSeries<Complex> to_complex() const
    {
        BasicSeries<Complex> out(denom_, trunc_);
        for (const auto& [e, c] : terms_)
            out.add_term(exponent_of(e), detail::to_complex(c));
        return out;
    }

    // Multiplies by q^shift.
    BasicSeries shifted(const Rational& shift) const
    {
        BasicSeries out(detail::lcm64(denom_, to_int64(den(shift))), trunc_ + shift);
        BasicSeries x = *this;
        x.refine(out.denom_);
        const std::int64_t d = to_int64(num(shift * Rational(out.denom_)));
        out.terms_ = x.terms_;
        for (auto& t : out.terms_)
            t.first += d;
        return out;
    }

    // Exact equality of coefficients and truncation.
    friend bool operator==(const BasicSeries& a, const BasicSeries& b)
    {
        return a.trunc_ == b.trunc_ && a.terms() == b.terms();
    }

private:
    template <class>
    friend class BasicSeries;

    Rational exponent_of(std::int64_t e) const { return Rational(e, denom_); }

    // Smallest grid numerator e with e/N >= trunc.
    std::int64_t grid_limit() const { return to_int64(ceil(trunc_ * Rational(denom_))); }

    void assign_from(const std::map<std::int64_t, C>& acc)
    {
        terms_.clear();
        const std::int64_t limit = grid_limit();
        for (const auto& [e, c] : acc)
            if (e < limit && !detail::is_zero(c))
                terms_.emplace_back(e, c);
    }

    void assign_dense(std::int64_t base, const std::vector<C>& dense)
    {
        terms_.clear();
        const std::int64_t limit = grid_limit();
        for (std::size_t i = 0; i < dense.size(); ++i) {
            const std::int64_t e = base + static_cast<std::int64_t>(i);
            if (e < limit && !detail::is_zero(dense[i]))
                terms_.emplace_back(e, dense[i]);
        }
    }

    std::int64_t denom_ = 1;
    Rational trunc_;
    std::vector<std::pair<std::int64_t, C>> terms_;
};

using ExactSeries = BasicSeries<Rational>;
using ComplexSeries = BasicSeries<Complex>;

// Series in either field mode; arithmetic across modes is rejected.
class PuiseuxSeries {
public:
    PuiseuxSeries() = default;
    PuiseuxSeries(ExactSeries s) : s_(std::move(s)) {}
    PuiseuxSeries(ComplexSeries s) : s_(std::move(s)) {}

    FieldMode mode() const noexcept { return s_.index() == 0 ? FieldMode::exact : FieldMode::complex; }
    bool exact() const noexcept { return mode() == FieldMode::exact; }

    const ExactSeries& as_exact() const
    {
        if (!exact())
            throw Error(ErrorCode::ModeMismatch, "series is in complex mode");
        return std::get<0>(s_);
    }
    const ComplexSeries& as_complex_series() const
    {
        if (exact())
            throw Error(ErrorCode::ModeMismatch, "series is in exact mode");
        return std::get<1>(s_);
    }
    ComplexSeries to_complex() const
    {
        return std::visit([](const auto& s) { return ComplexSeries(s.to_complex()); }, s_);
    }

    template <class F>
    decltype(auto) visit(F&& f) const
    {
        return std::visit(std::forward<F>(f), s_);
    }

    std::int64_t denom() const { return visit([](const auto& s) { return s.denom(); }); }
    Rational trunc() const { return visit([](const auto& s) { return s.trunc(); }); }
    Rational lead() const { return visit([](const auto& s) { return s.lead(); }); }
    Complex coefficient(const Rational& e) const
    {
        return visit([&](const auto& s) { return detail::to_complex(s.coefficient(e)); });
    }
    std::pair<Complex, double> evaluate(double t) const
    {
        return visit([&](const auto& s) { return s.evaluate(t); });
    }
    std::vector<Rational> exponents() const
    {
        return visit([](const auto& s) {
            std::vector<Rational> e;
            for (const auto& [x, c] : s.terms())
                e.push_back(x);
            return e;
        });
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, 0); }
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, 1); }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, 2); }

    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a.s_ == b.s_; }

    PuiseuxSeries inverse() const
    {
        return visit([](const auto& s) { return PuiseuxSeries(s.inverse()); });
    }

private:
    static PuiseuxSeries combine(const PuiseuxSeries& a, const PuiseuxSeries& b, int op)
    {
        if (a.mode() != b.mode())
            throw Error(ErrorCode::ModeMismatch, "cannot combine exact and complex series");
        if (a.exact()) {
            const auto& x = std::get<0>(a.s_);
            const auto& y = std::get<0>(b.s_);
            return op == 0 ? PuiseuxSeries(x + y) : op == 1 ? PuiseuxSeries(x - y) : PuiseuxSeries(x * y);
        }
        const auto& x = std::get<1>(a.s_);
        const auto& y = std::get<1>(b.s_);
        return op == 0 ? PuiseuxSeries(x + y) : op == 1 ? PuiseuxSeries(x - y) : PuiseuxSeries(x * y);
    }

    std::variant<ExactSeries, ComplexSeries> s_;
};

// Default precision: integer levels above the leading exponent.
inline constexpr int default_levels = 20;

// eta(s tau) = q^{s/24} prod_{k>=1} (1 - q^{sk}), known to `levels` above its lead.
inline ExactSeries eta(const Rational& s, const Rational& levels)
{
    if (s <= 0)
        throw Error(ErrorCode::DimensionMismatch, "eta scale must be positive");
    const Rational lead = s / 24;
    const std::int64_t n = detail::lcm64(to_int64(den(lead)), to_int64(den(s)));
    // prod (1 - x^k) up to x^{count-1}, with x = q^s and s*count >= levels.
    const std::int64_t count = std::max<std::int64_t>(1, to_int64(ceil(levels / s)));
    std::vector<Integer> c(static_cast<std::size_t>(count), Integer(0));
    c[0] = 1;
    for (std::int64_t k = 1; k < count; ++k)
        for (std::int64_t i = count - 1; i >= k; --i)
            c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - k)];
    ExactSeries out(n, lead + levels);
    for (std::int64_t i = 0; i < count; ++i)
        if (c[static_cast<std::size_t>(i)] != 0)
            out.add_term(lead + s * i, Rational(c[static_cast<std::size_t>(i)]));
    return out;
}

enum class EtaArgument { upstairs, downstairs };

// upstairs: prod_t eta(t tau)^{b_t}; downstairs: prod_t eta(tau/t)^{b_t}.
inline ExactSeries eta_frame(const FrameShape& shape, EtaArgument arg, const Rational& levels)
{
    ExactSeries result = ExactSeries::constant(Rational(1), levels);
    for (auto [t, bt] : shape.exponents) {
        const Rational s = arg == EtaArgument::upstairs ? Rational(t) : Rational(1, t);
        ExactSeries f = eta(s, levels).pow(bt);
        result = result * f;
    }
    return result;
}

// sum_shell count q^{norm_half}, dropping shells at or beyond trunc.
inline ExactSeries theta_from_shells(const std::map<Rational, Integer>& shells, const Rational& trunc)
{
    ExactSeries out(1, trunc);
    for (const auto& [e, c] : shells)
        out.add_term(e, Rational(c));
    return out;
}

inline ComplexSeries theta_from_shells(const std::map<Rational, Complex>& shells, const Rational& trunc)
{
    ComplexSeries out(1, trunc);
    for (const auto& [e, c] : shells)
        out.add_term(e, c);
    return out;
}

} // namespace orbivert
