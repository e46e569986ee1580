#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "characters.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "twist.hpp"

namespace orbivert {

// Label (i, j) of the module W^{(i,j)} of a cyclic orbifold V^g: i is the
// twist class, j the eigenvalue class, both modulo the order n.
struct OrbifoldLabel {
    unsigned i = 0;
    unsigned j = 0;

    auto operator<=>(const OrbifoldLabel&) const = default;
};

inline std::string to_string(const OrbifoldLabel& l)
{
    return "(" + std::to_string(l.i) + "," + std::to_string(l.j) + ")";
}

// All n^2 labels, ordered (0,0), (0,1), ..., (n-1,n-1).
inline std::vector<OrbifoldLabel> labels(unsigned n = 2)
{
    std::vector<OrbifoldLabel> out;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
            out.push_back({i, j});
    return out;
}

inline std::size_t label_index(const OrbifoldLabel& l, unsigned n = 2) { return l.i * n + l.j; }

inline OrbifoldLabel fuse(const OrbifoldLabel& a, const OrbifoldLabel& b, unsigned n = 2)
{
    return {(a.i + b.i) % n, (a.j + b.j) % n};
}

// S_{(i,j),(k,l)} = (1/2)(-1)^{kj+il} on Z2 x Z2.
class SMatrix {
public:
    SMatrix() : s_(4, 4)
    {
        for (const auto& a : labels())
            for (const auto& b : labels())
                s_(label_index(a), label_index(b)) = Rational((b.i * a.j + a.i * b.j) % 2 == 0 ? 1 : -1, 2);
    }
    explicit SMatrix(RatMatrix entries) : s_(std::move(entries))
    {
        if (s_.rows() != 4 || s_.cols() != 4)
            throw Error(ErrorCode::DimensionMismatch, "orbifold S-matrix must be 4x4");
    }

    const Rational& operator()(const OrbifoldLabel& a, const OrbifoldLabel& b) const
    {
        return s_(label_index(a), label_index(b));
    }
    const RatMatrix& matrix() const noexcept { return s_; }
    bool symmetric() const { return s_ == s_.transpose(); }
    bool involution() const { return s_ * s_ == RatMatrix::identity(4); }

private:
    RatMatrix s_;
};

struct FusionTable {
    unsigned n = 2;
    std::map<std::pair<OrbifoldLabel, OrbifoldLabel>, OrbifoldLabel> products;

    const OrbifoldLabel& operator()(const OrbifoldLabel& a, const OrbifoldLabel& b) const
    {
        return products.at({a, b});
    }
};

// W^{(i,j)} x W^{(k,l)} = W^{(i+k, j+l)}.
inline FusionTable cyclic_fusion_table(unsigned n = 2)
{
    FusionTable t;
    t.n = n;
    for (const auto& a : labels(n))
        for (const auto& b : labels(n))
            t.products[{a, b}] = fuse(a, b, n);
    return t;
}

// N_{ab}^c = sum_d S_ad S_bd S_cd / S_{0d}; S is real here.
inline Rational verlinde(const SMatrix& s, const OrbifoldLabel& a, const OrbifoldLabel& b, const OrbifoldLabel& c)
{
    Rational n = 0;
    for (const auto& d : labels())
        n += s(a, d) * s(b, d) * s(c, d) / s(OrbifoldLabel{}, d);
    return n;
}

inline bool fusion_matches_verlinde(const SMatrix& s, const FusionTable& table)
{
    for (const auto& a : labels())
        for (const auto& b : labels())
            for (const auto& c : labels())
                if (verlinde(s, a, b, c) != (table(a, b) == c ? 1 : 0))
                    return false;
    return true;
}

// Every row of the table is a permutation of the labels.
inline bool all_simple_currents(const FusionTable& table)
{
    for (const auto& a : labels(table.n)) {
        std::map<OrbifoldLabel, int> seen;
        for (const auto& b : labels(table.n))
            if (++seen[table(a, b)] > 1)
                return false;
    }
    return true;
}

enum class QdimScenario { positivity, degenerate };

// positivity: S_{l,0} / S_{0,0}. degenerate (rho(V(g)) = 0, two vacuum-like
// modules): (S_{l,(0,0)} + S_{l,(1,0)}) / (S_{0,(0,0)} + S_{0,(1,0)}).
inline Rational qdim_smatrix(const OrbifoldLabel& l, QdimScenario scenario, const SMatrix& s = SMatrix())
{
    const OrbifoldLabel zero{}, twisted{1, 0};
    if (scenario == QdimScenario::positivity)
        return s(l, zero) / s(zero, zero);
    return (s(l, zero) + s(l, twisted)) / (s(zero, zero) + s(zero, twisted));
}

// rho(W^{(i,j)}) in ij/2 + Z.
inline bool weight_congruence(const OrbifoldLabel& l, const Rational& rho)
{
    return is_integer(rho - Rational(l.i * l.j, 2));
}

namespace detail {

template <class S>
S scaled(const S& s, const Rational& r)
{
    using C = typename S::coefficient_type;
    if constexpr (std::is_same_v<C, Complex>)
        return s * Complex(to_double(r), 0.0);
    else
        return s * r;
}

inline PuiseuxSeries scaled(const PuiseuxSeries& s, const Rational& r)
{
    return s.visit([&](const auto& x) { return PuiseuxSeries(scaled(x, r)); });
}

} // namespace detail

// Splits Z_{g,id} of an order-2 twist by L0 modulo 1 into the characters of
// W^{(1,0)} (integral weights) and W^{(1,1)} (weights in 1/2 + Z).
inline std::pair<PuiseuxSeries, PuiseuxSeries> split_twisted_character(const TraceFunction& zgi)
{
    if (zgi.g_order != 2)
        throw Error(ErrorCode::SpacingMismatch,
                    "twisted sector split needs g of order 2, got order " + std::to_string(zgi.g_order));
    return zgi.series.visit([&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        S integral(s.denom(), s.trunc()), half(s.denom(), s.trunc());
        for (const auto& [e, c] : s.terms()) {
            const Rational cls = frac(e + zgi.central_charge / 24);
            if (cls == 0)
                integral.add_term(e, c);
            else if (cls == Rational(1, 2))
                half.add_term(e, c);
            else
                throw Error(ErrorCode::SpacingMismatch,
                            "twisted-sector weight " + to_string(e + zgi.central_charge / 24) +
                                " is neither integral nor half-integral");
        }
        return std::pair<PuiseuxSeries, PuiseuxSeries>(PuiseuxSeries(integral), PuiseuxSeries(half));
    });
}

// Eigenspace characters of the untwisted sector: W^{(0,j)} = (Z_{id,id} +- Z_{id,g}) / 2.
inline std::pair<PuiseuxSeries, PuiseuxSeries> split_untwisted(const TraceFunction& zii, const TraceFunction& zig)
{
    const Rational half(1, 2);
    return {detail::scaled(zii.series + zig.series, half), detail::scaled(zii.series - zig.series, half)};
}

// Characters of the four V^g-modules as q-series, in label order.
inline std::array<PuiseuxSeries, 4> orbifold_module_characters(const TwistDatum& tw, int levels = default_levels)
{
    const TraceFunction zii = char_v(tw.lattice(), levels);
    const TraceFunction zig = z_id_g(tw, levels);
    const TraceFunction zgi = z_g_id(tw, levels);
    auto [w00, w01] = split_untwisted(zii, zig);
    auto [w10, w11] = split_twisted_character(zgi);
    return {w00, w01, w10, w11};
}

// Conformal weight of each module: lowest exponent plus c/24.
inline std::array<Rational, 4> orbifold_weights(const TwistDatum& tw, int levels = 4)
{
    const auto chars = orbifold_module_characters(tw, levels);
    const Rational c24 = tw.central_charge() / 24;
    std::array<Rational, 4> out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (chars[k].lead() >= chars[k].trunc())
            throw Error(ErrorCode::TailTooLarge, "module " + to_string(labels()[k]) + " is empty below the truncation");
        out[k] = chars[k].lead() + c24;
    }
    return out;
}

inline const std::vector<double>& default_y_grid()
{
    static const std::vector<double> g{0.2, 0.1, 0.05};
    return g;
}

struct QdimEstimate {
    std::vector<double> y;
    std::vector<double> ratios;
    double estimate = 0.0;   // extrapolated limit y -> 0
    double correction = 0.0; // bound on terms left out of the transformed numerator
};

namespace detail {

// Aitken delta-squared on the last three ratios when it is well defined.
inline double extrapolate(const std::vector<double>& r)
{
    if (r.size() < 3)
        return r.empty() ? 0.0 : r.back();
    const double a = r[r.size() - 3], b = r[r.size() - 2], c = r[r.size() - 1];
    const double d = (c - b) - (b - a);
    if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(c)))
        return c;
    const double x = c - (c - b) * (c - b) / d;
    return std::isfinite(x) ? x : c;
}

inline Complex checked_value(const PuiseuxSeries& s, double t, double tail_target)
{
    auto [v, tail] = s.evaluate(t);
    if (tail > tail_target * std::max(1.0, std::abs(v)))
        throw Error(ErrorCode::TailTooLarge, "tail majorant " + format_number(tail) + " at q = exp(-2 pi " +
                                                 format_number(t) + ")");
    return v;
}

} // namespace detail

// qdim = lim_{y->0} ch_W(iy) / ch_V(iy). The arguments are the S-transformed
// characters, ch(-1/tau), so that ch(iy) is read off at q = exp(-2 pi / y).
inline QdimEstimate qdim_numeric(const PuiseuxSeries& w_transformed, const PuiseuxSeries& v_transformed,
                                 const std::vector<double>& y_grid = default_y_grid(), double tail_target = 1e-9)
{
    QdimEstimate q;
    for (double y : y_grid) {
        const Complex w = detail::checked_value(w_transformed, 1.0 / y, tail_target);
        const Complex v = detail::checked_value(v_transformed, 1.0 / y, tail_target);
        q.y.push_back(y);
        q.ratios.push_back((w / v).real());
    }
    q.estimate = detail::extrapolate(q.ratios);
    return q;
}

// Numeric quantum dimensions of the four V^g-modules for an order-2 twist,
// using ch_{(0,j)}(iy) = (Z_{id,id}(i/y) + (-1)^j Z_{g,id}(i/y)) / 2 and
// ch_{(1,j)}(iy) = (Z_{id,g}(i/y) + (-1)^j F(i/y)) / 2, where F is the
// S-transform of the (-1)^{2 L0}-signed twisted character. F is not
// constructed; |F(i/y)| equals the signed character's modulus up to a
// phase and is reported as the correction bound.
inline std::array<QdimEstimate, 4> orbifold_qdims(const TwistDatum& tw, const std::vector<double>& y_grid = default_y_grid(),
                                                  int levels = 30, double tail_target = 1e-9)
{
    const TraceFunction zii = char_v(tw.lattice(), levels);
    const TraceFunction zig = z_id_g(tw, levels);
    const TraceFunction zgi = z_g_id(tw, levels);
    auto [w10, w11] = split_twisted_character(zgi);
    std::array<QdimEstimate, 4> out;
    for (double y : y_grid) {
        const double t = 1.0 / y;
        const Complex z11 = detail::checked_value(zii.series, t, tail_target);
        const Complex zg1 = detail::checked_value(zgi.series, t, tail_target);
        const Complex z1g = detail::checked_value(zig.series, t, tail_target);
        const double f = std::abs(detail::checked_value(w10, t, tail_target) - detail::checked_value(w11, t, tail_target));
        const Complex v = 0.5 * (z11 + zg1);
        const std::array<Complex, 4> w{v, 0.5 * (z11 - zg1), 0.5 * z1g, 0.5 * z1g};
        for (std::size_t k = 0; k < 4; ++k) {
            out[k].y.push_back(y);
            out[k].ratios.push_back((w[k] / v).real());
            if (k >= 2)
                out[k].correction = 0.5 * f / std::abs(v);
        }
    }
    for (auto& q : out)
        q.estimate = detail::extrapolate(q.ratios);
    return out;
}

// Order-n generalization: S_{(i,j),(k,l)} = (1/n) exp(-2 pi i (kj + il)/n).
// Only the group law and Verlinde consistency are claimed for n > 2.
inline Matrix<Complex> cyclic_s_matrix(unsigned n)
{
    const std::size_t size = static_cast<std::size_t>(n) * n;
    Matrix<Complex> s(size, size);
    for (const auto& a : labels(n))
        for (const auto& b : labels(n)) {
            const unsigned e = (b.i * a.j + a.i * b.j) % n;
            s(label_index(a, n), label_index(b, n)) =
                std::polar(1.0 / n, -2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
        }
    return s;
}

// N_{ab}^c = sum_d S_ad S_bd conj(S_cd) / S_0d.
inline Complex verlinde(const Matrix<Complex>& s, unsigned n, const OrbifoldLabel& a, const OrbifoldLabel& b,
                        const OrbifoldLabel& c)
{
    Complex sum(0.0, 0.0);
    for (const auto& d : labels(n)) {
        const std::size_t di = label_index(d, n);
        sum += s(label_index(a, n), di) * s(label_index(b, n), di) * std::conj(s(label_index(c, n), di)) / s(0, di);
    }
    return sum;
}

inline bool fusion_matches_verlinde(const Matrix<Complex>& s, const FusionTable& table, double tolerance = 1e-9)
{
    for (const auto& a : labels(table.n))
        for (const auto& b : labels(table.n))
            for (const auto& c : labels(table.n)) {
                const double expected = table(a, b) == c ? 1.0 : 0.0;
                if (std::abs(verlinde(s, table.n, a, b, c) - expected) > tolerance)
                    return false;
            }
    return true;
}

} // namespace orbivert
