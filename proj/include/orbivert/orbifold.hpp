#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

#include "coset.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "rational.hpp"
#include "twist.hpp"

namespace orbivert {

enum class Verdict { is_identity, conjecture_holds, conjecture_violated };

inline std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::is_identity: return "is_identity";
    case Verdict::conjecture_holds: return "conjecture_holds";
    case Verdict::conjecture_violated: return "conjecture_violated";
    }
    return "unknown";
}

struct WeightReport {
    Rational rho;
    unsigned g_order = 1;
    FrameShape frame;
    Rational frame_term; // (1/24) sum b_t (t - 1/t)
    Rational min_norm_half;
    RationalVector witness;
    Integer bottom_dimension; // dim V(g)_rho
    Verdict verdict = Verdict::is_identity;
    bool theorem_holds = true; // rho >= 0, and bottom dimension 1 if rho = 0
    bool rationality_ok = true; // n^2 rho in Z_{>=0}
};

inline bool rationality_ok(const Rational& rho, unsigned n)
{
    const Rational x = rho * Rational(static_cast<long long>(n) * n);
    return is_integer(x) && x >= 0;
}

inline Verdict verdict_for(bool identity, const Rational& rho)
{
    if (identity)
        return Verdict::is_identity;
    return rho > 0 ? Verdict::conjecture_holds : Verdict::conjecture_violated;
}

// The coset pi_nu(L) + h inside L tensor Q.
inline LatticeCoset projected_coset(const TwistDatum& tw)
{
    return LatticeCoset(to_rational(tw.lattice().gram()), tw.fixed().proj_generators, tw.h());
}

// rho(V_L(g)) = (1/24) sum b_t (t - 1/t) + min_{a in pi(L)+h} <a,a>/2, for V_L of
// CFT type (rho(V) = 0).
inline WeightReport rho_lattice(const TwistDatum& tw)
{
    tw.require_unimodular();
    WeightReport r;
    r.g_order = tw.g_order();
    r.frame = tw.shape();
    r.frame_term = tw.shape().cycle_sum() / 24;
    const LatticeCoset coset = projected_coset(tw);
    const CosetMinimum m = coset_min(coset);
    r.min_norm_half = m.min_norm_half;
    r.witness = m.witness;
    r.rho = r.frame_term + m.min_norm_half;
    r.bottom_dimension = tw.defect_dimension() * Integer(short_vectors(coset, m.min_norm_half).size());
    r.verdict = verdict_for(tw.is_identity(), r.rho);
    r.theorem_holds = r.rho > 0 || (r.rho == 0 && r.bottom_dimension == 1);
    r.rationality_ok = rationality_ok(r.rho, r.g_order);
    return r;
}

struct PermutationWeight {
    Rational rho;        // rho(V^{tensor k}(g))
    Rational rho_tensor; // rho(V^{tensor k}) = k rho(V)
    Rational margin;     // rho - rho_tensor = (c/24 - rho(V)) sum b_t (t - 1/t)
    unsigned g_order = 1;
};

// Twisted module of a permutation g in S_k acting on V^{tensor k}:
// rho = rho(V) sum b_t/t + (c/24) sum b_t (t - 1/t).
inline PermutationWeight rho_permutation(const Rational& rho_v, const Rational& c, const FrameShape& shape,
                                         unsigned k)
{
    for (auto [t, bt] : shape.exponents)
        if (bt < 0)
            throw Error(ErrorCode::NegativeCycle,
                        "b_" + format_number(t) + " = " + std::to_string(bt) + " is not a cycle count");
    if (shape.degree() != static_cast<long long>(k))
        throw Error(ErrorCode::ShapeRankMismatch, "sum t b_t = " + std::to_string(shape.degree()) +
                                                      " but the permutation acts on " + std::to_string(k) +
                                                      " factors");
    PermutationWeight w;
    Rational inv = 0;
    Integer n = 1;
    for (auto [t, bt] : shape.exponents) {
        inv += Rational(bt, t);
        if (bt > 0)
            n = lcm(n, Integer(t));
    }
    w.rho = rho_v * inv + c / 24 * shape.cycle_sum();
    w.rho_tensor = rho_v * Rational(k);
    w.margin = (c / 24 - rho_v) * shape.cycle_sum();
    w.g_order = static_cast<unsigned>(to_int64(n));
    return w;
}

// Z_{id,id} of a holomorphic V has a pole at the cusp exactly when c/24 > rho(V).
inline bool cusp_pole_check(const Rational& rho_v, const Rational& c) { return c / 24 > rho_v; }

enum class Trend { diverging, converging, vanishing };

inline std::string_view to_string(Trend t) noexcept
{
    switch (t) {
    case Trend::diverging: return "diverging";
    case Trend::converging: return "converging";
    case Trend::vanishing: return "vanishing";
    }
    return "unknown";
}

inline const std::vector<double>& default_large_grid()
{
    static const std::vector<double> g{2.0, 4.0, 8.0};
    return g;
}

inline const std::vector<double>& default_small_grid()
{
    static const std::vector<double> g{0.05, 0.1, 0.2};
    return g;
}

struct LimitOptions {
    std::vector<double> large = default_large_grid();
    std::vector<double> small = default_small_grid();
    double delta = 1e-2;        // ratio band for "converging"
    double tail_target = 1e-9;  // largest acceptable tail majorant
};

struct LimitDiagnostics {
    std::vector<double> r_values; // r_g on the large grid
    Trend trend = Trend::converging;
    Trend expected = Trend::converging;
    double r_limit = 0.0;              // r_g at the largest t
    std::vector<Complex> small_values; // L_g on the small grid
    Complex small_limit;               // L_g at the smallest t
    bool trace_nonnegative = true;     // Re L >= -1e-9 and |Im L| <= 1e-9
};

// Large t: r_g(t) = Z_{g,id}(it) e^{-2 pi t (c/24 - rho(V))}, whose limit is
// infinite, dim V(g)_{rho(V)} or zero according to the sign of
// rho(V(g)) - rho(V). Small t: L_g(t) = sum_k tr_{V_{rho(V)+k}} g e^{-2 pi k/t},
// read off Z_{id,g}(i/t), tends to tr_{V_{rho(V)}} g (lambda = 1).
inline LimitDiagnostics limit_diagnostics(const TraceFunction& zig, const TraceFunction& zgi,
                                          const LimitOptions& opt = {})
{
    if (opt.large.size() < 2)
        throw Error(ErrorCode::DimensionMismatch, "large-t grid needs at least two points");
    const double two_pi = 2.0 * std::numbers::pi;
    const double c24 = to_double(zig.central_charge / 24);
    const double rho_v = to_double(zig.rho);
    LimitDiagnostics d;
    for (double t : opt.large) {
        auto [value, tail] = zgi.series.evaluate(t);
        const double scale = std::exp(-two_pi * t * (c24 - rho_v));
        if (tail * scale > opt.tail_target)
            throw Error(ErrorCode::TailTooLarge, "r_g tail at t = " + format_number(t) + " is " +
                                                     format_number(tail * scale));
        d.r_values.push_back(value.real() * scale);
    }
    const double last = d.r_values.back(), prev = d.r_values[d.r_values.size() - 2];
    const double ratio = last / prev;
    d.trend = ratio < 1 - opt.delta ? Trend::vanishing : ratio > 1 + opt.delta ? Trend::diverging : Trend::converging;
    d.r_limit = last;
    const Rational gap = zgi.rho - zig.rho;
    d.expected = gap > 0 ? Trend::vanishing : gap < 0 ? Trend::diverging : Trend::converging;
    if (d.trend != d.expected)
        throw Error(ErrorCode::InconsistentTrend, "r_g looks " + std::string(to_string(d.trend)) +
                                                      " but rho(V(g)) - rho(V) = " + to_string(gap));

    double smallest = 0.0;
    for (double t : opt.small) {
        auto [value, tail] = zig.series.evaluate(1.0 / t);
        const double scale = std::exp(-two_pi * (c24 - rho_v) / t);
        if (tail * scale > opt.tail_target)
            throw Error(ErrorCode::TailTooLarge, "L_g tail at t = " + format_number(t) + " is " +
                                                     format_number(tail * scale));
        d.small_values.push_back(value * scale);
        if (d.small_values.size() == 1 || t < smallest) {
            smallest = t;
            d.small_limit = d.small_values.back();
        }
    }
    d.trace_nonnegative = d.small_limit.real() >= -1e-9 && std::abs(d.small_limit.imag()) <= 1e-9;
    return d;
}

} // namespace orbivert
