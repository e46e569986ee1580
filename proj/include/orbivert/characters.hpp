#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "coset.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "orbifold.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "twist.hpp"

namespace orbivert {

namespace detail {

// Connected components of the Gram matrix graph, each as a list of indices.
inline std::vector<std::vector<std::size_t>> gram_components(const IntMatrix& g)
{
    const std::size_t n = g.rows();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0)
            continue;
        out.emplace_back();
        std::vector<std::size_t> stack{s};
        comp[s] = static_cast<int>(out.size() - 1);
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            out.back().push_back(i);
            for (std::size_t j = 0; j < n; ++j)
                if (comp[j] < 0 && g(i, j) != 0) {
                    comp[j] = comp[s];
                    stack.push_back(j);
                }
        }
    }
    return out;
}

} // namespace detail

// theta_L = sum_{a in L} q^{<a,a>/2} below q^trunc. Orthogonal summands
// visible in the Gram matrix are enumerated separately and multiplied.
inline ExactSeries lattice_theta(const IntegralLattice& lattice, const Rational& trunc)
{
    auto comps = detail::gram_components(lattice.gram());
    if (comps.size() <= 1)
        return theta_from_shells(shell_counts(LatticeCoset::of_lattice(lattice), trunc), trunc);
    std::map<std::vector<std::int64_t>, ExactSeries> cache;
    ExactSeries out = ExactSeries::constant(Rational(1), trunc);
    for (const auto& c : comps) {
        IntMatrix g(c.size(), c.size());
        std::vector<std::int64_t> key;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) {
                g(i, j) = lattice.gram()(c[i], c[j]);
                key.push_back(g(i, j));
            }
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, lattice_theta(IntegralLattice::validate(g), trunc)).first;
        out = out * it->second;
    }
    return out;
}

// ch_V = theta_L / eta^rank, known for `levels` integer levels above -c/24.
inline TraceFunction char_v(const IntegralLattice& lattice, int levels = default_levels)
{
    const Rational lv(levels);
    const auto rank = static_cast<long long>(lattice.rank());
    ExactSeries denominator = eta(1, lv).pow(rank);
    TraceFunction f;
    f.series = lattice_theta(lattice, lv) * denominator.inverse();
    f.kind = TraceKind::id_id;
    f.rho = 0;
    f.central_charge = Rational(rank);
    f.g_order = 1;
    return f;
}

// Phase-weighted theta of the fixed lattice: sum_{a in L^nu} e^{-2 pi i <h,a>} q^{<a,a>/2}.
// Exact when every phase is +-1.
inline PuiseuxSeries fixed_theta(const TwistDatum& tw, const Rational& trunc)
{
    const RatMatrix gram = to_rational(tw.lattice().gram());
    const std::size_t n = tw.lattice().rank();
    LatticeCoset coset(gram, to_rational(tw.fixed().fixed_basis), RationalVector(n, Rational(0)));
    // <h, basis_i> as a residue class modulo 1 over a common denominator D.
    const RationalVector w = coset.basis().transpose() * (gram * tw.h());
    const std::int64_t d = to_int64(linalg::common_denominator(w));
    std::vector<std::int64_t> weights(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        weights[i] = to_int64(num(w[i] * Rational(d)));
    const ResidueShells shells = shell_residue_counts(coset, trunc, weights, 0, d);
    if (d <= 2) {
        ExactSeries out(1, trunc);
        for (const auto& [e, c] : shells) {
            Integer s = Integer(c[0]);
            if (d == 2)
                s -= Integer(c[1]);
            out.add_term(e, Rational(s));
        }
        return out;
    }
    ComplexSeries out(1, trunc);
    for (const auto& [e, c] : shells) {
        Complex s(0.0, 0.0);
        for (std::int64_t r = 0; r < d; ++r)
            if (c[static_cast<std::size_t>(r)] != 0)
                s += static_cast<double>(c[static_cast<std::size_t>(r)]) *
                     std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d));
        out.add_term(e, s);
    }
    return out;
}

// Z_{id,g} = [phase-weighted theta of L^nu] / prod_t eta(t tau)^{b_t}.
inline TraceFunction z_id_g(const TwistDatum& tw, int levels = default_levels)
{
    if (tw.is_identity())
        return char_v(tw.lattice(), levels);
    if (!(tw.fixed().project(tw.h()) == tw.h()))
        throw Error(ErrorCode::NonProjectedShift, "shift is not in the fixed space");
    const Rational lv(levels);
    const ExactSeries inv = eta_frame(tw.shape(), EtaArgument::upstairs, lv).inverse();
    PuiseuxSeries theta = fixed_theta(tw, lv);
    TraceFunction f;
    if (theta.exact())
        f.series = theta.as_exact() * inv;
    else
        f.series = theta.as_complex_series() * inv.to_complex();
    f.kind = TraceKind::id_g;
    f.rho = 0;
    f.central_charge = tw.central_charge();
    f.g_order = tw.g_order();
    return f;
}

// Z_{g,id} = dim T * theta_{pi(L)+h} / prod_t eta(tau/t)^{b_t}; its leading
// exponent must equal rho(V_L(g)) - c/24.
inline TraceFunction z_g_id(const TwistDatum& tw, int levels = default_levels)
{
    tw.require_unimodular();
    const WeightReport w = rho_lattice(tw);
    TraceFunction f;
    if (tw.is_identity()) {
        f = char_v(tw.lattice(), levels);
    } else {
        const Rational lv(levels);
        const LatticeCoset coset = projected_coset(tw);
        const Rational top = w.min_norm_half + lv;
        ExactSeries theta = theta_from_shells(shell_counts(coset, top), top);
        theta = theta * Rational(tw.defect_dimension());
        f.series = theta * eta_frame(tw.shape(), EtaArgument::downstairs, lv).inverse();
    }
    f.kind = TraceKind::g_id;
    f.rho = w.rho;
    f.central_charge = tw.central_charge();
    f.g_order = tw.g_order();
    if (f.series.lead() + f.central_charge / 24 != w.rho)
        throw Error(ErrorCode::WeightMismatch, "series starts at q^" + to_string(f.series.lead()) +
                                                   " but the weight formula gives rho = " + to_string(w.rho));
    return f;
}

inline const std::vector<double>& default_s_points()
{
    static const std::vector<double> p{0.8, 1.0, 1.25};
    return p;
}

struct SCheckOptions {
    std::vector<double> points = default_s_points();
    double tail_target = 1e-9;
    double lambda_tolerance = 1e-6;
};

struct SCheckResult {
    Complex lambda_est;
    double max_residual = 0.0;
    std::vector<double> points;
    std::vector<double> residuals;
    double max_tail = 0.0;
    bool lambda_ok = false; // |lambda_est - 1| within tolerance
};

// Compares Z_{id,g}(i/t) with lambda Z_{g,id}(it), lambda fixed at t = 1.
inline SCheckResult s_check(const TraceFunction& zig, const TraceFunction& zgi, const SCheckOptions& opt = {})
{
    SCheckResult r;
    r.points = opt.points;
    auto eval = [&](const TraceFunction& f, double t) {
        auto [v, tail] = f.series.evaluate(t);
        if (tail > opt.tail_target)
            throw Error(ErrorCode::TailTooLarge, "tail majorant " + format_number(tail) + " at q = exp(-2 pi " +
                                                     format_number(t) + ") exceeds " +
                                                     format_number(opt.tail_target));
        r.max_tail = std::max(r.max_tail, tail);
        return v;
    };
    r.lambda_est = eval(zig, 1.0) / eval(zgi, 1.0);
    for (double t : opt.points) {
        const double res = std::abs(eval(zig, 1.0 / t) - r.lambda_est * eval(zgi, t));
        r.residuals.push_back(res);
        r.max_residual = std::max(r.max_residual, res);
    }
    r.lambda_ok = std::abs(r.lambda_est - Complex(1.0, 0.0)) <= opt.lambda_tolerance;
    return r;
}

// A trace value, exact when all contributing phases are +-1.
struct TraceValue {
    Complex value;
    std::optional<Rational> exact;
};

inline constexpr unsigned default_molien_cap = 4;

// tr_{V_level} g computed without eta products: the fixed-lattice phase sum
// times exp(sum_{k,j} tr(nu^k) q^{jk} / k), expanded by the power-sum
// recurrence n F_n = sum_m a_m F_{n-m}, a_m = sum_{k | m} (m/k) tr(nu^k).
inline TraceValue molien_trace(const TwistDatum& tw, unsigned level, unsigned cap = default_molien_cap)
{
    if (level > cap)
        throw Error(ErrorCode::LevelCapExceeded,
                    "level " + std::to_string(level) + " exceeds the cap " + std::to_string(cap));
    std::vector<Rational> a(level + 1, Rational(0)), f(level + 1, Rational(0));
    for (unsigned m = 1; m <= level; ++m)
        for (unsigned k = 1; k <= m; ++k)
            if (m % k == 0)
                a[m] += Rational((m / k) * tw.nu().power(k).trace());
    f[0] = 1;
    for (unsigned n = 1; n <= level; ++n) {
        Rational s = 0;
        for (unsigned m = 1; m <= n; ++m)
            s += a[m] * f[n - m];
        f[n] = s / n;
    }

    // Phase of a = sum_i x_i b_i is exp(-2 pi i r/D), r = sum_i x_i D <h, b_i> mod D.
    const RatMatrix gram = to_rational(tw.lattice().gram());
    LatticeCoset fixed(gram, to_rational(tw.fixed().fixed_basis), RationalVector(tw.lattice().rank(), Rational(0)));
    const RationalVector w = fixed.basis().transpose() * (gram * tw.h());
    const Integer d = linalg::common_denominator(w);
    const std::int64_t dd = to_int64(d);
    std::vector<std::int64_t> wn(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        wn[i] = to_int64(num(w[i] * Rational(d)));
    struct Acc {
        std::vector<Complex> theta;
        std::vector<Integer> signed_count;
        bool exact = true;
    };
    Acc init{std::vector<Complex>(level + 1), std::vector<Integer>(level + 1, Integer(0)), true};
    auto qmax = fixed.scaled_bound(Rational(level));
    Acc acc = CosetEnumerator(fixed).run(
        *qmax, init,
        [&](Acc& a, const std::vector<std::int64_t>& x, int128 q, int128&) {
            const auto k = static_cast<std::size_t>(to_int64(num(fixed.norm_half_from_scaled(Integer(static_cast<long long>(q))))));
            std::int64_t r = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
                r = (r + (x[i] % dd) * (wn[i] % dd)) % dd;
            r = (r + dd) % dd;
            if (r == 0) {
                a.signed_count[k] += 1;
                a.theta[k] += 1.0;
            } else if (2 * r == dd) {
                a.signed_count[k] -= 1;
                a.theta[k] -= 1.0;
            } else {
                a.exact = false;
                a.theta[k] += std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(dd));
            }
        },
        [](Acc& out, Acc&& other) {
            for (std::size_t i = 0; i < out.theta.size(); ++i) {
                out.theta[i] += other.theta[i];
                out.signed_count[i] += other.signed_count[i];
            }
            out.exact = out.exact && other.exact;
        });
    const auto& theta = acc.theta;
    std::vector<Rational> theta_exact(acc.signed_count.begin(), acc.signed_count.end());
    const bool exact = acc.exact;
    TraceValue out;
    Rational sum = 0;
    for (unsigned j = 0; j <= level; ++j) {
        sum += theta_exact[j] * f[level - j];
        out.value += theta[j] * to_double(f[level - j]);
    }
    if (exact) {
        out.exact = sum;
        out.value = Complex(to_double(sum), 0.0);
    }
    return out;
}

struct RealityReport {
    bool ok = true;
    std::optional<unsigned> falsified_level;
    double max_imag = 0.0;
    bool vacuum_exact = false; // tr_{V_0} g == 1 exactly
    std::vector<Complex> traces;
};

// tr_{V_k} g is real for every k and tr_{V_0} g = 1.
inline RealityReport reality_check(const TwistDatum& tw, unsigned max_level = 4, double tolerance = 1e-9)
{
    const TraceFunction z = z_id_g(tw, static_cast<int>(max_level) + 1);
    const Rational base = -z.central_charge / 24;
    RealityReport r;
    for (unsigned k = 0; k <= max_level; ++k) {
        const Complex v = z.series.coefficient(base + k);
        r.traces.push_back(v);
        r.max_imag = std::max(r.max_imag, std::abs(v.imag()));
        if (std::abs(v.imag()) > tolerance && !r.falsified_level)
            r.falsified_level = k;
    }
    r.vacuum_exact = z.series.visit([&](const auto& s) {
        using C = typename std::decay_t<decltype(s)>::coefficient_type;
        return s.coefficient(base) == C(1);
    });
    r.ok = !r.falsified_level && r.vacuum_exact;
    if (!r.vacuum_exact && !r.falsified_level)
        r.falsified_level = 0;
    return r;
}

} // namespace orbivert
