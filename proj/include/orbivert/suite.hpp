#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "characters.hpp"
#include "coset.hpp"
#include "error.hpp"
#include "fusion_qdim.hpp"
#include "lattice.hpp"
#include "orbifold.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "twist.hpp"

// The acceptance set: nine criteria, each a deterministic pass/fail check
// with a runtime budget.
namespace orbivert::suite {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget = 0.0;
};

inline TwistDatum example_twist(const catalog::Example& ex)
{
    const IntegralLattice l = catalog::lattice(ex.lattice);
    return TwistDatum::make(l, catalog::automorphism(ex.automorphism, l), catalog::shift(ex.shift, l));
}

inline TwistDatum example_twist(std::string_view name)
{
    for (const auto& ex : catalog::examples())
        if (ex.name == name)
            return example_twist(ex);
    throw Error(ErrorCode::Parse, "unknown example '" + std::string(name) + "'");
}

namespace detail {

// Collects failed checks; the criterion passes when none failed.
class Checks {
public:
    void expect(bool ok, const std::string& what)
    {
        ++count_;
        if (!ok)
            failures_.push_back(what);
    }
    bool ok() const { return failures_.empty(); }
    std::string summary() const
    {
        if (failures_.empty())
            return std::to_string(count_) + " checks";
        std::string s = std::to_string(failures_.size()) + "/" + std::to_string(count_) + " failed: " + failures_.front();
        if (failures_.size() > 1)
            s += "; ...";
        return s;
    }

private:
    std::size_t count_ = 0;
    std::vector<std::string> failures_;
};

inline std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << x;
    return s.str();
}

// Dense integer coefficients of prod_{k>=1} (1 - q^k)^{-power} below q^n.
inline std::vector<Integer> euler_inverse_power(std::size_t n, int power)
{
    std::vector<Integer> p(n, Integer(0));
    p[0] = 1;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i) // multiply by (1 - q^k)
            p[i] -= p[i - k];
    std::vector<Integer> inv(n, Integer(0));
    inv[0] = 1;
    for (std::size_t m = 1; m < n; ++m) {
        Integer s = 0;
        for (std::size_t k = 1; k <= m; ++k)
            s += p[k] * inv[m - k];
        inv[m] = -s;
    }
    std::vector<Integer> out(n, Integer(0));
    out[0] = 1;
    for (int r = 0; r < power; ++r) {
        std::vector<Integer> next(n, Integer(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j)
                next[i + j] += out[i] * inv[j];
        out = std::move(next);
    }
    return out;
}

inline ExactSeries random_series(std::mt19937& rng)
{
    const std::int64_t n = 1 + rng() % 4;
    ExactSeries s(n, Rational(static_cast<long long>(4 + rng() % 6)));
    const int count = 1 + rng() % 8;
    for (int k = 0; k < count; ++k)
        s.add_term(Rational(static_cast<long long>(rng() % 40) - 8, n),
                   Rational(static_cast<long long>(rng() % 21) - 10, 1 + rng() % 3));
    return s;
}

} // namespace detail

// 1. rho for -I on E8 is 1/2, order 2, and n^2 rho is integral.
inline void criterion_1(detail::Checks& c)
{
    const WeightReport w = rho_lattice(example_twist("e8/neg-identity"));
    c.expect(w.rho == Rational(1, 2), "rho = " + to_string(w.rho));
    c.expect(w.g_order == 2, "order " + std::to_string(w.g_order));
    c.expect(w.rationality_ok && is_integer(w.rho * 4), "1/2 not in (1/4)Z");
}

// 2. Block swap on E8+E8: lattice formula = permutation formula = 1/2.
inline void criterion_2(detail::Checks& c)
{
    const WeightReport w = rho_lattice(example_twist("e8e8/block-swap"));
    FrameShape two;
    two.exponents[2] = 1;
    const PermutationWeight p = rho_permutation(Rational(0), Rational(8), two, 2);
    c.expect(w.rho == p.rho, "lattice " + to_string(w.rho) + " vs permutation " + to_string(p.rho));
    c.expect(w.rho == Rational(1, 2), "rho = " + to_string(w.rho));
}

// 3. Molien traces against the eta quotient, and char_v(E8) against
// shells divided by eta^8 done independently on dense integers.
inline void criterion_3(detail::Checks& c)
{
    const TwistDatum neg = example_twist("e8/neg-identity");
    const TraceFunction z = z_id_g(neg, 5);
    c.expect(z.series.exact(), "z_id_g(-I) is not exact");
    const Rational base = -z.central_charge / 24;
    for (unsigned k = 0; k <= 4; ++k) {
        const TraceValue m = molien_trace(neg, k);
        c.expect(m.exact.has_value(), "Molien level " + std::to_string(k) + " not exact");
        if (m.exact)
            c.expect(z.series.as_exact().coefficient(base + k) == *m.exact,
                     "level " + std::to_string(k) + ": " + to_string(z.series.as_exact().coefficient(base + k)) +
                         " vs Molien " + to_string(*m.exact));
    }

    const IntegralLattice e8 = catalog::e8();
    const TraceFunction v = char_v(e8, 3);
    const ShellCounts shells = shell_counts(LatticeCoset::of_lattice(e8), 3);
    std::vector<Integer> theta(3, Integer(0));
    for (const auto& [e, n] : shells)
        if (e < 3)
            theta[static_cast<std::size_t>(to_int64(num(e)))] += Integer(n);
    const std::vector<Integer> inv = detail::euler_inverse_power(3, 8);
    const long long expected[] = {1, 248, 4124};
    for (std::size_t k = 0; k < 3; ++k) {
        Integer d = 0;
        for (std::size_t j = 0; j <= k; ++j)
            d += theta[j] * inv[k - j];
        const Rational lib = v.series.as_exact().coefficient(Rational(-1, 3) + Rational(static_cast<long long>(k)));
        c.expect(d == expected[k], "division level " + std::to_string(k) + " = " + d.str());
        c.expect(lib == expected[k], "char_v level " + std::to_string(k) + " = " + to_string(lib));
    }
}

// 4. S-transformation residuals at trunc 20, lambda = 1, and a corrupted
// denominator as negative control.
inline void criterion_4(detail::Checks& c)
{
    for (const char* name : {"e8/identity", "e8/neg-identity", "e8/half-root"}) {
        const TwistDatum tw = example_twist(name);
        const SCheckResult r = s_check(z_id_g(tw, 20), z_g_id(tw, 20));
        c.expect(r.max_residual <= 1e-6, std::string(name) + " residual " + detail::fmt(r.max_residual));
        c.expect(std::abs(r.lambda_est - Complex(1.0, 0.0)) <= 1e-6,
                 std::string(name) + " lambda " + detail::fmt(std::abs(r.lambda_est - Complex(1.0, 0.0))));
    }
    const TwistDatum neg = example_twist("e8/neg-identity");
    TraceFunction bad = z_id_g(neg, 20);
    bad.series = ExactSeries(eta(1, 20).pow(8).inverse());
    const SCheckResult r = s_check(bad, z_g_id(neg, 20));
    c.expect(r.max_residual > 1e-2, "negative control residual only " + detail::fmt(r.max_residual));
}

// 5. rho >= 0 on every example, rho = 0 only for the identity with a
// one-dimensional bottom, and rho > 0 otherwise.
inline void criterion_5(detail::Checks& c)
{
    for (const auto& ex : catalog::examples()) {
        const TwistDatum tw = example_twist(ex);
        const WeightReport w = rho_lattice(tw);
        c.expect(w.rho >= 0, ex.name + " rho " + to_string(w.rho));
        c.expect(w.theorem_holds, ex.name + " theorem check");
        if (w.rho == 0)
            c.expect(tw.is_identity() && w.bottom_dimension == 1, ex.name + " rho = 0 away from the identity");
        if (!tw.is_identity())
            c.expect(w.rho > 0 && w.verdict == Verdict::conjecture_holds, ex.name + " rho not positive");
    }
}

// 6. Order-2 orbifold S-matrix, Verlinde on all 64 triples, quantum
// dimensions of both scenarios, and weight congruence of computed weights.
inline void criterion_6(detail::Checks& c)
{
    const SMatrix s;
    const FusionTable table = cyclic_fusion_table(2);
    for (const auto& a : labels())
        for (const auto& b : labels()) {
            const Rational e((b.i * a.j + a.i * b.j) % 2 ? -1 : 1, 2);
            c.expect(s(a, b) == e, "S" + to_string(a) + to_string(b));
            for (const auto& l : labels())
                c.expect(verlinde(s, a, b, l) == (table(a, b) == l ? 1 : 0),
                         "N_" + to_string(a) + to_string(b) + "^" + to_string(l));
        }
    for (const auto& l : labels()) {
        c.expect(qdim_smatrix(l, QdimScenario::positivity) == 1, "positivity qdim " + to_string(l));
        c.expect(qdim_smatrix(l, QdimScenario::degenerate) == (l.j == 0 ? 1 : 0), "degenerate qdim " + to_string(l));
    }
    for (const char* name : {"e8/neg-identity", "e8e8/block-swap"}) {
        const auto w = orbifold_weights(example_twist(name), 4);
        for (std::size_t k = 0; k < 4; ++k)
            c.expect(weight_congruence(labels()[k], w[k]),
                     std::string(name) + " " + to_string(labels()[k]) + " weight " + to_string(w[k]));
    }
}

// 7. Traces of g on V_k are real for k <= 4, and 1 on the vacuum.
inline void criterion_7(detail::Checks& c)
{
    for (const auto& ex : catalog::examples()) {
        const RealityReport r = reality_check(example_twist(ex), 4, 1e-9);
        c.expect(r.ok, ex.name + " imaginary part " + detail::fmt(r.max_imag));
        c.expect(r.vacuum_exact, ex.name + " vacuum trace");
    }
}

// 8. Large-t trend of r_g follows the weight gap; small-t L_g tends to 1.
inline void criterion_8(detail::Checks& c)
{
    for (const auto& ex : catalog::examples()) {
        const TwistDatum tw = example_twist(ex);
        const LimitDiagnostics d = limit_diagnostics(z_id_g(tw, 12), z_g_id(tw, 12));
        c.expect(d.trend == d.expected, ex.name + " trend " + std::string(to_string(d.trend)));
        c.expect(std::abs(d.small_limit - Complex(1.0, 0.0)) <= 1e-3,
                 ex.name + " L_g off by " + detail::fmt(std::abs(d.small_limit - Complex(1.0, 0.0))));
    }
}

// 9. Property suites: frame shapes of block permutations, coset_min shift
// invariance, series ring axioms.
inline void criterion_9(detail::Checks& c)
{
    std::mt19937 rng(20240611);
    const std::vector<IntegralLattice> powers{catalog::e8_power(1), catalog::e8_power(2), catalog::e8_power(3)};
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + rng() % 3;
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto& l = powers[k - 1];
        const LatticeIsometry nu = check_isometry(l, catalog::block_permutation(perm));
        const FrameShape shape = frame_shape(l, nu);
        IntMatrix p = IntMatrix::identity(l.rank());
        bool ok = shape.degree() == static_cast<long long>(l.rank());
        for (unsigned j = 1; j <= nu.order(); ++j) {
            p = p * nu.matrix();
            ok = ok && p.trace() == shape.predicted_trace(j);
        }
        c.expect(ok, "frame shape trial " + std::to_string(trial));
    }

    const IntegralLattice e8 = catalog::e8();
    for (int trial = 0; trial < 50; ++trial) {
        RationalVector shift(8), moved(8);
        for (std::size_t i = 0; i < 8; ++i) {
            shift[i] = Rational(static_cast<long long>(rng() % 13) - 6, 1 + rng() % 6);
            moved[i] = shift[i] + static_cast<long long>(rng() % 9) - 4;
        }
        const CosetMinimum a = coset_min(LatticeCoset::of_lattice(e8, shift));
        const CosetMinimum b = coset_min(LatticeCoset::of_lattice(e8, moved));
        c.expect(a.min_norm_half == b.min_norm_half && a.witness == b.witness,
                 "coset_min shift trial " + std::to_string(trial));
    }

    for (int trial = 0; trial < 200; ++trial) {
        const ExactSeries a = detail::random_series(rng), b = detail::random_series(rng), s = detail::random_series(rng);
        auto same = [](const ExactSeries& x, const ExactSeries& y) {
            const Rational t = std::min(x.trunc(), y.trunc());
            return x.truncated(t) == y.truncated(t);
        };
        bool ok = a + b == b + a && a * b == b * a && (a + b) + s == a + (b + s);
        ok = ok && same((a * b) * s, a * (b * s)) && same(a * (b + s), a * b + a * s);
        if (!a.is_zero() && a.lead() < a.trunc()) {
            const ExactSeries one = a * a.inverse();
            ok = ok && one == ExactSeries::constant(Rational(1), one.trunc());
        }
        c.expect(ok, "series axioms trial " + std::to_string(trial));
    }
}

struct Criterion {
    int id;
    const char* title;
    double budget; // seconds
    void (*run)(detail::Checks&);
};

inline const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> all{
        {1, "rho(E8, -I) = 1/2 with n = 2", 1, criterion_1},
        {2, "block swap: lattice formula = permutation formula", 5, criterion_2},
        {3, "Molien traces and char_v oracles", 30, criterion_3},
        {4, "S-transformation residuals and lambda", 60, criterion_4},
        {5, "positivity on built-in examples", 10, criterion_5},
        {6, "order-2 S-matrix, Verlinde, qdim, weight congruence", 1, criterion_6},
        {7, "reality of traces", 30, criterion_7},
        {8, "limit diagnostics", 10, criterion_8},
        {9, "property suites", 60, criterion_9},
    };
    return all;
}

inline CriterionResult run_criterion(const Criterion& k)
{
    CriterionResult r;
    r.id = k.id;
    r.title = k.title;
    r.budget = k.budget;
    detail::Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
        k.run(checks);
    } catch (const std::exception& e) {
        checks.expect(false, e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = checks.ok() && r.seconds < r.budget;
    r.detail = checks.summary();
    if (r.seconds >= r.budget)
        r.detail += "; over the " + detail::fmt(r.budget) + " s budget";
    return r;
}

inline std::vector<CriterionResult> run_all()
{
    std::vector<CriterionResult> out;
    for (const auto& k : criteria())
        out.push_back(run_criterion(k));
    return out;
}

} // namespace orbivert::suite
