#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <orbivert/catalog.hpp>
#include <orbivert/coset.hpp>
#include <orbivert/qseries.hpp>

#include "oracles.hpp"

using namespace orbivert;

namespace {

ExactSeries poly(std::initializer_list<std::pair<Rational, Rational>> terms, Rational trunc)
{
    ExactSeries s(1, trunc);
    for (const auto& [e, c] : terms)
        s.add_term(e, c);
    return s;
}

FrameShape shape(std::map<unsigned, long long> b) { return FrameShape{std::move(b)}; }

} // namespace

TEST(Series, AddMulScale)
{
    const Rational T(10);
    auto a = poly({{0, 1}, {1, 1}}, T);
    auto b = poly({{0, 1}, {1, -1}}, T);
    EXPECT_EQ(a + b, poly({{0, 2}}, T));
    EXPECT_EQ(a * b, poly({{0, 1}, {2, -1}}, T));
    EXPECT_EQ(a * Rational(3), poly({{0, 3}, {1, 3}}, T));

    auto x = ExactSeries::monomial(1, Rational(1, 2), T);
    auto y = ExactSeries::monomial(1, Rational(1, 3), T);
    auto xy = x * y;
    EXPECT_EQ(xy.denom(), 6);
    ASSERT_EQ(xy.terms().size(), 1u);
    EXPECT_EQ(xy.lead(), Rational(5, 6));
}

TEST(Series, MulTruncation)
{
    auto a = poly({{1, 1}, {2, 5}}, 4);
    auto b = poly({{-1, 2}}, 6);
    // a known below q^4, b below q^6: product known below min(4 - 1, 6 + 1).
    EXPECT_EQ((a * b).trunc(), 3);
}

TEST(Series, Invert)
{
    auto g = poly({{0, 1}, {1, -1}}, 8).inverse();
    for (int k = 0; k < 8; ++k)
        EXPECT_EQ(g.coefficient(k), 1);
    EXPECT_EQ(g.trunc(), 8);

    auto m = ExactSeries::monomial(1, Rational(1, 24), 5).inverse();
    EXPECT_EQ(m.lead(), Rational(-1, 24));
    EXPECT_EQ(m.lead_coefficient(), 1);
    EXPECT_EQ(m.term_count(), 1u);

    auto e = eta(1, 15);
    auto prod = e * e.inverse();
    EXPECT_EQ(prod, ExactSeries::constant(1, 15));
}

TEST(Series, InvertZeroLeading)
{
    try {
        ExactSeries(1, Rational(3)).inverse();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroLeading);
    }
}

TEST(Series, ModeMismatch)
{
    PuiseuxSeries a(ExactSeries::constant(1, 5));
    PuiseuxSeries b(ComplexSeries::constant(Complex(1, 0), 5));
    try {
        auto c = a + b;
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ModeMismatch);
    }
    EXPECT_NO_THROW(a * a);
    EXPECT_NO_THROW(b * b);
}

TEST(Series, CoefficientBeyondTruncation)
{
    auto a = poly({{0, 1}}, 3);
    EXPECT_THROW(a.coefficient(3), Error);
    EXPECT_EQ(a.coefficient(Rational(5, 2)), 0);
}

TEST(Eta, PentagonalOracle)
{
    const long long levels = 60;
    auto e = eta(1, levels);
    EXPECT_EQ(e.lead(), Rational(1, 24));
    auto c = oracle::pentagonal(levels);
    for (long long k = 0; k < levels; ++k)
        EXPECT_EQ(e.coefficient(Rational(1, 24) + k), c[static_cast<std::size_t>(k)]) << "k = " << k;
}

TEST(Eta, ScaledArguments)
{
    auto e2 = eta(2, 12);
    EXPECT_EQ(e2.lead(), Rational(1, 12));
    auto c = oracle::pentagonal(6);
    for (long long k = 0; k < 6; ++k) {
        EXPECT_EQ(e2.coefficient(Rational(1, 12) + 2 * k), c[static_cast<std::size_t>(k)]);
        EXPECT_EQ(e2.coefficient(Rational(1, 12) + 2 * k + 1), 0);
    }
    auto eh = eta(Rational(1, 2), 6);
    EXPECT_EQ(eh.lead(), Rational(1, 48));
    EXPECT_EQ(eh.denom(), 48);
    auto c12 = oracle::pentagonal(12);
    for (long long k = 0; k < 12; ++k)
        EXPECT_EQ(eh.coefficient(Rational(1, 48) + Rational(k, 2)), c12[static_cast<std::size_t>(k)]);
}

TEST(EtaFrame, LeadingExponents)
{
    EXPECT_EQ(eta_frame(shape({{1, 8}}), EtaArgument::upstairs, 10).lead(), Rational(1, 3));
    EXPECT_EQ(eta_frame(shape({{1, -8}, {2, 8}}), EtaArgument::upstairs, 10).lead(), Rational(1, 3));
    EXPECT_EQ(eta_frame(shape({{1, -8}, {2, 8}}), EtaArgument::downstairs, 10).lead(), Rational(-1, 6));
}

TEST(EtaFrame, RelativePrecision)
{
    auto f = eta_frame(shape({{1, -8}, {2, 8}}), EtaArgument::downstairs, 10);
    EXPECT_EQ(f.trunc() - f.lead(), 10);
}

// lead(upstairs) = sum t b_t / 24, lead(downstairs) = sum b_t / (24 t).
TEST(EtaFrameProperty, LeadFormulas)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::map<unsigned, long long> b;
        for (unsigned t : {1u, 2u, 3u, 4u, 6u})
            if (rng() % 2)
                b[t] = static_cast<long long>(rng() % 9) - 4;
        Rational up = 0, down = 0;
        for (auto [t, bt] : b) {
            up += Rational(t * bt, 24);
            down += Rational(bt, 24 * t);
        }
        EXPECT_EQ(eta_frame(shape(b), EtaArgument::upstairs, 4).lead(), up);
        EXPECT_EQ(eta_frame(shape(b), EtaArgument::downstairs, 4).lead(), down);
    }
}

TEST(Theta, FromShells)
{
    EXPECT_EQ(theta_from_shells(ShellCounts{{0, 1}}, 5), ExactSeries::constant(1, 5));
    auto shells = shell_counts(LatticeCoset::of_lattice(catalog::e8()), 2);
    auto theta = theta_from_shells(shells, 3);
    EXPECT_EQ(theta, poly({{0, 1}, {1, 240}, {2, 2160}}, 3));
}

TEST(Theta, HalfRootPhaseSumIsRealInteger)
{
    // Roots beta weighted by (-1)^{<alpha, beta>} for alpha the first simple root.
    auto e8 = catalog::e8();
    auto roots = short_vectors(LatticeCoset::of_lattice(e8), 1);
    const auto g = to_rational(e8.gram());
    RationalVector alpha(8, Rational(0));
    alpha[0] = 1;
    long long weight = 0;
    for (const auto& [q, v] : roots)
        if (q == 1)
            weight += is_integer(bilinear(g, alpha, v) / 2) ? 1 : -1;
    // Roots orthogonal to alpha form E7 (126), those with <alpha,beta> = +-1
    // number 2 * 56, and +-alpha itself: 126 - 112 + 2.
    EXPECT_EQ(weight, 16);
}

TEST(Evaluate, Basics)
{
    auto one = ExactSeries::constant(1, 10);
    auto [v1, t1] = one.evaluate(0.7);
    EXPECT_DOUBLE_EQ(v1.real(), 1.0);
    EXPECT_EQ(t1, 1.0 * std::exp(-2 * std::numbers::pi * 0.7 * 10) / (1 - std::exp(-2 * std::numbers::pi * 0.7)));
    auto q = ExactSeries::monomial(1, 1, 10);
    EXPECT_NEAR(q.evaluate(0.5).first.real(), std::exp(-std::numbers::pi), 1e-15);
    // A polynomial that is exact up to trunc: the heuristic tail is still reported.
    EXPECT_GT(q.evaluate(0.5).second, 0.0);
}

TEST(Evaluate, EtaSelfConsistency)
{
    auto lo = eta(1, 10).evaluate(1.0);
    auto hi = eta(1, 40).evaluate(1.0);
    EXPECT_LE(std::abs(lo.first - hi.first), lo.second);
    // Known value eta(i) = Gamma(1/4) / (2 pi^{3/4}).
    EXPECT_NEAR(hi.first.real(), std::tgamma(0.25) / (2 * std::pow(std::numbers::pi, 0.75)), 1e-14);
}

TEST(EvaluateProperty, MonotoneForNonnegativeSeries)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        ExactSeries s(4, 8);
        for (int k = 0; k < 10; ++k)
            s.add_term(Rational(static_cast<long long>(rng() % 32), 4), Rational(static_cast<long long>(rng() % 100)));
        double prev = s.evaluate(0.1).first.real();
        for (double t = 0.2; t < 3; t += 0.1) {
            double v = s.evaluate(t).first.real();
            EXPECT_LE(v, prev + 1e-12);
            prev = v;
        }
    }
}

namespace {

ExactSeries random_series(std::mt19937& rng)
{
    const std::int64_t n = 1 + rng() % 4;
    ExactSeries s(n, Rational(static_cast<long long>(4 + rng() % 6)));
    const int count = 1 + rng() % 8;
    for (int k = 0; k < count; ++k)
        s.add_term(Rational(static_cast<long long>(rng() % 40) - 8, n),
                   Rational(static_cast<long long>(rng() % 21) - 10, 1 + rng() % 3));
    return s;
}

ComplexSeries random_complex(std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1, 1);
    ComplexSeries s(2, Rational(6));
    for (int k = 0; k < 6; ++k)
        s.add_term(Rational(static_cast<long long>(rng() % 12), 2), Complex(u(rng), u(rng)));
    return s;
}

// Compares two complex series on all exponents below a common truncation.
void expect_near(const ComplexSeries& a, const ComplexSeries& b, double tol)
{
    const Rational t = std::min(a.trunc(), b.trunc());
    for (const auto* s : {&a, &b})
        for (const auto& [e, c] : s->terms())
            if (e < t)
                EXPECT_LT(std::abs(a.coefficient(e) - b.coefficient(e)), tol) << to_string(e);
}

} // namespace

TEST(SeriesProperty, RingAxiomsExact)
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_series(rng), b = random_series(rng), c = random_series(rng);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        auto l = (a * b) * c, r = a * (b * c);
        EXPECT_EQ(l.truncated(std::min(l.trunc(), r.trunc())), r.truncated(std::min(l.trunc(), r.trunc())));
        auto d1 = a * (b + c), d2 = a * b + a * c;
        const Rational t = std::min(d1.trunc(), d2.trunc());
        EXPECT_EQ(d1.truncated(t), d2.truncated(t));
        if (!a.is_zero() && a.lead() < a.trunc()) {
            auto inv = a.inverse();
            auto one = a * inv;
            EXPECT_EQ(one, ExactSeries::constant(1, one.trunc()));
            EXPECT_EQ(inv * a, one);
        }
    }
}

TEST(SeriesProperty, RingAxiomsComplex)
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_complex(rng), b = random_complex(rng), c = random_complex(rng);
        expect_near(a * b, b * a, 1e-12);
        expect_near((a * b) * c, a * (b * c), 1e-12);
        expect_near(a * (b + c), a * b + a * c, 1e-12);
    }
}
