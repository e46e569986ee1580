#include <gtest/gtest.h>

#include <random>

#include <orbivert/catalog.hpp>
#include <orbivert/characters.hpp>
#include <orbivert/orbifold.hpp>

using namespace orbivert;

namespace {

TwistDatum twist(const std::string& lattice, const std::string& aut, const std::string& shift)
{
    auto l = catalog::lattice(lattice);
    return TwistDatum::make(l, catalog::automorphism(aut, l), catalog::shift(shift, l));
}

FrameShape shape(std::map<unsigned, long long> b) { return FrameShape{std::move(b)}; }

} // namespace

TEST(TwistDatum, ProjectsShiftAndOrders)
{
    auto tw = twist("e8", "neg-identity", "half-root");
    EXPECT_EQ(tw.h(), RationalVector(8, Rational(0)));
    EXPECT_EQ(tw.g_order(), 2u);
    auto sw = twist("e8e8", "block-swap", "half-root");
    EXPECT_EQ(sw.h()[0], Rational(1, 4));
    EXPECT_EQ(sw.h()[8], Rational(1, 4));
    EXPECT_EQ(sw.shift_order(), 4);
    EXPECT_EQ(sw.g_order(), 4u);
    auto refl = twist("e8", "reflection", "zero");
    EXPECT_TRUE(refl.doubling());
    EXPECT_EQ(refl.lift_order(), 4u);
    EXPECT_TRUE(twist("e8", "identity", "zero").is_identity());
    EXPECT_FALSE(twist("e8", "identity", "half-root").is_identity());
}

TEST(TwistDatum, DefectDimension)
{
    EXPECT_EQ(twist("e8", "neg-identity", "zero").defect_dimension(), 16);
    EXPECT_EQ(twist("e8e8", "block-swap", "zero").defect_dimension(), 1);
    EXPECT_EQ(twist("e8", "reflection", "zero").defect_dimension(), 1);
    EXPECT_EQ(twist("e8", "coxeter", "zero").defect_dimension(), 1);
}

TEST(RhoLattice, Identity)
{
    auto r = rho_lattice(twist("e8", "identity", "zero"));
    EXPECT_EQ(r.rho, 0);
    EXPECT_EQ(r.verdict, Verdict::is_identity);
    EXPECT_EQ(r.bottom_dimension, 1);
    EXPECT_TRUE(r.theorem_holds);
}

TEST(RhoLattice, NegIdentity)
{
    auto r = rho_lattice(twist("e8", "neg-identity", "zero"));
    EXPECT_EQ(r.rho, Rational(1, 2));
    EXPECT_EQ(r.frame_term, Rational(1, 2));
    EXPECT_EQ(r.min_norm_half, 0);
    EXPECT_EQ(r.g_order, 2u);
    EXPECT_TRUE(r.rationality_ok);
    EXPECT_EQ(r.verdict, Verdict::conjecture_holds);
    EXPECT_EQ(r.bottom_dimension, 16);
}

TEST(RhoLattice, HalfRoot)
{
    auto r = rho_lattice(twist("e8", "identity", "half-root"));
    EXPECT_EQ(r.rho, Rational(1, 4));
    EXPECT_EQ(r.g_order, 2u);
    EXPECT_TRUE(r.rationality_ok);
    EXPECT_EQ(r.bottom_dimension, 2);
}

// Frozen values; each hand-checked from the weight formula.
TEST(RhoLattice, Catalog)
{
    const std::map<std::string, std::pair<Rational, unsigned>> expected{
        {"e8/identity", {0, 1}},
        {"e8/neg-identity", {Rational(1, 2), 2}},
        {"e8/half-root", {Rational(1, 4), 2}},
        {"e8/third-root", {Rational(1, 9), 3}},
        {"e8/reflection", {Rational(1, 16), 4}},
        {"e8/coxeter", {Rational(31, 90), 30}},
        {"e8/neg-identity+half-root", {Rational(1, 2), 2}},
        {"e8e8/block-swap", {Rational(1, 2), 2}},
        {"e8e8/block-swap+half-root", {Rational(5, 8), 4}},
    };
    for (const auto& ex : catalog::examples()) {
        auto r = rho_lattice(twist(ex.lattice, ex.automorphism, ex.shift));
        ASSERT_TRUE(expected.count(ex.name)) << ex.name;
        EXPECT_EQ(r.rho, expected.at(ex.name).first) << ex.name;
        EXPECT_EQ(r.g_order, expected.at(ex.name).second) << ex.name;
    }
}

TEST(RhoLattice, NotUnimodular)
{
    auto a1 = IntegralLattice::validate(IntMatrix{{2}});
    TwistDatum tw(a1, check_isometry(a1, IntMatrix{{-1}}), RationalVector{Rational(0)});
    try {
        rho_lattice(tw);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnimodular);
    }
}

TEST(Verdict, ViolationIsReportable)
{
    EXPECT_EQ(verdict_for(false, Rational(0)), Verdict::conjecture_violated);
    EXPECT_EQ(verdict_for(false, Rational(1, 9)), Verdict::conjecture_holds);
    EXPECT_EQ(verdict_for(true, Rational(0)), Verdict::is_identity);
    EXPECT_TRUE(rationality_ok(Rational(1, 4), 2));
    EXPECT_FALSE(rationality_ok(Rational(1, 8), 2));
    EXPECT_FALSE(rationality_ok(Rational(-1), 1));
}

TEST(RhoPermutation, Examples)
{
    auto id = rho_permutation(Rational(1, 3), 8, shape({{1, 3}}), 3);
    EXPECT_EQ(id.rho, 1);
    EXPECT_EQ(id.rho_tensor, 1);
    EXPECT_EQ(id.margin, 0);
    auto swap = rho_permutation(0, 8, shape({{2, 1}}), 2);
    EXPECT_EQ(swap.rho, Rational(1, 2));
    EXPECT_EQ(swap.margin, Rational(1, 2));
    EXPECT_EQ(swap.g_order, 2u);
    for (unsigned n = 2; n <= 7; ++n)
        EXPECT_EQ(rho_permutation(0, 24, shape({{n, 1}}), n).rho, Rational(n) - Rational(1, n));
}

TEST(RhoPermutation, Errors)
{
    try {
        rho_permutation(0, 8, shape({{1, -8}, {2, 8}}), 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativeCycle);
    }
    try {
        rho_permutation(0, 8, shape({{2, 1}}), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ShapeRankMismatch);
    }
}

TEST(CuspPole, Examples)
{
    EXPECT_TRUE(cusp_pole_check(0, 8));
    EXPECT_FALSE(cusp_pole_check(1, 24));
    EXPECT_FALSE(cusp_pole_check(0, 0));
}

// The swap on E8+E8 seen as a lattice isometry and as a permutation of two
// copies of V_E8.
TEST(OrbifoldProperty, CrossFormulaBlockSwap)
{
    auto lattice = rho_lattice(twist("e8e8", "block-swap", "zero"));
    auto perm = rho_permutation(0, 8, shape({{2, 1}}), 2);
    EXPECT_EQ(lattice.rho, perm.rho);
    EXPECT_EQ(lattice.rho, Rational(1, 2));
}

TEST(OrbifoldProperty, PositivityAndRationalityOnCatalog)
{
    for (const auto& ex : catalog::examples()) {
        auto tw = twist(ex.lattice, ex.automorphism, ex.shift);
        auto r = rho_lattice(tw);
        EXPECT_TRUE(r.rationality_ok) << ex.name;
        EXPECT_TRUE(r.theorem_holds) << ex.name;
        EXPECT_GE(r.bottom_dimension, 1) << ex.name;
        if (tw.is_identity()) {
            EXPECT_EQ(r.rho, 0);
        } else {
            EXPECT_GT(r.rho, 0) << ex.name;
            EXPECT_EQ(r.verdict, Verdict::conjecture_holds) << ex.name;
        }
    }
}

// Random cycle types: margin > 0 whenever the shape is not the identity and
// the cusp pole condition holds.
TEST(OrbifoldProperty, PermutationMarginPositive)
{
    std::mt19937 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        std::map<unsigned, long long> b;
        unsigned k = 0;
        for (unsigned t = 1; t <= 6; ++t)
            if (rng() % 2) {
                b[t] = 1 + rng() % 3;
                k += t * static_cast<unsigned>(b[t]);
            }
        if (k == 0)
            continue;
        const Rational rho_v(-static_cast<long long>(rng() % 3));
        const Rational c(static_cast<long long>(8 * (rng() % 4)));
        auto w = rho_permutation(rho_v, c, shape(b), k);
        EXPECT_EQ(w.rho - w.rho_tensor, w.margin);
        const bool identity = b.size() == 1 && b.count(1);
        if (!identity && cusp_pole_check(rho_v, c))
            EXPECT_GT(w.margin, 0);
        if (identity)
            EXPECT_EQ(w.margin, 0);
    }
}

TEST(LimitDiagnostics, Examples)
{
    auto id = twist("e8", "identity", "zero");
    auto d = limit_diagnostics(z_id_g(id, 12), z_g_id(id, 12));
    EXPECT_EQ(d.trend, Trend::converging);
    EXPECT_NEAR(d.r_limit, 1.0, 1e-9);

    auto neg = twist("e8", "neg-identity", "zero");
    auto dn = limit_diagnostics(z_id_g(neg, 12), z_g_id(neg, 12));
    EXPECT_EQ(dn.trend, Trend::vanishing);
    EXPECT_LT(dn.r_values.back(), dn.r_values.front());
    EXPECT_NEAR(dn.small_limit.real(), 1.0, 1e-3);
    EXPECT_TRUE(dn.trace_nonnegative);
}

TEST(LimitDiagnostics, InconsistentTrendIsDetected)
{
    auto neg = twist("e8", "neg-identity", "zero");
    auto zig = z_id_g(neg, 12);
    auto zgi = z_g_id(neg, 12);
    zgi.rho = 0; // claims a weight the series contradicts
    try {
        limit_diagnostics(zig, zgi);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InconsistentTrend);
    }
}

TEST(LimitDiagnostics, TailTooLarge)
{
    auto neg = twist("e8", "neg-identity", "zero");
    LimitOptions opt;
    opt.large = {0.01, 0.02};
    try {
        limit_diagnostics(z_id_g(neg, 3), z_g_id(neg, 3), opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TailTooLarge);
        EXPECT_TRUE(e.is_numeric());
    }
}

TEST(OrbifoldProperty, LimitTrendMatchesWeightSign)
{
    for (const auto& ex : catalog::examples()) {
        if (ex.lattice != "e8")
            continue;
        auto tw = twist(ex.lattice, ex.automorphism, ex.shift);
        auto d = limit_diagnostics(z_id_g(tw, 12), z_g_id(tw, 12));
        EXPECT_EQ(d.trend, d.expected) << ex.name;
        EXPECT_NEAR(d.small_limit.real(), 1.0, 1e-3) << ex.name;
    }
}
