#include <gtest/gtest.h>

#include <orbivert/catalog.hpp>
#include <orbivert/characters.hpp>

#include "oracles.hpp"

using namespace orbivert;

namespace {

TwistDatum twist(const std::string& lattice, const std::string& aut, const std::string& shift)
{
    auto l = catalog::lattice(lattice);
    return TwistDatum::make(l, catalog::automorphism(aut, l), catalog::shift(shift, l));
}

std::vector<TwistDatum> e8_examples()
{
    std::vector<TwistDatum> out;
    for (const auto& ex : catalog::examples())
        if (ex.lattice == "e8")
            out.push_back(twist(ex.lattice, ex.automorphism, ex.shift));
    return out;
}

Rational level(const TraceFunction& f, long long k) { return -f.central_charge / 24 + k; }

} // namespace

// theta_E8 from the coordinate model divided by eta^8 from the pentagonal
// theorem, all in plain integer arithmetic.
TEST(CharV, E8AgainstIndependentDivision)
{
    const long long n = 8;
    auto shells = oracle::e8_coordinate_shells(n - 1);
    oracle::Dense theta(n, 0);
    for (auto [k, c] : shells)
        theta[static_cast<std::size_t>(k)] = c;
    auto p = oracle::pentagonal(n);
    oracle::Dense eta8{1};
    eta8.resize(n, 0);
    for (int i = 0; i < 8; ++i)
        eta8 = oracle::dense_mul(eta8, p);
    auto expected = oracle::dense_mul(theta, oracle::dense_inverse(eta8));

    auto ch = char_v(catalog::e8(), static_cast<int>(n));
    EXPECT_EQ(ch.series.lead(), Rational(-1, 3));
    EXPECT_EQ(ch.central_charge, 8);
    const auto& s = ch.series.as_exact();
    for (long long k = 0; k < n; ++k)
        EXPECT_EQ(s.coefficient(level(ch, k)), expected[static_cast<std::size_t>(k)]) << k;
    EXPECT_EQ(s.coefficient(level(ch, 1)), 248);
    EXPECT_EQ(s.coefficient(level(ch, 2)), 4124);
}

TEST(CharV, E8E8IsSquare)
{
    auto e8 = char_v(catalog::e8(), 6).series.as_exact();
    auto e8e8 = char_v(catalog::e8_power(2), 6);
    EXPECT_EQ(e8e8.central_charge, 16);
    auto sq = e8 * e8;
    EXPECT_EQ(e8e8.series.as_exact().truncated(sq.trunc()), sq.truncated(e8e8.series.trunc()));
}

TEST(CharV, RankZero)
{
    auto zero = IntegralLattice::validate(IntMatrix(0, 0), "zero");
    auto ch = char_v(zero, 5);
    EXPECT_EQ(ch.series.as_exact(), ExactSeries::constant(1, 5));
}

TEST(ZIdG, IdentityIsCharV)
{
    auto tw = twist("e8", "identity", "zero");
    EXPECT_EQ(z_id_g(tw, 6).series.as_exact(), char_v(catalog::e8(), 6).series.as_exact());
    EXPECT_EQ(z_g_id(tw, 6).series.as_exact(), char_v(catalog::e8(), 6).series.as_exact());
}

TEST(ZIdG, NegIdentity)
{
    // eta(tau)^8 / eta(2 tau)^8 = q^{-1/3} prod (1 + q^k)^{-8}.
    const std::size_t n = 10;
    auto p = oracle::euler_product(n, 1);
    oracle::Dense p8{1};
    p8.resize(n, 0);
    for (int i = 0; i < 8; ++i)
        p8 = oracle::dense_mul(p8, p);
    auto expected = oracle::dense_inverse(p8);

    auto z = z_id_g(twist("e8", "neg-identity", "zero"), static_cast<int>(n));
    ASSERT_TRUE(z.series.exact());
    EXPECT_EQ(z.series.lead(), Rational(-1, 3));
    for (std::size_t k = 0; k < n; ++k)
        EXPECT_EQ(z.series.as_exact().coefficient(level(z, static_cast<long long>(k))), expected[k]) << k;
    EXPECT_EQ(expected[1], -8);
    EXPECT_EQ(expected[2], 28);
}

TEST(ZIdG, HalfRootLevelOne)
{
    // 8 Heisenberg states plus sum over roots of (-1)^{<alpha,beta>} = 16.
    auto z = z_id_g(twist("e8", "identity", "half-root"), 4);
    ASSERT_TRUE(z.series.exact());
    EXPECT_EQ(z.series.as_exact().coefficient(level(z, 1)), 8 + 16);
}

TEST(ZIdG, ThirdRootIsComplexMode)
{
    auto z = z_id_g(twist("e8", "identity", "third-root"), 3);
    EXPECT_FALSE(z.series.exact());
    EXPECT_NEAR(z.series.coefficient(level(z, 0)).real(), 1.0, 1e-12);
}

TEST(ZGId, Leads)
{
    auto neg = z_g_id(twist("e8", "neg-identity", "zero"), 6);
    EXPECT_EQ(neg.series.lead(), Rational(1, 6));
    EXPECT_EQ(neg.rho, Rational(1, 2));
    EXPECT_EQ(neg.series.as_exact().lead_coefficient(), 16);
    auto half = z_g_id(twist("e8", "identity", "half-root"), 6);
    EXPECT_EQ(half.series.lead(), Rational(-1, 12));
    EXPECT_EQ(half.rho, Rational(1, 4));
}

TEST(ZGId, NotUnimodular)
{
    auto a1 = IntegralLattice::validate(IntMatrix{{2}});
    TwistDatum tw(a1, check_isometry(a1, IntMatrix{{1}}), RationalVector{Rational(1, 2)});
    EXPECT_NO_THROW(z_id_g(tw, 4));
    try {
        z_g_id(tw, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnimodular);
    }
}

TEST(SCheck, E8Examples)
{
    for (const char* shift : {"zero", "half-root"}) {
        auto tw = twist("e8", "identity", shift);
        auto r = s_check(z_id_g(tw), z_g_id(tw));
        EXPECT_LE(r.max_residual, 1e-6) << shift;
        EXPECT_TRUE(r.lambda_ok) << shift;
        EXPECT_GT(r.lambda_est.real(), 0.0);
    }
    auto neg = twist("e8", "neg-identity", "zero");
    auto r = s_check(z_id_g(neg), z_g_id(neg));
    EXPECT_LE(r.max_residual, 1e-6);
    EXPECT_NEAR(r.lambda_est.real(), 1.0, 1e-6);
    EXPECT_EQ(r.residuals.size(), 3u);
}

TEST(SCheck, CorruptedDenominatorFails)
{
    auto neg = twist("e8", "neg-identity", "zero");
    TraceFunction bad = z_id_g(neg);
    // theta_{L^nu} = 1 over the identity's eta^8 instead of the frame product.
    bad.series = ExactSeries(eta(1, 20).pow(8).inverse());
    auto r = s_check(bad, z_g_id(neg));
    EXPECT_GT(r.max_residual, 1e-2);
}

TEST(SCheck, TailTooLarge)
{
    auto tw = twist("e8", "neg-identity", "zero");
    SCheckOptions opt;
    opt.points = {0.05};
    try {
        s_check(z_id_g(tw, 3), z_g_id(tw, 3), opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TailTooLarge);
    }
}

TEST(Molien, Examples)
{
    auto id = twist("e8", "identity", "zero");
    EXPECT_EQ(*molien_trace(id, 1).exact, 248);
    auto neg = twist("e8", "neg-identity", "zero");
    EXPECT_EQ(*molien_trace(neg, 1).exact, -8);
    for (const auto& tw : e8_examples())
        EXPECT_EQ(molien_trace(tw, 0).value, Complex(1.0, 0.0));
    try {
        molien_trace(id, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LevelCapExceeded);
    }
    EXPECT_NO_THROW(molien_trace(id, 5, 5));
}

TEST(CharactersProperty, MolienMatchesEtaQuotient)
{
    for (const auto& tw : e8_examples()) {
        auto z = z_id_g(tw, 5);
        for (unsigned k = 0; k <= 4; ++k) {
            auto m = molien_trace(tw, k);
            const Rational e = level(z, k);
            if (z.series.exact()) {
                ASSERT_TRUE(m.exact.has_value());
                EXPECT_EQ(*m.exact, z.series.as_exact().coefficient(e)) << k;
            } else {
                EXPECT_LT(std::abs(m.value - z.series.coefficient(e)), 1e-9) << k;
            }
        }
    }
    auto sw = twist("e8e8", "block-swap", "half-root");
    auto z = z_id_g(sw, 5);
    for (unsigned k = 0; k <= 4; ++k)
        EXPECT_EQ(*molien_trace(sw, k).exact, z.series.as_exact().coefficient(level(z, k))) << k;
}

TEST(CharactersProperty, TraceBoundedByDimension)
{
    auto ch = char_v(catalog::e8(), 8);
    for (const auto& tw : e8_examples()) {
        auto z = z_id_g(tw, 8);
        for (long long k = 0; k < 8; ++k)
            EXPECT_LE(std::abs(z.series.coefficient(level(z, k))),
                      std::abs(ch.series.coefficient(level(ch, k))) + 1e-9);
    }
}

TEST(CharactersProperty, TwistedSectorShape)
{
    std::vector<TwistDatum> all = e8_examples();
    all.push_back(twist("e8e8", "block-swap", "zero"));
    all.push_back(twist("e8e8", "block-swap", "half-root"));
    for (const auto& tw : all) {
        auto z = z_g_id(tw, 4);
        ASSERT_TRUE(z.series.exact());
        const auto& s = z.series.as_exact();
        EXPECT_EQ(s.lead() + z.central_charge / 24, rho_lattice(tw).rho);
        EXPECT_GE(s.lead_coefficient(), 1);
        for (const auto& [e, c] : s.terms()) {
            EXPECT_GT(c, 0);
            EXPECT_TRUE(is_integer((e - s.lead()) * Rational(tw.g_order())));
        }
    }
}

TEST(Reality, Examples)
{
    for (const auto& tw : e8_examples()) {
        auto r = reality_check(tw, 4);
        EXPECT_TRUE(r.ok);
        EXPECT_TRUE(r.vacuum_exact);
        EXPECT_LE(r.max_imag, 1e-9);
        EXPECT_EQ(r.traces.size(), 5u);
    }
    auto half = reality_check(twist("e8", "identity", "half-root"), 1);
    EXPECT_EQ(half.traces[1], Complex(24.0, 0.0));
}
