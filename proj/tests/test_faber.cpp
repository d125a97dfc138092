#include <mockdelta/faber.hpp>

#include <gtest/gtest.h>

using namespace mockdelta;

namespace
{

IntPoly P(std::initializer_list<long> c)
{
    std::vector<BigInt> v;
    for (long x : c) {
        v.emplace_back(x);
    }
    return IntPoly(std::move(v));
}

} // namespace

TEST(Faber, FirstPolynomials)
{
    EXPECT_EQ(faber_psi(0), IntPoly(1));
    EXPECT_EQ(faber_psi(1), P({-744, 1}));
    EXPECT_EQ(faber_psi(2), P({159768, -1488, 1}));
    EXPECT_EQ(faber_psi(3), P({-36866976, 1069956, -2232, 1}));
    EXPECT_THROW(faber_psi(-1), std::invalid_argument);
}

TEST(Faber, GreedyMatchesGeneratingFunction)
{
    PrecisionContext ctx;
    const auto gen = faber_via_generating(40, ctx);
    ASSERT_EQ(gen.size(), 41u);
    for (int m = 0; m <= 40; ++m) {
        EXPECT_EQ(gen[m], faber_psi(m)) << "m=" << m;
    }
    ctx.series_order = 10;
    EXPECT_THROW(faber_via_generating(10, ctx), TruncationError);
}

TEST(Faber, MonicIntegralPrincipalPart)
{
    const QSeries j = jfunction(4);
    for (int m = 1; m <= 40; ++m) {
        const IntPoly p = faber_psi(m);
        ASSERT_EQ(p.degree(), m);
        EXPECT_TRUE(p.is_monic());
        const QSeries s = evaluate_at_series(to_rat(p), jfunction(m + 3));
        EXPECT_EQ(s.coeff(-m), 1);
        for (long e = -m + 1; e <= 0; ++e) {
            EXPECT_EQ(s.coeff(e), 0) << "m=" << m << " e=" << e;
        }
        EXPECT_GE(s.truncation(), 2);
    }
    (void)j;
}

TEST(Faber, EvaluateAtSeries)
{
    const QSeries j = jfunction(12);
    EXPECT_TRUE(agree(evaluate_at_series(RatPoly::x(), j), j));
    const QSeries s = evaluate_at_series(RatPoly({BigRat(-1728), BigRat(1)}), j);
    EXPECT_EQ(s.coeff(0), -984);
    const QSeries p2 = evaluate_at_series(to_rat(faber_psi(2)), j);
    EXPECT_EQ(p2.coeff(-2), 1);
    EXPECT_EQ(p2.coeff(-1), 0);
    EXPECT_EQ(p2.coeff(0), 0);
    EXPECT_EQ(p2.coeff(1), 42987520);
}

TEST(Faber, EvaluateRejectsUnderflow)
{
    const QSeries j = jfunction(1); // q^{-1} + 744 + O(q)
    EXPECT_THROW(evaluate_at_series(to_rat(faber_psi(3)), j.truncated(-1)), TruncationError);
}

TEST(Faber, HeckeImageOfJ1)
{
    PrecisionContext ctx;
    EXPECT_EQ(hecke_image_j1(2, 3, ctx).coeff(1), 42987520);
    EXPECT_EQ(hecke_image_j1(3, 3, ctx).coeff(1), BigInt("2592899910"));
    const QSeries j1 = hecke_image_j1(1, 10, ctx);
    const QSeries j = jfunction(10);
    EXPECT_TRUE(agree(j1, j - QSeries::monomial(0, BigRat(744), 10)));
}

TEST(Faber, HeckeIdentityForPsi)
{
    PrecisionContext ctx;
    for (int m = 2; m <= 20; ++m) {
        const long out = ctx.series_order / m; // m (out - 1) + 1 <= N
        const QSeries h = hecke_image_j1(m, out, ctx);
        const QSeries e = evaluate_at_series(to_rat(faber_psi(m)), jfunction(out + m + 1));
        EXPECT_TRUE(agree(h, e)) << "m=" << m;
        EXPECT_EQ(h.truncation(), out);
    }
    EXPECT_THROW(hecke_image_j1(20, 5, ctx), TruncationError);
}

TEST(Divisor, WeightTables)
{
    EXPECT_EQ(h_k(10), P({0, -1728, 1}));
    EXPECT_EQ(h_k(12), IntPoly(1));
    EXPECT_EQ(h_k(14), P({0, 0, -1728, 1}));
    EXPECT_EQ(h_k(4), P({0, 1}));
    EXPECT_EQ(h_k(6), P({-1728, 1}));
    EXPECT_EQ(h_k(8), P({0, 0, 1}));
    EXPECT_EQ(m_exponent(12), 1);
    EXPECT_EQ(m_exponent(14), 0);
    EXPECT_EQ(m_exponent(26), 1);
    EXPECT_EQ(m_exponent(24), 2);
    EXPECT_EQ(m_exponent(10), 0);
    EXPECT_TRUE(agree(tilde_e(12, 10), QSeries::monomial(0, BigRat(1), 10)));
    EXPECT_TRUE(agree(tilde_e(10, 10), eisenstein(10, 10)));
    EXPECT_THROW(h_k(7), std::invalid_argument);
    EXPECT_THROW(m_exponent(3), std::invalid_argument);
    EXPECT_THROW(tilde_e(5, 10), std::invalid_argument);
}

TEST(Divisor, SimpleForms)
{
    EXPECT_EQ(divisor_polynomial(delta(20), 12), RatPoly(BigRat(1)));
    EXPECT_EQ(divisor_polynomial(eisenstein(4, 20), 4), RatPoly::x());
    EXPECT_EQ(divisor_polynomial(eisenstein(6, 20), 6), to_rat(P({-1728, 1})));
    // E_4 * Delta has divisor polynomial x
    EXPECT_EQ(divisor_polynomial(eisenstein(4, 20) * delta(20), 16), RatPoly::x());
}

TEST(Divisor, E12HasOneRootInRange)
{
    const RatPoly f = divisor_polynomial(eisenstein(12, 30), 12);
    ASSERT_EQ(f.degree(), 1);
    const BigRat root = -f[0] / f[1];
    EXPECT_GT(root, 0);
    EXPECT_LT(root, 1728);
    // E_12 = (441 E_4^3 + 250 E_6^2) / 691 so F(E_12; x) is proportional to x - 432000/691
    EXPECT_EQ(root, BigRat(432000, 691));
}

TEST(Divisor, RejectsNonModularInput)
{
    EXPECT_THROW(divisor_polynomial(eisenstein(2, 20) * eisenstein(10, 20), 12), std::domain_error);
    EXPECT_THROW(divisor_polynomial(eisenstein(4, 20), 2), std::invalid_argument);
}
