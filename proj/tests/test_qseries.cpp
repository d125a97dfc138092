#include <mockdelta/qseries.hpp>

#include "generators.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace mockdelta;

namespace
{

// Akiyama-Tanigawa; gives B_1 = +1/2, which does not matter for even indices.
BigRat bernoulli_akiyama_tanigawa(int n)
{
    std::vector<BigRat> a(static_cast<std::size_t>(n + 1));
    for (int m = 0; m <= n; ++m) {
        a[m] = BigRat(1, m + 1);
        for (int j = m; j >= 1; --j) {
            a[j - 1] = BigRat(j) * (a[j - 1] - a[j]);
        }
    }
    return a[0];
}

// Delta = q * prod_{n >= 1} (1 - q^n)^24, coefficients below trunc.
std::vector<BigInt> delta_by_product(int trunc)
{
    std::vector<BigInt> p(static_cast<std::size_t>(trunc), BigInt(0)); // p[e] = coeff of q^e in prod
    p[0] = 1;
    for (int n = 1; n < trunc; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (int e = trunc - 1; e >= n; --e) {
                p[e] -= p[e - n];
            }
        }
    }
    std::vector<BigInt> d(static_cast<std::size_t>(trunc), BigInt(0));
    for (int e = 1; e < trunc; ++e) {
        d[e] = p[e - 1];
    }
    return d;
}

BigInt sigma_brute(unsigned nu, long n)
{
    BigInt s = 0;
    for (long d = 1; d <= n; ++d) {
        if (n % d == 0) {
            s += pow_int(BigInt(d), nu);
        }
    }
    return s;
}

} // namespace

TEST(Bernoulli, KnownValues)
{
    EXPECT_EQ(bernoulli(2), BigRat(1, 6));
    EXPECT_EQ(bernoulli(4), BigRat(-1, 30));
    EXPECT_EQ(bernoulli(12), BigRat(-691, 2730));
    EXPECT_THROW(bernoulli(3), std::invalid_argument);
    EXPECT_THROW(bernoulli(0), std::invalid_argument);
    EXPECT_THROW(bernoulli(-2), std::invalid_argument);
}

TEST(Bernoulli, AgreesWithAkiyamaTanigawa)
{
    for (int k = 2; k <= 40; k += 2) {
        EXPECT_EQ(bernoulli(k), bernoulli_akiyama_tanigawa(k)) << "k=" << k;
    }
}

TEST(Sigma, AgreesWithDivisorEnumeration)
{
    EXPECT_EQ(sigma(9, 1), 1);
    EXPECT_EQ(sigma(9, 2), 513);
    EXPECT_EQ(sigma(11, 2), 2049);
    EXPECT_THROW(sigma(3, 0), std::invalid_argument);
    for (long n = 1; n <= 200; ++n) {
        for (unsigned nu : {0u, 1u, 9u, 11u}) {
            EXPECT_EQ(sigma(nu, n), sigma_brute(nu, n));
        }
        EXPECT_EQ(BigInt(num_divisors(n)), sigma_brute(0, n));
    }
}

TEST(Eisenstein, Coefficients)
{
    EXPECT_EQ(eisenstein(10, 8).coeff(1), BigRat(-264));
    EXPECT_EQ(eisenstein(4, 8).coeff(0), BigRat(1));
    EXPECT_EQ(eisenstein(4, 8).coeff(1), BigRat(240));
    EXPECT_EQ(eisenstein(6, 8).coeff(1), BigRat(-504));
    EXPECT_EQ(eisenstein(12, 8).coeff(1), BigRat(65520, 691));
    EXPECT_EQ(eisenstein(2, 8).coeff(1), BigRat(-24));
    EXPECT_THROW(eisenstein(5, 8), std::invalid_argument);
    const QSeries e = eisenstein(8, 30);
    EXPECT_EQ(e.valuation(), 0);
    EXPECT_EQ(e.truncation(), 30);
    for (long n = 1; n < 30; ++n) {
        EXPECT_EQ(e.coeff(n), BigRat(480) * BigRat(sigma(7, n)));
    }
}

TEST(Eisenstein, E4SquaredIsE8)
{
    const QSeries e4 = eisenstein(4, 40);
    EXPECT_TRUE(agree(e4 * e4, eisenstein(8, 40)));
    EXPECT_TRUE(agree(e4 * eisenstein(6, 40), eisenstein(10, 40)));
}

TEST(Delta, MatchesProductFormula)
{
    const int n = 80;
    const QSeries d = delta(n);
    const auto ref = delta_by_product(n);
    EXPECT_EQ(d.valuation(), 1);
    for (int e = 1; e < n; ++e) {
        EXPECT_EQ(d.coeff(e), BigRat(ref[e])) << "q^" << e;
    }
    EXPECT_EQ(tau(2), -24);
    EXPECT_EQ(tau(3), 252);
    EXPECT_EQ(tau(4), -1472);
}

TEST(Delta, TauRespectsSeriesOrder)
{
    PrecisionContext ctx;
    ctx.series_order = 10;
    EXPECT_EQ(tau(9, ctx), tau(9));
    EXPECT_THROW(tau(10, ctx), TruncationError);
    EXPECT_THROW(tau(0), std::invalid_argument);
}

TEST(Delta, RamanujanCongruence)
{
    for (long m = 1; m < 64; ++m) {
        EXPECT_EQ((tau(m) - sigma(11, m)) % 691, 0) << "m=" << m;
    }
}

TEST(JFunction, LeadingCoefficients)
{
    const QSeries j = jfunction(10);
    EXPECT_EQ(j.valuation(), -1);
    EXPECT_EQ(j.coeff(-1), 1);
    EXPECT_EQ(j.coeff(0), 744);
    EXPECT_EQ(j.coeff(1), 196884);
    EXPECT_EQ(j.coeff(2), 21493760);
    EXPECT_EQ(j.truncation(), 10);
}

TEST(JFunction, TimesDeltaIsE4Cubed)
{
    const QSeries e4 = eisenstein(4, 60);
    const QSeries lhs = jfunction(60) * delta(60);
    EXPECT_TRUE(agree(lhs, e4 * e4 * e4));
    EXPECT_GE(lhs.truncation(), 59);
}

TEST(Series, GeometricSeries)
{
    const int n = 20;
    std::vector<BigRat> ones(n, BigRat(1));
    const QSeries geo(0, ones);
    std::vector<BigRat> poly(n, BigRat(0));
    poly[0] = 1;
    poly[1] = -1;
    const QSeries prod = QSeries(0, poly) * geo;
    EXPECT_THROW(QSeries(0, {BigRat(1), BigRat(-1)}).truncated(n), TruncationError);
    EXPECT_EQ(prod.coeff(0), 1);
    for (int e = 1; e < prod.truncation(); ++e) {
        EXPECT_EQ(prod.coeff(e), 0);
    }
    EXPECT_THROW(prod.coeff(prod.truncation()), TruncationError);
}

TEST(Series, TruncationPropagates)
{
    const QSeries a = QSeries::monomial(-2, BigRat(1), 5);
    const QSeries b = QSeries::monomial(1, BigRat(3), 10);
    EXPECT_EQ((a + b).truncation(), 5);
    EXPECT_EQ((a * b).valuation(), -1);
    EXPECT_EQ((a * b).truncation(), 6); // O(q^5) times q^1
    EXPECT_EQ(a.inverse().valuation(), 2);
}

TEST(Series, DeltaInverse)
{
    const QSeries inv = delta(30).inverse();
    EXPECT_EQ(inv.valuation(), -1);
    EXPECT_EQ(inv.coeff(-1), 1);
    EXPECT_EQ(inv.coeff(0), 24);
    EXPECT_THROW(QSeries(0, {BigRat(0), BigRat(1)}).inverse(), std::domain_error);
}

TEST(Series, E4CubedMinusE6SquaredStartsWith1728)
{
    const QSeries e4 = eisenstein(4, 10);
    const QSeries e6 = eisenstein(6, 10);
    const QSeries d = e4 * e4 * e4 - e6 * e6;
    EXPECT_EQ(d.coeff(0), 0);
    EXPECT_EQ(d.coeff(1), 1728);
}

TEST(SeriesProperty, InverseIsTwoSided)
{
    testgen::Gen g(5);
    for (int i = 0; i < 40; ++i) {
        const QSeries a = g.series(-3, 3, g.range(1, 15));
        const QSeries inv = a.inverse();
        const QSeries p = a * inv;
        const QSeries p2 = inv * a;
        EXPECT_EQ(p.valuation(), 0);
        EXPECT_EQ(p.truncation(), static_cast<long>(a.coeffs().size()));
        EXPECT_EQ(p.coeff(0), 1);
        for (long e = 1; e < p.truncation(); ++e) {
            EXPECT_EQ(p.coeff(e), 0);
            EXPECT_EQ(p2.coeff(e), 0);
        }
    }
}

TEST(SeriesProperty, RingLaws)
{
    testgen::Gen g(6);
    for (int i = 0; i < 40; ++i) {
        const QSeries a = g.series(-2, 2, g.range(1, 10));
        const QSeries b = g.series(-2, 2, g.range(1, 10));
        const QSeries c = g.series(-2, 2, g.range(1, 10));
        EXPECT_TRUE(agree(a * b, b * a));
        EXPECT_TRUE(agree((a * b) * c, a * (b * c)));
        EXPECT_TRUE(agree(a * (b + c), a * b + a * c));
        EXPECT_TRUE(agree(a.pow(3), a * a * a));
    }
}

TEST(Hecke, IdentityAtOne)
{
    const QSeries j = jfunction(20);
    EXPECT_TRUE(agree(hecke_holomorphic(j, 0, 1, 20), j));
}

TEST(Hecke, PrincipalPartOfInverseQ)
{
    const QSeries f = QSeries::monomial(-1, BigRat(1), 5);
    const QSeries t = hecke_holomorphic(f, 0, 2, 2);
    EXPECT_EQ(t.valuation(), -2);
    EXPECT_EQ(t.coeff(-2), BigRat(1, 2));
    EXPECT_EQ(t.coeff(-1), 0);
    EXPECT_EQ(t.coeff(0), 0);
}

TEST(Hecke, DeltaIsEigenform)
{
    const long out = 64 / 20;
    for (long m = 1; m <= 20; ++m) {
        const long out_trunc = std::max(out, 63 / m + 1);
        const QSeries d = delta(static_cast<int>(m * (out_trunc - 1) + 1));
        const QSeries t = hecke_holomorphic(d, 12, m, out_trunc);
        for (long n = 1; n < out_trunc; ++n) {
            EXPECT_EQ(t.coeff(n), BigRat(tau(m) * tau(n))) << "m=" << m << " n=" << n;
        }
    }
}

TEST(Hecke, RejectsShortInputWithRequiredOrder)
{
    const QSeries d = delta(10);
    try {
        (void)hecke_holomorphic(d, 12, 3, 5);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError &e) {
        EXPECT_EQ(e.required(), 13);
    }
}

TEST(Concurrency, CachesAreThreadSafe)
{
    std::vector<std::thread> threads;
    std::vector<BigInt> got(8);
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([i, &got] {
            got[i] = jfunction_int(40 + 13 * i).coeff(30) + tau(50 + i) - tau(50 + i);
            (void)bernoulli(2 * (i + 10));
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    for (int i = 1; i < 8; ++i) {
        EXPECT_EQ(got[i], got[0]);
    }
}
