#include <mockdelta/analytic.hpp>
#include <mockdelta/heckepoly.hpp>

#include "generators.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace mockdelta;

namespace
{

long double brute_kloosterman(long m, long n, long c)
{
    long double s = 0;
    for (long a = 0; a < c; ++a) {
        if (std::gcd(a, c) != 1) {
            continue;
        }
        long inv = 0;
        for (long b = 1; b <= c; ++b) {
            if ((a * b) % c == 1 % c) {
                inv = b;
                break;
            }
        }
        const long e = ((m * a + n * inv) % c + c) % c;
        s += std::cos(2 * 3.14159265358979323846264338327950288L * e / c);
    }
    return s;
}

long brute_ramanujan(long c, long n)
{
    long double s = 0;
    for (long a = 1; a <= c; ++a) {
        if (std::gcd(a, c) == 1) {
            s += std::cos(2 * 3.14159265358979323846264338327950288L * a * n / c);
        }
    }
    return std::lround(static_cast<double>(s));
}

PrecisionContext fast_ctx()
{
    PrecisionContext ctx;
    ctx.c_max = 2000;
    return ctx;
}

} // namespace

TEST(Kloosterman, MatchesDirectSum)
{
    DigitsGuard g(40);
    testgen::Gen gen(11);
    for (long c = 1; c <= 50; ++c) {
        for (int rep = 0; rep < 4; ++rep) {
            const long m = gen.range(-60, 60);
            const long n = gen.range(-60, 60);
            const double got = kloosterman(m, n, c).convert_to<double>();
            EXPECT_NEAR(got, static_cast<double>(brute_kloosterman(m, n, c)), 1e-9) << m << " " << n << " " << c;
        }
    }
}

TEST(Kloosterman, Symmetries)
{
    DigitsGuard g(40);
    testgen::Gen gen(12);
    for (int rep = 0; rep < 200; ++rep) {
        const long c = gen.range(2, 300);
        const long m = gen.range(-500, 500);
        const long n = gen.range(-500, 500);
        const Real k = kloosterman(m, n, c);
        EXPECT_LT(abs(k - kloosterman(n, m, c)), Real("1e-30"));
        EXPECT_LT(abs(k - kloosterman(-m, -n, c)), Real("1e-30"));
        long a = gen.range(1, c - 1);
        while (std::gcd(a, c) != 1) {
            a = gen.range(1, c - 1);
        }
        // K(am, n, c) = K(m, a n, c) for a unit a
        EXPECT_LT(abs(kloosterman(a * m, n, c) - kloosterman(m, a * n, c)), Real("1e-30"));
        EXPECT_LE(abs(k), Real(c));
    }
}

TEST(Kloosterman, RamanujanSum)
{
    for (long c = 1; c <= 60; ++c) {
        for (long n = 0; n <= 40; ++n) {
            EXPECT_EQ(ramanujan_sum(c, n), brute_ramanujan(c, n)) << c << " " << n;
        }
    }
}

TEST(Kloosterman, RejectsBadModulus)
{
    EXPECT_THROW(kloosterman(1, 1, 0), std::invalid_argument);
}

TEST(Bessel, MatchesLibstdcxx)
{
    DigitsGuard g(40);
    for (double x : {0.01, 0.5, 1.0, 3.7, 10.0, 25.0, 44.0}) {
        const double i11 = bessel_i(11, Real(x)).convert_to<double>();
        const double j11 = bessel_j(11, Real(x)).convert_to<double>();
        EXPECT_NEAR(i11 / std::cyl_bessel_i(11.0, x), 1.0, 1e-12) << x;
        EXPECT_NEAR(j11, std::cyl_bessel_j(11.0, x), 1e-13 * std::max(1.0, std::fabs(std::cyl_bessel_j(11.0, x))))
            << x;
    }
}

TEST(Bessel, StableUnderDoubledPrecision)
{
    for (const char *xs : {"0.3", "7.25", "31.5", "60"}) {
        Real lo, hi;
        {
            DigitsGuard g(40);
            lo = bessel_j(11, Real(xs));
        }
        {
            DigitsGuard g(80);
            hi = bessel_j(11, Real(xs));
        }
        DigitsGuard g(80);
        EXPECT_LT(abs(lo - hi), Real("1e-36") * std::max(Real(1), abs(hi))) << xs;
    }
}

TEST(IncompleteGamma, MatchesBoost)
{
    DigitsGuard g(40);
    for (double x : {0.0, 0.25, 1.0, 4.0, 12.5, 40.0}) {
        const double got = incomplete_gamma(11, Real(x)).convert_to<double>();
        const double want = boost::math::tgamma(11.0, x);
        EXPECT_NEAR(got / want, 1.0, 1e-13) << x;
    }
    EXPECT_THROW(incomplete_gamma(0, Real(1)), std::invalid_argument);
    EXPECT_THROW(incomplete_gamma(11, Real(-1)), std::invalid_argument);
}

TEST(IncompleteGamma, QuadratureAtOne)
{
    // Gamma(11, 1) = int_1^inf t^10 e^{-t} dt by composite Simpson on [1, 80]
    const int n = 20000;
    const double a = 1, b = 80, h = (b - a) / n;
    auto f = [](double t) { return std::pow(t, 10) * std::exp(-t); };
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4 : 2) * f(a + i * h);
    }
    s *= h / 3;
    DigitsGuard g(40);
    EXPECT_NEAR(incomplete_gamma(11, Real(1)).convert_to<double>() / s, 1.0, 1e-10);
}

TEST(Whittaker, MatchesKummerFunction)
{
    // M_{5,11/2}(x) = e^{-x/2} x^6 1F1(1; 12; x)
    DigitsGuard g(40);
    for (double x : {0.001, 0.2, 0.999, 1.0, 1.001, 5.0, 30.0, 90.0}) {
        const double want = std::exp(-x / 2) * std::pow(x, 6) * boost::math::hypergeometric_1F1(1.0, 12.0, x);
        EXPECT_NEAR(whittaker_m(5, Real(x)).convert_to<double>() / want, 1.0, 1e-12) << x;
    }
}

TEST(Whittaker, BranchesAgreeNearOne)
{
    DigitsGuard g(60);
    const Real below = whittaker_m(5, Real(1) - Real("1e-40"));
    const Real above = whittaker_m(5, Real(1));
    EXPECT_LT(abs(below - above) / above, Real("1e-35"));
}

TEST(Whittaker, BoundOnRandomPoints)
{
    DigitsGuard g(40);
    testgen::Gen gen(13);
    for (int rep = 0; rep < 200; ++rep) {
        const Real x = Real(gen.range(1, 2000000)) / 10000;
        EXPECT_LE(whittaker_m(5, x), exp(x / 2) * pow(x, 6)) << x;
    }
}

TEST(TruncExp, MatchesTaylorPolynomial)
{
    DigitsGuard g(40);
    EXPECT_EQ(trunc_exp(0, Real(7)), Real(1));
    EXPECT_EQ(trunc_exp(2, Real(2)), Real(5));
    EXPECT_THROW(trunc_exp(-1, Real(1)), std::invalid_argument);
}

TEST(MockCoefficients, ReferenceValues)
{
    const PrecisionContext ctx = fast_ctx();
    const char *reference[] = {"-73562460235.68364", "-929026615019.11308"};
    for (int n = 1; n <= 2; ++n) {
        const SeriesEstimate a = a_delta(n, ctx);
        DigitsGuard g(ctx.work_digits);
        const Real want(reference[n - 1]);
        EXPECT_LT(abs(a.value - want), Real("1e-5")) << n;
        EXPECT_LT(a.tail, Real("1e-10")) << n;
    }
    EXPECT_THROW(a_delta(0, ctx), std::invalid_argument);
}

TEST(MockCoefficients, ExactConstantTerm)
{
    EXPECT_EQ(a_delta_zero(), make_rat(BigInt("-2615348736000"), BigInt(691)));
    EXPECT_EQ(a_delta_zero(), mock_a0());
}

TEST(MockCoefficients, ConstantTermOfPoincareSeries)
{
    const PrecisionContext ctx = fast_ctx();
    for (long m = 1; m <= 5; ++m) {
        const SeriesEstimate c = constant_term_p(-10, m, ctx);
        DigitsGuard g(ctx.work_digits);
        const Real want = to_real(a_delta_zero() * BigRat(sigma(11, m)));
        EXPECT_LE(abs(c.value - want), c.tail + Real("1e-45") * abs(want)) << m;
    }
}

TEST(MockCoefficients, HolomorphicCoefficientOfRIsADelta)
{
    const PrecisionContext ctx = fast_ctx();
    for (long n = 1; n <= 3; ++n) {
        const SeriesEstimate a = a_delta(n, ctx);
        const SeriesEstimate c = holo_coefficient_p(-10, 1, n, ctx);
        DigitsGuard g(ctx.work_digits);
        EXPECT_LT(abs(a.value - to_real(factorial(11)) * c.value), Real("1e-20") * abs(a.value)) << n;
    }
}

TEST(Beta, Value)
{
    const PrecisionContext ctx = fast_ctx();
    const SeriesEstimate b = beta_delta(ctx);
    DigitsGuard g(ctx.work_digits);
    EXPECT_LT(abs(b.value - Real("2.840287")), Real("5e-7"));
    EXPECT_LT(b.tail, Real("1e-20"));
}

TEST(Beta, ShadowCoefficientsFollowTau)
{
    // the shadow of M_Delta is proportional to Delta, so
    // (delta_{n,1} + c^-(n)) n^11 / tau(n) equals beta for every n
    const PrecisionContext ctx = fast_ctx();
    const SeriesEstimate b = beta_delta(ctx);
    for (long n = 2; n <= 5; ++n) {
        const SeriesEstimate s = shadow_coefficient(1, n, ctx);
        DigitsGuard g(ctx.work_digits);
        const Real ratio = s.value * pow(Real(n), 11) / to_real(tau(n));
        EXPECT_LT(abs(ratio - b.value), Real("1e-20")) << n;
    }
}

TEST(Beta, ShadowCoefficientSwapSymmetry)
{
    // c^-_{-m}(-n) (n/m)^{11/2} is the bare Kloosterman-Bessel sum, symmetric in (m, n)
    const PrecisionContext ctx = fast_ctx();
    for (auto [m, n] : {std::pair{1L, 2L}, {2L, 3L}, {1L, 4L}}) {
        const SeriesEstimate a = shadow_coefficient(m, n, ctx);
        const SeriesEstimate b = shadow_coefficient(n, m, ctx);
        DigitsGuard g(ctx.work_digits);
        const Real lhs = a.value * pow(Real(n) / m, Real(11) / 2);
        const Real rhs = b.value * pow(Real(m) / n, Real(11) / 2);
        EXPECT_LT(abs(lhs - rhs), Real("1e-25")) << m << " " << n;
    }
}

TEST(Arc, GmRoundTrip)
{
    DigitsGuard g(60);
    testgen::Gen gen(14);
    const Real lo = real_pi() / 3;
    for (int rep = 0; rep < 50; ++rep) {
        const long m = gen.range(1, 80);
        const Real theta = lo + (real_pi() / 6) * gen.range(0, 1000) / 1000;
        const Real back = g_m_inverse(m, g_m(m, theta), Real("1e-50"));
        EXPECT_LT(abs(back - theta), Real("1e-45")) << m;
    }
    EXPECT_THROW(g_m_inverse(3, Real(100), Real("1e-10")), std::domain_error);
    EXPECT_THROW(require_arc(Real(1)), std::domain_error);
    EXPECT_THROW(f_m(0, lo), std::invalid_argument);
}

TEST(Arc, GmIsDecreasing)
{
    DigitsGuard g(40);
    for (long m = 1; m <= 30; ++m) {
        Real prev = g_m(m, real_pi() / 3);
        for (int i = 1; i <= 40; ++i) {
            const Real cur = g_m(m, real_pi() / 3 + real_pi() / 6 * i / 40);
            EXPECT_LT(cur, prev) << m << " " << i;
            prev = cur;
        }
    }
}

TEST(Poincare, MatchesRationalFunctionOfJ)
{
    // P_m - tau(m) R is holomorphic of weight -10, so equals 11! F_m(j) / E_10
    PrecisionContext ctx = fast_ctx();
    const QSeries jq = jfunction(80);
    const QSeries e10 = eisenstein(10, 80);
    for (long m : {2, 3, 5}) {
        const IntPoly f = hecke_poly_f(static_cast<int>(m), ctx);
        for (const char *ts : {"1.05", "1.2", "1.4", "1.5707"}) {
            const Real theta(ts);
            const ComplexEstimate p = poincare_eval(m, theta, ctx);
            const ComplexEstimate r = r_eval(theta, ctx);
            DigitsGuard g(ctx.work_digits);
            const Complex jv = evaluate_series_on_arc(jq, theta);
            Complex fj;
            for (long i = f.degree(); i >= 0; --i) {
                fj = fj * jv + Complex(to_real(f.coeffs()[static_cast<std::size_t>(i)]));
            }
            const Complex oracle = fj * to_real(factorial(11)) / evaluate_series_on_arc(e10, theta);
            const Complex diff = p.value - r.value * to_real(tau(m)) - oracle;
            const Real scale = to_real(factorial(11)) * exp(2 * real_pi() * m * sin(theta));
            EXPECT_LT(diff.abs() / scale, Real("1e-20")) << m << " " << ts;
        }
    }
}

TEST(Poincare, RotatedCombinationIsReal)
{
    const PrecisionContext ctx = fast_ctx();
    for (const char *ts : {"1.1", "1.3", "1.5"}) {
        const BoundReport b = f_bound_at(4, Real(ts), ctx);
        DigitsGuard g(ctx.work_digits);
        EXPECT_LE(abs(b.imag_residual), b.truncation_error) << ts;
    }
}

TEST(Poincare, LowPrecisionArgumentIsRounded)
{
    const PrecisionContext ctx = fast_ctx();
    Real coarse;
    {
        DigitsGuard g(20);
        coarse = Real("1.25");
    }
    const BoundReport a = f_bound_at(3, coarse, ctx);
    DigitsGuard g(ctx.work_digits);
    const BoundReport b = f_bound_at(3, Real("1.25"), ctx);
    EXPECT_LE(abs(a.lhs - b.lhs), a.truncation_error + b.truncation_error);
    EXPECT_LE(abs(a.imag_residual), a.truncation_error);
}

TEST(Poincare, TargetAboveWorkingPrecisionThrows)
{
    const PrecisionContext ctx = fast_ctx();
    EXPECT_THROW(PoincareExpansion(2, ctx, ctx.work_digits), std::invalid_argument);
    EXPECT_THROW(PoincareExpansion(0, ctx), std::invalid_argument);
}

TEST(FBound, HoldsForSmallM)
{
    const PrecisionContext ctx = fast_ctx();
    for (long m : {3, 6}) {
        const auto reps = check_f_bound(m, 12, ctx);
        ASSERT_EQ(reps.size(), 12u);
        for (const auto &r : reps) {
            EXPECT_TRUE(r.pass) << m;
        }
    }
    EXPECT_THROW(check_f_bound(2, 10, ctx), std::invalid_argument);
}

TEST(FBound, EndpointValueIsDamping)
{
    // at theta = pi/3 the modular combination vanishes exactly
    const PrecisionContext ctx = fast_ctx();
    DigitsGuard g(ctx.work_digits);
    const Real theta = real_pi() / 3;
    const BoundReport b = f_bound_at(3, theta, ctx);
    const Real x = 4 * real_pi() * 3 * sin(theta);
    const Real want = to_real(factorial(11)) * (1 - exp(-x) * trunc_exp(10, x));
    EXPECT_LT(abs(b.lhs - want), Real("1e-15"));
}

TEST(Epstein, MatchesZetaTimesL)
{
    // sum' (c^2 + cd + d^2)^{-6} = 6 zeta(6) L(6, chi_{-3})
    long double l = 0;
    for (long n = 200000; n >= 1; --n) {
        const int r = static_cast<int>(n % 3);
        if (r) {
            l += (r == 1 ? 1.0L : -1.0L) / std::pow(static_cast<long double>(n), 6);
        }
    }
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double want = 6 * std::pow(pi, 6) / 945 * l;
    const EpsteinValue e = epstein_zeta6(100);
    const long double lo = e.partial.convert_to<long double>();
    const long double hi = e.upper().convert_to<long double>();
    EXPECT_LE(lo, want + 1e-15L);
    EXPECT_GE(hi, want - 1e-15L);
    EXPECT_GT(lo, 6.0L);
    EXPECT_LE(hi, 6.0099L);
    EXPECT_THROW(epstein_zeta6(5), std::invalid_argument);
}

TEST(Epstein, TailBoundCoversLargerCutoff)
{
    const EpsteinValue a = epstein_zeta6(20);
    const EpsteinValue b = epstein_zeta6(60);
    DigitsGuard g(40);
    EXPECT_GE(b.partial, a.partial);
    EXPECT_LE(b.partial, a.upper());
}

TEST(Deligne, HoldsUpTo63)
{
    PrecisionContext ctx;
    long first = 0;
    EXPECT_TRUE(deligne_check(63, ctx, &first));
    EXPECT_EQ(first, 0);
    ctx.series_order = 10;
    EXPECT_THROW(deligne_check(63, ctx), TruncationError);
}

TEST(ArcSeries, JAtEndpoints)
{
    DigitsGuard g(60);
    const QSeries jq = jfunction(arc_terms_for_digits(60) + 2);
    const Complex at_rho = evaluate_series_on_arc(jq, real_pi() / 3);
    const Complex at_i = evaluate_series_on_arc(jq, real_pi() / 2);
    EXPECT_LT(at_rho.abs(), Real("1e-50"));
    EXPECT_LT(abs(at_i.re - 1728), Real("1e-50"));
    EXPECT_LT(abs(at_i.im), Real("1e-50"));
}
