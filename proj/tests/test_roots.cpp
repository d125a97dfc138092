#include <mockdelta/heckepoly.hpp>
#include <mockdelta/roots.hpp>

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace mockdelta;

namespace
{

IntPoly poly(std::initializer_list<long> c)
{
    std::vector<BigInt> v;
    for (long x : c) {
        v.emplace_back(x);
    }
    return IntPoly(std::move(v));
}

/// Roots of a product of distinct linear factors (x - r_i).
IntPoly from_roots(const std::vector<long> &rs)
{
    IntPoly p = poly({1});
    for (long r : rs) {
        p = p * poly({-r, 1});
    }
    return p;
}

/// Sign changes of p on a fine rational grid of [lo, hi], plus exact zeros on the grid.
int grid_roots(const IntPoly &p, long lo, long hi, long steps)
{
    int count = 0;
    int prev = sign_at(p, BigRat(lo));
    count += prev == 0 ? 1 : 0;
    for (long i = 1; i <= steps; ++i) {
        const BigRat x = BigRat(lo) + BigRat(hi - lo) * BigRat(i) / BigRat(steps);
        const int s = sign_at(p, x);
        if (s == 0) {
            ++count;
        } else if (prev != 0 && s != prev) {
            ++count;
        }
        prev = s;
    }
    return count;
}

} // namespace

TEST(SignAt, ExactEvaluation)
{
    const IntPoly p = poly({-2, 0, 1}); // x^2 - 2
    EXPECT_EQ(sign_at(p, make_rat(BigInt(141), BigInt(100))), -1);
    EXPECT_EQ(sign_at(p, make_rat(BigInt(142), BigInt(100))), 1);
    EXPECT_EQ(sign_at(poly({-1, 1}), BigRat(1)), 0);
    EXPECT_EQ(sign_at(IntPoly(), BigRat(3)), 0);
}

TEST(Squarefree, WitnessForRepeatedRoot)
{
    const SquarefreeReport a = is_squarefree(poly({1, -2, 1})); // (x - 1)^2
    EXPECT_FALSE(a.squarefree);
    EXPECT_EQ(a.witness.degree(), 1);
    EXPECT_EQ(sign_at(a.witness, BigRat(1)), 0);
    EXPECT_TRUE(is_squarefree(poly({0, -1728, 1})).squarefree);
}

TEST(Sturm, CountsOnSimpleExamples)
{
    const SturmChain c(poly({0, -1728, 1})); // x^2 - 1728 x
    EXPECT_EQ(c.count_all(), 2);
    EXPECT_EQ(c.count(BigRat(-1), BigRat(0)), 1); // (a, b] contains 0
    EXPECT_EQ(c.count(BigRat(0), BigRat(1727)), 0);
    EXPECT_EQ(c.count(BigRat(0), BigRat(1728)), 1);
    const SturmChain none(poly({1, 0, 1})); // x^2 + 1
    EXPECT_EQ(none.count_all(), 0);
    EXPECT_TRUE(sturm_isolate(poly({1, 0, 1})).empty());
}

TEST(Sturm, AgreesWithGridOnRandomProducts)
{
    testgen::Gen gen(21);
    for (int rep = 0; rep < 60; ++rep) {
        std::vector<long> rs;
        const long k = gen.range(1, 7);
        while (static_cast<long>(rs.size()) < k) {
            const long r = gen.range(-50, 50);
            if (std::find(rs.begin(), rs.end(), r) == rs.end()) {
                rs.push_back(r);
            }
        }
        // a factor without real roots does not change the count
        const IntPoly p = from_roots(rs) * poly({gen.range(1, 9), 0, 1});
        const SturmChain c(p);
        EXPECT_EQ(c.count_all(), k);
        // grid points at multiples of 1/4 hit every integer root exactly
        const BigRat lo(-60), hi(60);
        EXPECT_EQ(c.count(lo, hi), grid_roots(p, -60, 60, 480));
        const auto ivs = sturm_isolate(p);
        ASSERT_EQ(static_cast<long>(ivs.size()), k);
        for (const auto &iv : ivs) {
            EXPECT_EQ(c.count(iv.lo, iv.hi), 1);
        }
    }
}

TEST(Sturm, IsolatesCloseIrrationalRoots)
{
    // (x^2 - 2)(x^2 - 2.0001): four roots, two pairs 2.5e-5 apart
    const IntPoly p = poly({-2, 0, 1}) * poly({-20001, 0, 10000});
    const auto ivs = sturm_isolate(p);
    ASSERT_EQ(ivs.size(), 4u);
    const SturmChain c(p);
    for (const auto &iv : ivs) {
        EXPECT_EQ(c.count(iv.lo, iv.hi), 1);
    }
}

TEST(Refine, ReachesTolerance)
{
    const IntPoly p = poly({-2, 0, 1});
    const auto ivs = sturm_isolate(p, BigRat(0), BigRat(2));
    ASSERT_EQ(ivs.size(), 1u);
    const BigRat tol = make_rat(BigInt(1), pow_int(10, 40));
    const BigRat r = refine_root(p, ivs[0], tol);
    DigitsGuard g(60);
    EXPECT_LT(abs(to_real(r) - sqrt(Real(2))), Real("1e-39"));
}

TEST(RootBound, CoversAllRoots)
{
    testgen::Gen gen(22);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<long> rs;
        for (int i = 0; i < 5; ++i) {
            rs.push_back(gen.range(-1000, 1000) + 2000 * i);
        }
        const BigInt b = root_bound(from_roots(rs));
        for (long r : rs) {
            EXPECT_GE(b, BigInt(std::labs(r)));
        }
    }
}

TEST(JOnArc, EndpointsAndMonotone)
{
    DigitsGuard g(60);
    EXPECT_LT(abs(j_on_arc(real_pi() / 3)), Real("1e-50"));
    EXPECT_LT(abs(j_on_arc(real_pi() / 2) - 1728), Real("1e-50"));
    Real prev = j_on_arc(real_pi() / 3);
    for (int i = 1; i <= 30; ++i) {
        const Real cur = j_on_arc(real_pi() / 3 + real_pi() / 6 * i / 30);
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(JOnArc, AngleRoundTrip)
{
    DigitsGuard g(60);
    EXPECT_EQ(angle_of_root(Real(0), Real("1e-40")), real_pi() / 3);
    EXPECT_EQ(angle_of_root(Real(1728), Real("1e-40")), real_pi() / 2);
    testgen::Gen gen(23);
    for (int rep = 0; rep < 10; ++rep) {
        const Real x = Real(gen.range(1, 17279)) / 10;
        const Real theta = angle_of_root(x, Real("1e-45"));
        EXPECT_LT(abs(j_on_arc(theta) - x), Real("1e-38")) << x;
    }
    EXPECT_THROW(angle_of_root(Real(-1), Real("1e-10")), std::domain_error);
}

TEST(RootStructure, SmallIndices)
{
    PrecisionContext ctx;
    for (int m = 2; m <= 12; ++m) {
        const RootReport r = certify_roots(m, ctx);
        EXPECT_TRUE(r.pass) << m << ": " << r.failure;
        EXPECT_TRUE(r.endpoint_zeros);
        EXPECT_TRUE(r.squarefree.squarefree);
        EXPECT_EQ(r.roots_in_range, m);
        EXPECT_EQ(r.roots_total, m);
        EXPECT_TRUE(r.cells_ok());
        ASSERT_EQ(static_cast<int>(r.roots.size()), m);
        // roots sit at or inside the endpoints, in increasing x and decreasing normalized position
        for (std::size_t i = 1; i < r.roots.size(); ++i) {
            EXPECT_LT(r.roots[i - 1].x, r.roots[i].x);
            EXPECT_GT(r.roots[i - 1].u, r.roots[i].u);
        }
    }
}

TEST(RootStructure, RootsMatchValues)
{
    // F_3 = x (x - 768) (x - 1728)
    PrecisionContext ctx;
    const RootReport r = certify_roots(3, ctx);
    ASSERT_TRUE(r.pass);
    ASSERT_EQ(r.roots.size(), 3u);
    EXPECT_EQ(r.roots[0].x, BigRat(0));
    EXPECT_EQ(r.roots[2].x, BigRat(1728));
    DigitsGuard g(ctx.work_digits);
    EXPECT_LT(abs(r.roots[1].x_approx - 768), Real("1e-29"));
}

TEST(RootStructure, CorruptedConstantIsDetected)
{
    PrecisionContext ctx;
    HeckeFormulaConstants k;
    k.tau_numerator += 691;
    int failures = 0;
    for (int m = 2; m <= 12; ++m) {
        failures += certify_roots(m, ctx, k).pass ? 0 : 1;
    }
    EXPECT_GT(failures, 0);
}

TEST(RootStructure, Index64)
{
    PrecisionContext ctx;
    const RootReport r = certify_roots(64, ctx);
    EXPECT_TRUE(r.pass) << r.failure;
    EXPECT_EQ(r.roots_in_range, 64);
}

TEST(Equidistribution, StarDiscrepancyOfKnownSets)
{
    DigitsGuard g(40);
    std::vector<Real> u;
    for (int i = 0; i < 10; ++i) {
        u.push_back((Real(i) + Real("0.5")) / 10);
    }
    EXPECT_LT(abs(star_discrepancy(u) - Real("0.05")), Real("1e-35"));
    EXPECT_EQ(star_discrepancy({Real(0), Real(1)}), Real("0.5"));
}

TEST(Equidistribution, ScalesLikeOneOverM)
{
    PrecisionContext ctx;
    for (int m : {10, 20}) {
        const EquidistReport e = equidistribution(m, ctx);
        ASSERT_EQ(static_cast<int>(e.positions.size()), m);
        DigitsGuard g(ctx.work_digits);
        EXPECT_LE(e.star_discrepancy, Real(5) / m);
        EXPECT_LT(abs(e.positions.front()), Real("1e-50"));
        EXPECT_LT(abs(e.positions.back() - 1), Real("1e-50"));
    }
}
