#pragma once

// Exact real-root isolation of integer polynomials (Sturm chains over Z),
// recovery of the angle theta with j(e^{i theta}) = x on the arc, and the
// certification of the root structure of F_m.

#include <mockdelta/analytic.hpp>
#include <mockdelta/heckepoly.hpp>
#include <mockdelta/numbers.hpp>
#include <mockdelta/poly.hpp>
#include <mockdelta/qseries.hpp>
#include <mockdelta/real.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mockdelta
{

/// A half-open interval (lo, hi] holding exactly one root of a polynomial.
/// `exact` marks hi itself as the root.
struct IsolatingInterval {
    BigRat lo;
    BigRat hi;
    bool exact = false;
};

/// Sign of p(a), exact: evaluates the homogenized numerator sum c_i num^i den^{d-i}.
inline int sign_at(const IntPoly &p, const BigRat &a)
{
    if (p.is_zero()) {
        return 0;
    }
    const BigInt &num = a.get_num();
    const BigInt &den = a.get_den();
    BigInt acc = 0;
    BigInt dpow = 1;
    // Horner in num with the den powers accumulated from the constant term upward
    const auto &c = p.coeffs();
    const int d = p.degree();
    acc = c[d];
    for (int i = d - 1; i >= 0; --i) {
        dpow *= den;
        acc = acc * num + c[i] * dpow;
    }
    return sgn(acc);
}

namespace detail
{

inline IntPoly divide_content(const IntPoly &p)
{
    if (p.is_zero()) {
        return p;
    }
    const BigInt g = content(p);
    std::vector<BigInt> w(p.coeffs());
    for (auto &c : w) {
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
    return IntPoly(std::move(w));
}

} // namespace detail

/// Squarefreeness of p with the witness gcd(p, p').
struct SquarefreeReport {
    bool squarefree = false;
    IntPoly witness; // gcd(p, p'), primitive with positive leading coefficient
};

inline SquarefreeReport is_squarefree(const IntPoly &p)
{
    SquarefreeReport r;
    if (p.is_zero()) {
        r.witness = p;
        return r;
    }
    r.witness = gcd(p, p.derivative());
    r.squarefree = r.witness.degree() == 0;
    return r;
}

/// Sturm chain p, p', -rem, ... with each member divided by its positive content.
class SturmChain
{
public:
    explicit SturmChain(const IntPoly &p)
    {
        if (p.is_zero()) {
            throw std::invalid_argument("SturmChain: zero polynomial");
        }
        chain_.push_back(detail::divide_content(p));
        if (p.degree() == 0) {
            return;
        }
        chain_.push_back(detail::divide_content(p.derivative()));
        while (chain_.back().degree() > 0) {
            const IntPoly &a = chain_[chain_.size() - 2];
            const IntPoly &b = chain_.back();
            IntPoly r = pseudo_remainder(a, b);
            if (r.is_zero()) {
                break;
            }
            // prem = lc(b)^{da-db+1} rem; keep -rem up to a positive factor
            const int e = a.degree() - b.degree() + 1;
            const bool flip = !(b.leading() < 0 && e % 2 == 1);
            r = detail::divide_content(r);
            if (flip) {
                r = IntPoly() - r;
            }
            chain_.push_back(std::move(r));
        }
    }

    const std::vector<IntPoly> &members() const
    {
        return chain_;
    }

    const IntPoly &poly() const
    {
        return chain_.front();
    }

    /// Sign changes of the chain at a, zeros skipped.
    int variations(const BigRat &a) const
    {
        int v = 0, last = 0;
        for (const auto &s : chain_) {
            const int sg = sign_at(s, a);
            if (sg == 0) {
                continue;
            }
            if (last != 0 && sg != last) {
                ++v;
            }
            last = sg;
        }
        return v;
    }

    /// Sign changes at +infinity (sign < 0 for -infinity).
    int variations_at_infinity(int sign) const
    {
        int v = 0, last = 0;
        for (const auto &s : chain_) {
            int sg = sgn(s.leading());
            if (sign < 0 && s.degree() % 2 == 1) {
                sg = -sg;
            }
            if (last != 0 && sg != last) {
                ++v;
            }
            last = sg;
        }
        return v;
    }

    /// Distinct real roots in (a, b].
    int count(const BigRat &a, const BigRat &b) const
    {
        if (!(a < b)) {
            throw std::invalid_argument("SturmChain::count requires a < b");
        }
        return variations(a) - variations(b);
    }

    /// Distinct real roots.
    int count_all() const
    {
        return variations_at_infinity(-1) - variations_at_infinity(+1);
    }

private:
    std::vector<IntPoly> chain_;
};

/// An integer B with every complex root of p in |z| < B (Fujiwara's bound
/// 2 max_k |a_{n-k} / a_n|^{1/k}, rounded up).
inline BigInt root_bound(const IntPoly &p)
{
    const int n = p.degree();
    if (n < 1) {
        return 1;
    }
    const BigInt lc = abs(p.leading());
    BigInt best = 0;
    for (int k = 1; k <= n; ++k) {
        BigInt a = abs(p.coeffs()[n - k]);
        if (a == 0) {
            continue;
        }
        if (k == n) {
            a = (a + 1) / 2;
        }
        const BigInt ratio = (a + lc - 1) / lc;
        BigInt r;
        mpz_root(r.get_mpz_t(), ratio.get_mpz_t(), static_cast<unsigned long>(k));
        r += 1;
        if (r > best) {
            best = r;
        }
    }
    return 2 * best + 1;
}

/// Disjoint intervals (lo, hi], one per real root of p in (lo, hi], in increasing order.
/// Throws std::domain_error with the gcd witness if p is not squarefree.
inline std::vector<IsolatingInterval> sturm_isolate(const IntPoly &p, const BigRat &lo, const BigRat &hi)
{
    if (p.is_zero()) {
        throw std::invalid_argument("sturm_isolate: zero polynomial");
    }
    if (!(lo < hi)) {
        throw std::invalid_argument("sturm_isolate: empty interval");
    }
    const SquarefreeReport sq = is_squarefree(p);
    if (!sq.squarefree) {
        throw std::domain_error("sturm_isolate: polynomial is not squarefree; gcd(p, p') = " + format_poly(sq.witness));
    }
    std::vector<IsolatingInterval> out;
    if (p.degree() == 0) {
        return out;
    }
    const SturmChain chain(p);
    struct Pending {
        BigRat lo, hi;
        int n;
    };
    std::vector<Pending> stack;
    stack.push_back({lo, hi, chain.count(lo, hi)});
    while (!stack.empty()) {
        Pending cur = stack.back();
        stack.pop_back();
        if (cur.n == 0) {
            continue;
        }
        if (cur.n == 1) {
            out.push_back({cur.lo, cur.hi, sign_at(p, cur.hi) == 0});
            continue;
        }
        const BigRat mid = (cur.lo + cur.hi) / 2;
        const int left = chain.count(cur.lo, mid);
        stack.push_back({mid, cur.hi, cur.n - left});
        stack.push_back({cur.lo, mid, left});
    }
    return out;
}

/// Isolating intervals for all real roots of p.
inline std::vector<IsolatingInterval> sturm_isolate(const IntPoly &p)
{
    if (p.is_zero()) {
        throw std::invalid_argument("sturm_isolate: zero polynomial");
    }
    const BigRat b(root_bound(p));
    return sturm_isolate(p, -b, b);
}

/// Bisects an isolating interval by exact sign evaluation until its width is below tol;
/// returns the midpoint (or the exact root).
inline BigRat refine_root(const IntPoly &p, IsolatingInterval iv, const BigRat &tol)
{
    if (tol <= 0) {
        throw std::invalid_argument("refine_root: tolerance must be positive");
    }
    if (iv.exact || sign_at(p, iv.hi) == 0) {
        return iv.hi;
    }
    const int s_hi = sign_at(p, iv.hi);
    const int s_lo = sign_at(p, iv.lo);
    if (s_lo == s_hi) {
        throw std::logic_error("refine_root: no sign change on the interval");
    }
    while (iv.hi - iv.lo >= tol) {
        const BigRat mid = (iv.lo + iv.hi) / 2;
        const int s = sign_at(p, mid);
        if (s == 0) {
            return mid;
        }
        if (s == s_hi) {
            iv.hi = mid;
        } else {
            iv.lo = mid;
        }
    }
    return (iv.lo + iv.hi) / 2;
}

// ---------------------------------------------------------------------------
// j on the arc

/// j(e^{i theta}) for theta in [pi/3, pi/2]; real there, so the real part is returned.
/// The series length follows the current precision.
inline Real j_on_arc(const Real &theta_in)
{
    const Real theta = at_current(theta_in);
    const int terms = arc_terms_for_digits(DigitsGuard::current() + 5);
    return evaluate_series_on_arc(jfunction(terms), theta).re;
}

/// The theta in [pi/3, pi/2] with j(e^{i theta}) = x, by bisection to tol.
inline Real angle_of_root(const Real &x_in, const Real &tol)
{
    const Real x = at_current(x_in);
    if (x < 0 || x > 1728) {
        throw std::domain_error("angle_of_root: x must lie in [0, 1728]");
    }
    Real lo = real_pi() / 3;
    Real hi = real_pi() / 2;
    if (x == 0) {
        return lo;
    }
    if (x == 1728) {
        return hi;
    }
    const int terms = arc_terms_for_digits(DigitsGuard::current() + 5);
    const QSeries j = jfunction(terms);
    while (hi - lo > tol) {
        const Real mid = (lo + hi) / 2;
        if (evaluate_series_on_arc(j, mid).re < x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

// ---------------------------------------------------------------------------
// Root structure of F_m

struct RootRecord {
    IsolatingInterval interval;
    BigRat x;               // refined root
    Real x_approx;          // x at working precision
    Real theta;             // j(e^{i theta}) = x
    Real u;                 // (g_m(theta) - 5 pi/2) / (5 pi/3 + pi m - 5 pi/2)
    std::optional<int> ell; // g-cell (g_m^{-1}(pi(l+1)), g_m^{-1}(pi l)) holding the root
};

struct RootReport {
    int m = 0;
    IntPoly poly;
    bool endpoint_zeros = false; // F_m(0) = F_m(1728) = 0
    SquarefreeReport squarefree;
    int roots_in_range = 0; // Sturm count on [0, 1728]
    int roots_total = 0;    // Sturm count on R
    int cells_checked = 0;
    std::vector<int> failed_cells; // l whose cell does not hold exactly one root
    std::vector<RootRecord> roots; // increasing x
    bool pass = false;
    std::string failure; // first failed assertion, empty on pass

    bool cells_ok() const
    {
        return failed_cells.empty();
    }
};

namespace detail
{

inline PrecisionContext with_series_order(PrecisionContext ctx, int need)
{
    ctx.series_order = std::max(ctx.series_order, need);
    return ctx;
}

/// Decimal digits implied by an absolute tolerance.
inline int digits_for_tol(const BigRat &tol)
{
    const double t = mpq_get_d(tol.get_mpq_t());
    return std::max(1, static_cast<int>(std::ceil(-std::log10(t))));
}

} // namespace detail

/// Certifies the root structure of F_m exactly: endpoint zeros, simple roots,
/// m roots in [0, 1728] and none outside, and one root in each g-cell for
/// 3 <= l <= m (cell endpoints mapped through j, rounded to 10^{-digits-5}).
/// Roots are refined to ctx.root_tol and their angles and normalized positions recorded.
inline RootReport certify_roots(int m, const PrecisionContext &ctx_in, const HeckeFormulaConstants &k = {})
{
    if (m < 2) {
        throw std::invalid_argument("m must be >= 2");
    }
    const PrecisionContext ctx = detail::with_series_order(ctx_in, m + 1);
    ctx.validate();
    RootReport rep;
    rep.m = m;
    rep.poly = hecke_poly_f(m, ctx, k);
    const IntPoly &f = rep.poly;
    auto fail = [&](const std::string &why) {
        if (rep.failure.empty()) {
            rep.failure = why;
        }
    };

    rep.endpoint_zeros = f(BigInt(0)) == 0 && f(BigInt(1728)) == 0;
    if (!rep.endpoint_zeros) {
        fail("F_" + std::to_string(m) + " does not vanish at 0 and 1728");
    }
    rep.squarefree = is_squarefree(f);
    if (!rep.squarefree.squarefree) {
        fail("F_" + std::to_string(m) + " has a repeated root; gcd(F, F') = " + format_poly(rep.squarefree.witness));
        return rep;
    }
    const SturmChain chain(f);
    rep.roots_total = chain.count_all();
    // [0, 1728] = {0} u (0, 1728]
    rep.roots_in_range = chain.count(BigRat(0), BigRat(1728)) + (f(BigInt(0)) == 0 ? 1 : 0);
    if (rep.roots_in_range != m) {
        fail("Sturm count on [0, 1728] is " + std::to_string(rep.roots_in_range) + ", expected " + std::to_string(m));
    }
    if (rep.roots_total != rep.roots_in_range) {
        fail(std::to_string(rep.roots_total - rep.roots_in_range) + " real roots outside [0, 1728]");
    }
    if (!rep.failure.empty()) {
        return rep;
    }

    // interior roots of F_m / (x (x - 1728))
    const IntPoly endpoints = IntPoly::x() * (IntPoly::x() - IntPoly(1728));
    const IntPoly g = exact_divide(f, endpoints);

    DigitsGuard guard(ctx.work_digits);
    const Real pi = real_pi();
    const Real theta_tol = pow(Real(10), -(ctx.work_digits - 10));
    const Real g_lo = 5 * pi / 2;
    const Real g_span = 5 * pi / 3 + pi * m - g_lo;
    const int x_digits = detail::digits_for_tol(ctx.root_tol) + 5;

    std::vector<IsolatingInterval> ivs;
    ivs.push_back({BigRat(-1), BigRat(0), true});
    for (const auto &iv : sturm_isolate(g, BigRat(0), BigRat(1728))) {
        ivs.push_back(iv);
    }
    ivs.push_back({BigRat(1727), BigRat(1728), true});

    for (const auto &iv : ivs) {
        RootRecord r;
        r.interval = iv;
        r.x = refine_root(iv.exact ? endpoints : g, iv, ctx.root_tol);
        r.x_approx = to_real(r.x);
        if (r.x_approx < 0 || r.x_approx > 1728) {
            fail("root " + format_sci(r.x_approx, 20) + " outside [0, 1728]");
            return rep;
        }
        r.theta = angle_of_root(r.x_approx, theta_tol);
        r.u = (g_m(m, r.theta) - g_lo) / g_span;
        rep.roots.push_back(std::move(r));
    }

    // g-cells, l = 3 .. m, are increasing in x as l decreases
    const SturmChain gchain(g.degree() > 0 ? g : IntPoly(1));
    for (int l = 3; l <= m; ++l) {
        const Real th_a = g_m_inverse(m, pi * (l + 1), theta_tol);
        const Real th_b = g_m_inverse(m, pi * l, theta_tol);
        const BigRat xa = to_rat(j_on_arc(th_a), x_digits);
        const BigRat xb = to_rat(j_on_arc(th_b), x_digits);
        ++rep.cells_checked;
        const int n = g.degree() > 0 && xa < xb ? gchain.count(xa, xb) : 0;
        if (n != 1) {
            rep.failed_cells.push_back(l);
            continue;
        }
        for (auto &r : rep.roots) {
            if (xa < r.x && r.x <= xb) {
                r.ell = l;
            }
        }
    }
    if (!rep.failed_cells.empty()) {
        fail("g-cell l = " + std::to_string(rep.failed_cells.front()) + " does not hold exactly one root");
    }
    rep.pass = rep.failure.empty();
    return rep;
}

struct EquidistReport {
    int m = 0;
    std::vector<Real> positions; // normalized positions u, ascending
    Real star_discrepancy;
};

/// D* = max_i max(i/n - u_(i), u_(i) - (i-1)/n) for sorted u in [0, 1].
inline Real star_discrepancy(std::vector<Real> u)
{
    std::sort(u.begin(), u.end());
    const long n = static_cast<long>(u.size());
    Real d = 0;
    for (long i = 1; i <= n; ++i) {
        const Real a = Real(i) / n - u[i - 1];
        const Real b = u[i - 1] - Real(i - 1) / n;
        if (a > d) {
            d = a;
        }
        if (b > d) {
            d = b;
        }
    }
    return d;
}

/// Normalized g-positions of the m roots of F_m and their star discrepancy.
inline EquidistReport equidistribution(int m, const PrecisionContext &ctx)
{
    const RootReport t = certify_roots(m, ctx);
    if (!t.pass) {
        throw std::runtime_error("equidistribution: root certification failed: " + t.failure);
    }
    DigitsGuard guard(ctx.work_digits);
    EquidistReport e;
    e.m = m;
    for (const auto &r : t.roots) {
        e.positions.push_back(r.u);
    }
    std::sort(e.positions.begin(), e.positions.end());
    e.star_discrepancy = star_discrepancy(e.positions);
    return e;
}

} // namespace mockdelta
