#pragma once

// Numeric layer: Kloosterman sums, Bessel and Whittaker functions, the
// coefficients of M_Delta and of the weight -10 Maass-Poincare series
// P_{-10,-m}, their evaluation on the arc |tau| = 1, and the bounds used to
// locate the zeros of F_m.
//
// Conventions fixed here:
//  * K(m, n, c) = sum over v mod c, gcd(v, c) = 1, of cos(2 pi (m v' + n v) / c), v v' = 1 mod c.
//  * The holomorphic Poincare coefficients use K(-m, n, c); the shadow
//    coefficients use K(m, n, c) with a positive sign, so that
//    beta_Delta = 1 + shadow_coefficient(1, 1).
//  * P_{-10,-m} is evaluated at the scale where its principal part is 11! q^{-m}:
//      P = 11! (1 - e^{-x} e_10(x)) q^{-m} + C_m + 11! sum c+(n) q^n
//          - 11 sum c-(n) Gamma(11, 4 pi n v) q^{-n},   x = 4 pi m v.

#include <mockdelta/numbers.hpp>
#include <mockdelta/qseries.hpp>
#include <mockdelta/real.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace mockdelta
{

// ---------------------------------------------------------------------------
// Kloosterman sums

namespace detail
{

inline long pos_mod(long a, long c)
{
    const long r = a % c;
    return r < 0 ? r + c : r;
}

inline long mod_inverse(long a, long c)
{
    long r0 = c, r1 = pos_mod(a, c);
    long s0 = 0, s1 = 1;
    while (r1 != 0) {
        const long q = r0 / r1;
        std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
    }
    if (r0 != 1) {
        throw std::domain_error("no inverse of " + std::to_string(a) + " mod " + std::to_string(c));
    }
    return pos_mod(s0, c);
}

inline int moebius(long n)
{
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) {
                return 0;
            }
            mu = -mu;
        }
    }
    return n > 1 ? -mu : mu;
}

inline int ceil_log10(double x)
{
    return static_cast<int>(std::ceil(std::log10(std::max(x, 1.0))));
}

} // namespace detail

/// Ramanujan's sum c_c(n) = sum_{d | gcd(c, n)} mu(c/d) d, exact.
inline long ramanujan_sum(long c, long n)
{
    if (c < 1) {
        throw std::invalid_argument("ramanujan_sum: c must be >= 1");
    }
    const long g = std::gcd(c, n < 0 ? -n : n); // gcd(c, 0) = c
    long s = 0;
    for (long d = 1; d <= g; ++d) {
        if (g % d == 0) {
            s += detail::moebius(c / d) * d;
        }
    }
    return s;
}

/// K(m, n, c) at the current precision. Residues are binned exactly and the
/// cosine sum is evaluated by Clenshaw's recurrence with guard digits.
inline Real kloosterman(long m, long n, long c)
{
    if (c < 1) {
        throw std::invalid_argument("kloosterman: c must be >= 1");
    }
    if (c == 1) {
        return Real(1);
    }
    const long mm = detail::pos_mod(m, c);
    const long nn = detail::pos_mod(n, c);
    if (mm == 0 || nn == 0) {
        return Real(ramanujan_sum(c, mm == 0 ? nn : mm));
    }
    // units mod c by sieving out the prime factors of c, inverses by batch inversion
    std::vector<char> unit(static_cast<std::size_t>(c), 1);
    unit[0] = 0;
    long rest = c;
    for (long p = 2; p <= rest; ++p) {
        if (p * p > rest) {
            p = rest;
        }
        if (rest % p == 0) {
            while (rest % p == 0) {
                rest /= p;
            }
            for (long v = p; v < c; v += p) {
                unit[v] = 0;
            }
        }
    }
    std::vector<long> prefix(static_cast<std::size_t>(c), 1);
    long acc = 1;
    for (long v = 1; v < c; ++v) {
        if (unit[v]) {
            prefix[v] = acc;
            acc = acc * v % c;
        }
    }
    long inv = detail::mod_inverse(acc, c);
    std::vector<long> hist(static_cast<std::size_t>(c), 0);
    for (long v = c - 1; v >= 1; --v) {
        if (!unit[v]) {
            continue;
        }
        const long vb = inv * prefix[v] % c;
        inv = inv * v % c;
        ++hist[static_cast<std::size_t>((mm * vb + nn * v) % c)];
    }
    // cos(2 pi r / c) = cos(2 pi (c - r) / c): fold onto 0..c/2
    const long half = c / 2;
    std::vector<long> a(static_cast<std::size_t>(half + 1), 0);
    a[0] = hist[0];
    for (long r = 1; r <= half; ++r) {
        a[r] = hist[r] + (c - r != r ? hist[c - r] : 0);
    }

    const int outer = DigitsGuard::current();
    Real s;
    {
        DigitsGuard g(outer + 2 * detail::ceil_log10(static_cast<double>(c)) + 4);
        const Real x = cos(2 * real_pi() / c);
        const Real two_x = 2 * x;
        Real b1 = 0, b2 = 0, t = 0;
        for (long k = half; k >= 1; --k) {
            mpfr_mul(t.backend().data(), two_x.backend().data(), b1.backend().data(), MPFR_RNDN);
            mpfr_sub(t.backend().data(), t.backend().data(), b2.backend().data(), MPFR_RNDN);
            mpfr_add_si(t.backend().data(), t.backend().data(), a[k], MPFR_RNDN);
            std::swap(b2, b1);
            std::swap(b1, t);
        }
        s = Real(a[0]) + x * b1 - b2;
    }
    return at_current(s);
}

// ---------------------------------------------------------------------------
// Special functions

namespace detail
{

// sum_{j >= 0} sign^j (x/2)^{nu + 2j} / (j! (nu + j)!)
inline Real bessel_ascending(int nu, const Real &x, int sign)
{
    if (nu < 0) {
        throw std::invalid_argument("bessel: order must be >= 0");
    }
    if (x < 0) {
        throw std::invalid_argument("bessel: argument must be >= 0");
    }
    if (x == 0) {
        return Real(nu == 0 ? 1 : 0);
    }
    const int outer = DigitsGuard::current();
    const double xd = x.convert_to<double>();
    // the alternating series has terms up to about e^x / sqrt(x)
    const int guard = 8 + (sign < 0 ? static_cast<int>(std::ceil(xd / std::log(10.0))) : 0);
    Real out;
    {
        DigitsGuard g(outer + guard);
        const Real h = Real(x, outer + guard) / 2;
        const Real h2 = h * h;
        Real term = pow(h, nu) / to_real(factorial(static_cast<unsigned long>(nu)));
        Real sum = term;
        Real peak = abs(term);
        const Real eps = pow(Real(10), -(outer + guard));
        for (long j = 1;; ++j) {
            term *= h2 / (j * (nu + j));
            if (sign < 0) {
                term = -term;
            }
            sum += term;
            const Real at = abs(term);
            if (at > peak) {
                peak = at;
            }
            if (j > xd && at <= eps * peak && at <= eps * abs(sum)) {
                break;
            }
            if (j > xd && at == 0) {
                break;
            }
        }
        out = sum;
    }
    return at_current(out);
}

} // namespace detail

/// Modified Bessel function I_nu(x), x >= 0, ascending series.
inline Real bessel_i(int nu, const Real &x)
{
    return detail::bessel_ascending(nu, x, +1);
}

/// Bessel function J_nu(x), x >= 0, ascending series with guard digits
/// covering the cancellation between its terms.
inline Real bessel_j(int nu, const Real &x)
{
    return detail::bessel_ascending(nu, x, -1);
}

/// e_j(x) = sum_{n=0}^{j} x^n / n!.
inline Real trunc_exp(int j, const Real &x_in)
{
    const Real x = at_current(x_in);
    if (j < 0) {
        throw std::invalid_argument("trunc_exp: order must be >= 0");
    }
    Real r = 1;
    for (int n = j; n >= 1; --n) {
        r = 1 + x * r / n;
    }
    return r;
}

/// Gamma(s, x) = (s-1)! e^{-x} e_{s-1}(x) for integer s >= 1.
inline Real incomplete_gamma(int s, const Real &x_in)
{
    const Real x = at_current(x_in);
    if (s < 1) {
        throw std::invalid_argument("incomplete_gamma: s must be >= 1");
    }
    if (x < 0) {
        throw std::invalid_argument("incomplete_gamma: x must be >= 0");
    }
    return to_real(factorial(static_cast<unsigned long>(s - 1))) * exp(-x) * trunc_exp(s - 1, x);
}

/// M_{kappa, kappa+1/2}(x) = (2 kappa + 1)! (e^{x/2} - e^{-x/2} e_{2 kappa}(x)) / x^kappa.
///
/// Below x = 1 the difference is summed directly as the tail of the
/// exponential series; above it the closed form runs with enough guard
/// digits to absorb the cancellation.
inline Real whittaker_m(int kappa, const Real &x_in)
{
    const Real x = at_current(x_in);
    if (kappa < 1) {
        throw std::invalid_argument("whittaker_m: kappa must be >= 1");
    }
    if (x < 0) {
        throw std::invalid_argument("whittaker_m: x must be >= 0");
    }
    if (x == 0) {
        return Real(0);
    }
    const int outer = DigitsGuard::current();
    const int top = 2 * kappa + 1;
    const Real fact = to_real(factorial(static_cast<unsigned long>(top)));
    if (x < 1) {
        // (2k+1)! e^{-x/2} sum_{n >= 2k+1} x^{n-k} / n!
        Real term = pow(x, kappa + 1); // (2k+1)! x^{2k+1-k} / (2k+1)!
        Real sum = term;
        const Real eps = pow(Real(10), -(outer + 5));
        for (int n = top + 1;; ++n) {
            term *= x / n;
            sum += term;
            if (term <= eps * sum) {
                break;
            }
        }
        return sum * exp(-x / 2);
    }
    const double xd = x.convert_to<double>();
    const double lost = (xd - (top * std::log(xd) - std::lgamma(top + 1.0))) / std::log(10.0);
    const int guard = 5 + std::max(0, static_cast<int>(std::ceil(lost)));
    Real out;
    {
        DigitsGuard g(outer + guard);
        const Real xx(x, outer + guard);
        out = to_real(factorial(static_cast<unsigned long>(top))) *
              (exp(xx / 2) - exp(-xx / 2) * trunc_exp(2 * kappa, xx)) / pow(xx, kappa);
    }
    (void)fact;
    return at_current(out);
}

// ---------------------------------------------------------------------------
// Kloosterman-Bessel series

/// A truncated infinite sum with an estimate of what was left out.
struct SeriesEstimate {
    Real value;
    Real tail;       // bound on the omitted terms
    long terms = 0;  // largest index summed (c for Kloosterman sums)
    long limit = 0;  // configured cutoff
    int digits = 0;  // working precision of value
};

enum class BesselKind { I, J };

namespace detail
{

/// sum_{c=1}^{C} K(km, kn, c)/c * B_11(4 pi sqrt(mn) / c), ascending c, compensated.
///
/// C is ctx.c_max unless the bound on sum_{c > C} falls below max(rel_tol * |sum|, 10^log_abs_tol) first.
/// With |K| <= c, I_11(y) <= (y/2)^11/11! e^{y^2/48} and |J_11(y)| <= (y/2)^11/11!,
/// the omitted part is at most (X/2)^11/11! * E * C^{-10}/10, X = 4 pi sqrt(mn).
inline SeriesEstimate kloosterman_bessel_sum(long km, long kn, long mn, BesselKind kind, const PrecisionContext &ctx,
                                             double rel_tol, double log_abs_tol = -INFINITY)
{
    if (mn < 1) {
        throw std::invalid_argument("kloosterman_bessel_sum: mn must be >= 1");
    }
    SeriesEstimate out;
    out.limit = ctx.c_max;
    out.digits = DigitsGuard::current();
    const Real big_x = 4 * real_pi() * sqrt(Real(mn));
    const double xd = big_x.convert_to<double>();
    const double ln10 = std::log(10.0);
    const double log_a = 11 * std::log10(xd / 2) - std::lgamma(12.0) / ln10 - 1.0; // includes the 1/10
    const double log_rel = std::log10(rel_tol);

    auto log_tail = [&](long c) {
        const double e = kind == BesselKind::I ? (xd * xd) / (48.0 * double(c) * double(c)) / ln10 : 0.0;
        return log_a + e - 10 * std::log10(double(c));
    };

    // a term is at most (X/2)^11/11! E c^{-11}; it is computed with just enough
    // digits to be exact to 10^{-digits-5} relative to the running sum
    auto log_term = [&](long c) { return log_tail(c) + 1.0 - std::log10(double(c)); };

    CompensatedSum sum;
    long c = 1;
    for (; c <= ctx.c_max; ++c) {
        int need = out.digits;
        if (c >= 16) {
            const double target = std::max(log10_abs(sum.value()) + log_rel, log_abs_tol);
            need = std::clamp(5 + static_cast<int>(std::ceil(log_term(c) - target)), 20, out.digits);
        }
        Real term;
        {
            DigitsGuard g(need);
            const Real y = Real(big_x, need) / c;
            const Real b = kind == BesselKind::I ? bessel_i(11, y) : bessel_j(11, y);
            const Real k = kloosterman(km, kn, c);
            term = k * b / c;
        }
        if (term != 0) {
            sum.add(Real(term, out.digits));
        }
        if (c >= 16 && log_tail(c) <= std::max(log_rel + log10_abs(sum.value()), log_abs_tol)) {
            break;
        }
    }
    out.terms = std::min(c, ctx.c_max);
    out.value = sum.value();
    out.tail = pow(Real(10), Real(log_tail(out.terms)));
    return out;
}

inline double default_rel_tol(const PrecisionContext &ctx)
{
    return std::pow(10.0, -ctx.work_digits);
}

} // namespace detail

/// a_Delta(n) = -2 pi 11! n^{-11/2} sum_c K(-1, n, c)/c I_11(4 pi sqrt(n)/c), n >= 1.
inline SeriesEstimate a_delta(long n, const PrecisionContext &ctx)
{
    if (n < 1) {
        throw std::invalid_argument("a_delta: n must be >= 1 (a_Delta(0) and a_Delta(-1) are exact)");
    }
    ctx.validate();
    DigitsGuard g(ctx.work_digits);
    SeriesEstimate s = detail::kloosterman_bessel_sum(-1, n, n, BesselKind::I, ctx, detail::default_rel_tol(ctx));
    const Real f = -2 * real_pi() * to_real(factorial(11)) / pow(Real(n), Real(11) / 2);
    s.value *= f;
    s.tail *= abs(f);
    return s;
}

/// a_Delta(0) = 24 * 11! / B_12.
inline BigRat a_delta_zero()
{
    return BigRat(24) * BigRat(factorial(11)) / bernoulli(12);
}

/// c^+_{-10,-m}(n) = -2 pi (m/n)^{11/2} sum_c K(-m, n, c)/c I_11(4 pi sqrt(mn)/c).
/// Only weight -10 is supported. The c-sum stops once its omitted part is below
/// rel_tol relative or 10^log_abs_tol absolute, whichever is reached first.
inline SeriesEstimate holo_coefficient_p(int k, long m, long n, const PrecisionContext &ctx,
                                         double rel_tol = 0, double log_abs_tol = -INFINITY)
{
    if (k != -10) {
        throw std::invalid_argument("holo_coefficient_p: only weight -10 is supported");
    }
    if (m < 1 || n < 1) {
        throw std::invalid_argument("holo_coefficient_p: m, n must be >= 1");
    }
    ctx.validate();
    DigitsGuard g(ctx.work_digits);
    const Real f = -2 * real_pi() * pow(Real(m) / n, Real(11) / 2);
    SeriesEstimate s = detail::kloosterman_bessel_sum(-m, n, m * n, BesselKind::I, ctx,
                                                      rel_tol > 0 ? rel_tol : detail::default_rel_tol(ctx),
                                                      log_abs_tol - log10_abs(f));
    s.value *= f;
    s.tail *= abs(f);
    return s;
}

/// c^-_{-10,-m}(-n) = 2 pi (m/n)^{11/2} sum_c K(m, n, c)/c J_11(4 pi sqrt(mn)/c).
inline SeriesEstimate shadow_coefficient(long m, long n, const PrecisionContext &ctx, double rel_tol = 0,
                                         double log_abs_tol = -INFINITY)
{
    if (m < 1 || n < 1) {
        throw std::invalid_argument("shadow_coefficient: m, n must be >= 1");
    }
    ctx.validate();
    DigitsGuard g(ctx.work_digits);
    const Real f = 2 * real_pi() * pow(Real(m) / n, Real(11) / 2);
    SeriesEstimate s = detail::kloosterman_bessel_sum(m, n, m * n, BesselKind::J, ctx,
                                                      rel_tol > 0 ? rel_tol : detail::default_rel_tol(ctx),
                                                      log_abs_tol - log10_abs(f));
    s.value *= f;
    s.tail *= abs(f);
    return s;
}

/// beta_Delta = 1 + c^-_{-10,-1}(-1).
inline SeriesEstimate beta_delta(const PrecisionContext &ctx)
{
    SeriesEstimate s = shadow_coefficient(1, 1, ctx);
    DigitsGuard g(ctx.work_digits);
    s.value += 1;
    return s;
}

/// Constant term of P_{-10,-m} at the 11!-normalized scale:
///   -(2 pi)^12 m^11 / Gamma(12) * 11! * sum_c K(m, 0, c) / c^12,
/// with K(m, 0, c) the Ramanujan sum. Equals a_Delta(0) sigma_11(m).
inline SeriesEstimate constant_term_p(int k, long m, const PrecisionContext &ctx)
{
    if (k != -10) {
        throw std::invalid_argument("constant_term_p: only weight -10 is supported");
    }
    if (m < 1) {
        throw std::invalid_argument("constant_term_p: m must be >= 1");
    }
    ctx.validate();
    DigitsGuard g(ctx.work_digits);
    const Real sig = to_real(sigma(1, m)); // |c_c(m)| <= sigma_1(m)
    const Real eps = pow(Real(10), -ctx.work_digits);
    CompensatedSum sum;
    long c = 1;
    Real tail;
    for (; c <= ctx.c_max; ++c) {
        const long r = ramanujan_sum(c, m);
        if (r != 0) {
            sum.add(Real(r) / pow(Real(c), 12));
        }
        tail = sig * pow(Real(c), -11) / 11;
        if (tail <= eps * abs(sum.value())) {
            break;
        }
    }
    SeriesEstimate s;
    s.limit = ctx.c_max;
    s.terms = std::min(c, ctx.c_max);
    s.digits = ctx.work_digits;
    const Real f = -pow(2 * real_pi(), 12) * pow(Real(m), 11);
    s.value = f * sum.value();
    s.tail = abs(f) * tail;
    return s;
}

// ---------------------------------------------------------------------------
// The damped cosine model on the arc tau = e^{i theta}, theta in [pi/3, pi/2]

inline void require_arc(const Real &theta)
{
    const Real lo = real_pi() / 3;
    const Real hi = real_pi() / 2;
    const Real slack = pow(Real(10), -(DigitsGuard::current() - 5));
    if (theta < lo - slack || theta > hi + slack) {
        throw std::domain_error("theta must lie in [pi/3, pi/2]");
    }
}

/// g_m(theta) = 5 theta + 2 pi m cos(theta).
inline Real g_m(long m, const Real &theta_in)
{
    const Real theta = at_current(theta_in);
    return 5 * theta + 2 * real_pi() * m * cos(theta);
}

/// The theta in [pi/3, pi/2] with g_m(theta) = y, by bisection to tol.
/// g_m is strictly decreasing there for m >= 1.
inline Real g_m_inverse(long m, const Real &y_in, const Real &tol)
{
    const Real y = at_current(y_in);
    if (m < 1) {
        throw std::invalid_argument("g_m_inverse: m must be >= 1");
    }
    Real lo = real_pi() / 3;
    Real hi = real_pi() / 2;
    const Real g_lo = g_m(m, lo); // 5 pi/3 + pi m
    const Real g_hi = g_m(m, hi); // 5 pi/2
    const Real slack = pow(Real(10), -(DigitsGuard::current() - 5));
    if (y > g_lo + slack || y < g_hi - slack) {
        throw std::domain_error("g_m_inverse: value outside [5 pi/2, 5 pi/3 + pi m]");
    }
    while (hi - lo > tol) {
        const Real mid = (lo + hi) / 2;
        if (g_m(m, mid) > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

/// 1 - e^{-4 pi m sin theta} e_10(4 pi m sin theta).
inline Real damping(long m, const Real &theta_in)
{
    const Real theta = at_current(theta_in);
    const Real x = 4 * real_pi() * m * sin(theta);
    return 1 - exp(-x) * trunc_exp(10, x);
}

/// f_m(theta) = 2 * 11! * damping * cos(g_m(theta)).
inline Real f_m(long m, const Real &theta_in)
{
    const Real theta = at_current(theta_in);
    if (m < 1) {
        throw std::invalid_argument("f_m: m must be >= 1");
    }
    return 2 * to_real(factorial(11)) * damping(m, theta) * cos(g_m(m, theta));
}

// ---------------------------------------------------------------------------
// Maass-Poincare series on the arc

struct ComplexEstimate {
    Complex value;
    Real tail;
    long terms = 0; // largest n summed
};

/// Fourier data of P_{-10,-m} with lazily extended coefficient tables.
///
/// Every term is computed to an absolute error of 10^{-target_digits} times
/// the size 11! e^{2 pi m sin theta} of the leading term, uniformly on the arc:
/// the n-th holomorphic coefficient is weighted by at most e^{-pi sqrt3 (n+m)} and
/// the n-th shadow coefficient by at most e_10(4 pi n) e^{-pi sqrt3 (n+m)}, relative
/// to that size. target_digits defaults to 30 and may not exceed the working
/// precision less 20 digits, which leaves room for the cancellation between the terms.
class PoincareExpansion
{
public:
    PoincareExpansion(long m, const PrecisionContext &ctx, int target_digits = 0, long n_cap = 4000)
        : m_(m), ctx_(ctx), target_(target_digits > 0 ? target_digits : std::min(30, ctx.work_digits - 20)), n_cap_(n_cap)
    {
        if (m < 1) {
            throw std::invalid_argument("PoincareExpansion: m must be >= 1");
        }
        ctx_.validate();
        if (target_ > ctx_.work_digits - 20) {
            throw std::invalid_argument("PoincareExpansion: target digits exceed the working precision less 20");
        }
        DigitsGuard g(ctx_.work_digits);
        constant_ = constant_term_p(-10, m_, ctx_);
    }

    long m() const
    {
        return m_;
    }

    /// P_{-10,-m}(e^{i theta}) at the 11!-normalized scale.
    ComplexEstimate evaluate(const Real &theta_in)
    {
        DigitsGuard g(ctx_.work_digits);
        const Real theta = at_current(theta_in);
        require_arc(theta);
        const Real pi = real_pi();
        const Real v = sin(theta);
        const Real u = cos(theta);
        const Real fact11 = to_real(factorial(11));
        const Real x = 4 * pi * m_ * v;

        // 11! (1 - e^{-x} e_10(x)) q^{-m}
        Complex total = Complex::polar(fact11 * damping(m_, theta) * exp(2 * pi * m_ * v), -2 * pi * m_ * u);
        total += Complex(constant_.value);
        Real tail = constant_.tail;

        const Real scale = fact11 * exp(2 * pi * m_ * v);
        const Real eps = pow(Real(10), -target_) * scale;
        const double vd = v.convert_to<double>();
        const long n_peak = static_cast<long>(std::ceil(4.0 * m_ / (vd * vd)));

        const Complex q = Complex::polar(exp(-2 * pi * v), 2 * pi * u);
        const Complex qinv = Complex::polar(exp(2 * pi * v), -2 * pi * u);
        Complex qn(Real(1)), qmn(Real(1));
        long n = 1;
        bool done_plus = false, done_minus = false;
        Real last_plus = 0, last_minus = 0;
        for (; n <= n_cap_ && !(done_plus && done_minus); ++n) {
            qn = qn * q;
            qmn = qmn * qinv;
            if (!done_plus) {
                const SeriesEstimate &c = plus(n);
                const Complex t = qn * (fact11 * c.value);
                total += t;
                tail += fact11 * c.tail * qn.abs();
                last_plus = t.abs();
                if (n >= n_peak && last_plus <= eps) {
                    done_plus = true;
                    // |t_{n+1}/t_n| <= r for the e^{4 pi sqrt(mn) - 2 pi n v} envelope past the peak
                    const Real r = exp(2 * pi * sqrt(Real(m_) / n) - 2 * pi * v);
                    tail += last_plus * r / (1 - r);
                }
            }
            if (!done_minus) {
                const SeriesEstimate &c = minus(n);
                const Real gam = incomplete_gamma(11, 4 * pi * n * v);
                const Complex t = qmn * (-11 * c.value * gam);
                total += t;
                tail += 11 * c.tail * gam * qmn.abs();
                last_minus = t.abs();
                if (n >= 4 && last_minus <= eps) {
                    done_minus = true;
                    const Real r = exp(-2 * pi * v) * pow(Real(n + 1) / n, 10);
                    tail += last_minus * r / (1 - r);
                }
            }
        }
        if (!(done_plus && done_minus)) {
            throw std::runtime_error("PoincareExpansion: series did not converge within n_cap terms");
        }
        return {total, tail, n - 1};
    }

private:
    const SeriesEstimate &plus(long n)
    {
        while (static_cast<long>(plus_.size()) < n) {
            const long k = static_cast<long>(plus_.size()) + 1;
            plus_.push_back(holo_coefficient_p(-10, m_, k, ctx_, 0, log_weight_tol(k)));
        }
        return plus_[n - 1];
    }
    const SeriesEstimate &minus(long n)
    {
        while (static_cast<long>(minus_.size()) < n) {
            const long k = static_cast<long>(minus_.size()) + 1;
            const double e10 = trunc_exp(10, 4 * real_pi() * k).convert_to<double>();
            minus_.push_back(shadow_coefficient(m_, k, ctx_, 0, log_weight_tol(k) - std::log10(e10)));
        }
        return minus_[n - 1];
    }

    // log10 of the absolute tolerance for a coefficient of index k, before its weight
    double log_weight_tol(long k) const
    {
        return -target_ + M_PI * std::sqrt(3.0) * double(k + m_) / std::log(10.0);
    }

    long m_;
    PrecisionContext ctx_;
    int target_;
    long n_cap_;
    SeriesEstimate constant_;
    std::vector<SeriesEstimate> plus_;
    std::vector<SeriesEstimate> minus_;
};

namespace detail
{

inline std::shared_ptr<PoincareExpansion> shared_expansion(long m, const PrecisionContext &ctx, int target)
{
    static std::mutex mu;
    static std::map<std::tuple<long, int, long, int>, std::shared_ptr<PoincareExpansion>> cache;
    std::lock_guard lock(mu);
    auto &slot = cache[{m, ctx.work_digits, ctx.c_max, target}];
    if (!slot) {
        slot = std::make_shared<PoincareExpansion>(m, ctx, target);
    }
    return slot;
}

inline int clamp_target(int target, const PrecisionContext &ctx)
{
    return std::clamp(target, 10, ctx.work_digits - 20);
}

} // namespace detail

/// Default accuracy of Poincare evaluations, in digits relative to the leading term.
inline constexpr int poincare_default_digits = 30;

/// P_{-10,-m}(e^{i theta}), coefficient tables shared across calls with the same
/// context and target accuracy (target_digits <= 0 selects the default).
inline ComplexEstimate poincare_eval(long m, const Real &theta, const PrecisionContext &ctx, int target_digits = 0)
{
    const int target = detail::clamp_target(target_digits > 0 ? target_digits : poincare_default_digits, ctx);
    auto e = detail::shared_expansion(m, ctx, target);
    DigitsGuard g(ctx.work_digits);
    return e->evaluate(theta);
}

/// R(e^{i theta}) = P_{-10,-1}(e^{i theta}).
inline ComplexEstimate r_eval(const Real &theta, const PrecisionContext &ctx, int target_digits = 0)
{
    return poincare_eval(1, theta, ctx, target_digits);
}

// ---------------------------------------------------------------------------
// Bound checks

struct BoundReport {
    long m = 0;
    Real theta;
    Real lhs;              // |e^{-5 i theta} e^{-2 pi m sin theta} (P_m - tau(m) R) - f_m(theta)|
    Real budget;           // 11!
    Real truncation_error; // propagated tail estimates
    Real imag_residual;    // imaginary part of the rotated combination, zero in exact arithmetic
    int digits = 0;        // accuracy target of the evaluation
    bool pass = false;
};

/// Evaluates the bound at one angle with P_m accurate to target_digits.
/// R enters multiplied by tau(m) e^{-2 pi (m-1) sin theta} relative to P_m, so it is
/// evaluated to correspondingly fewer digits.
inline BoundReport f_bound_at(long m, const Real &theta_in, const PrecisionContext &ctx, int target_digits = 0)
{
    const int target = detail::clamp_target(target_digits > 0 ? target_digits : poincare_default_digits, ctx);
    const BigInt tm = tau(m);
    const double r_weight = std::log10(std::fabs(tm.get_d())) - M_PI * std::sqrt(3.0) * (m - 1) / std::log(10.0);
    const int r_target = detail::clamp_target(target + static_cast<int>(std::ceil(r_weight)) + 1, ctx);

    DigitsGuard g(ctx.work_digits);
    const Real theta = at_current(theta_in);
    const ComplexEstimate p = poincare_eval(m, theta, ctx, target);
    const ComplexEstimate r = r_eval(theta, ctx, r_target);
    const Real t = to_real(tm);
    const Real pi = real_pi();
    const Real damp = exp(-2 * pi * m * sin(theta));
    const Complex rot = Complex::polar(damp, -5 * theta);
    const Complex comb = rot * (p.value - r.value * t);
    BoundReport rep;
    rep.m = m;
    rep.theta = theta;
    rep.lhs = (comb - Complex(f_m(m, theta))).abs();
    rep.budget = to_real(factorial(11));
    rep.truncation_error = damp * (p.tail + abs(t) * r.tail);
    rep.imag_residual = comb.im;
    rep.digits = target;
    rep.pass = rep.lhs + rep.truncation_error < rep.budget;
    return rep;
}

/// Evaluates the bound on `grid` equally spaced angles covering [pi/3, pi/2].
///
/// Points where lhs < 11! but lhs + error >= 11! are re-evaluated with the
/// accuracy target raised to the working precision less 20 digits. At theta = pi/3
/// the margin is 11! e^{-x} e_10(x), x = 2 pi m sqrt3, which shrinks quickly with m.
inline std::vector<BoundReport> check_f_bound(long m, int grid, const PrecisionContext &ctx)
{
    if (m < 3) {
        throw std::invalid_argument("the bound requires m >= 3");
    }
    if (grid < 1) {
        throw std::invalid_argument("grid must be >= 1");
    }
    DigitsGuard g(ctx.work_digits);
    std::vector<BoundReport> out;
    out.reserve(static_cast<std::size_t>(grid));
    const Real lo = real_pi() / 3;
    const Real step = grid > 1 ? (real_pi() / 6) / (grid - 1) : Real(0);
    const int fine = detail::clamp_target(ctx.work_digits, ctx);
    for (int i = 0; i < grid; ++i) {
        const Real theta = lo + step * i;
        BoundReport rep = f_bound_at(m, theta, ctx);
        if (!rep.pass && rep.lhs < rep.budget && fine > rep.digits) {
            rep = f_bound_at(m, theta, ctx, fine);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

/// Lattice sum of (c^2 + cd + d^2)^{-6} over max(|c|, |d|) <= cutoff, (c, d) != 0.
struct EpsteinValue {
    Real partial;
    Real tail_bound; // sum over max(|c|,|d|) > cutoff is below this
    Real upper() const
    {
        return partial + tail_bound;
    }
};

/// The tail uses c^2 + cd + d^2 >= R^2/2 on the 8R points with max(|c|,|d|) = R:
/// sum_{R > C} 8R (R^2/2)^{-6} <= 512 C^{-10} / 10.
inline EpsteinValue epstein_zeta6(long cutoff, int digits = 40)
{
    if (cutoff < 10) {
        throw std::invalid_argument("epstein_zeta6: cutoff must be >= 10");
    }
    DigitsGuard g(digits);
    CompensatedSum sum;
    // shells of increasing R, fixed order
    for (long r = 1; r <= cutoff; ++r) {
        for (long c = -r; c <= r; ++c) {
            for (long d = -r; d <= r; ++d) {
                if (std::max(std::labs(c), std::labs(d)) != r) {
                    continue;
                }
                const long qf = c * c + c * d + d * d;
                sum.add(1 / pow(Real(qf), 6));
            }
        }
    }
    EpsteinValue e;
    e.partial = sum.value();
    e.tail_bound = Real(512) / (10 * pow(Real(cutoff), 10));
    return e;
}

/// |tau(m)| <= sigma_0(m) m^{11/2} and |tau(m)| <= 2 m^6 for 1 <= m <= m_max,
/// both compared after squaring, in exact integers.
inline bool deligne_check(long m_max, const PrecisionContext &ctx, long *first_failure = nullptr)
{
    if (m_max >= ctx.series_order) {
        throw TruncationError("deligne_check: m_max must be below the series order", m_max + 1);
    }
    const QSeries d = delta(ctx);
    for (long m = 1; m <= m_max; ++m) {
        const BigInt t = tau(d, m);
        const BigInt t2 = t * t;
        const BigInt s0 = num_divisors(m);
        const bool deligne = t2 <= s0 * s0 * pow_int(BigInt(m), 11);
        const bool weak = t2 <= 4 * pow_int(BigInt(m), 12);
        if (!deligne || !weak) {
            if (first_failure) {
                *first_failure = m;
            }
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Numeric evaluation of exact q-series on the arc

/// sum of c_n q^n over the known coefficients of s, at q = e^{2 pi i tau}, tau = e^{i theta}.
inline Complex evaluate_series_on_arc(const QSeries &s, const Real &theta_in)
{
    const Real theta = at_current(theta_in);
    const Real pi = real_pi();
    const Complex q = Complex::polar(exp(-2 * pi * sin(theta)), 2 * pi * cos(theta));
    // Horner from the top, then the power of q for the valuation
    Complex acc;
    for (long e = s.truncation() - 1; e >= s.valuation(); --e) {
        acc = acc * q + Complex(to_real(s.coeff(e)));
    }
    const long v = s.valuation();
    Complex qv(Real(1));
    const Complex base = v < 0 ? Complex(Real(1)) / q : q;
    for (long i = 0; i < std::labs(v); ++i) {
        qv = qv * base;
    }
    return acc * qv;
}

/// Number of q-terms of j needed on the arc for an error below 10^{-digits}:
/// c(n) <= e^{4 pi sqrt(n)} and |q| <= e^{-pi sqrt(3)}.
inline int arc_terms_for_digits(int digits)
{
    const double target = digits * std::log(10.0) + 10;
    for (int n = 1;; ++n) {
        if (M_PI * std::sqrt(3.0) * n - 4 * M_PI * std::sqrt(double(n)) > target) {
            return n + 1;
        }
    }
}

} // namespace mockdelta
