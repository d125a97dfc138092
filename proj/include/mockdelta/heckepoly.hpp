#pragma once

// Hecke polynomials F_m(x) of the weight -10 mock modular form M_Delta.
//
// F_m(j) = E_4 E_6 / 11! * (m^11 M_Delta | T_{-10}(m) - tau(m) M_Delta).
// The production path is the closed formula in psi_n; the oracle path
// rebuilds the same polynomial from the principal part of the Hecke image.

#include <mockdelta/faber.hpp>
#include <mockdelta/numbers.hpp>
#include <mockdelta/poly.hpp>
#include <mockdelta/qseries.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mockdelta
{

/// Integers appearing in the closed formula for F_m. Only tests and the
/// `verify --corrupt-constant` fault injection override them.
struct HeckeFormulaConstants {
    BigInt tau_numerator = 247944;
    BigInt sigma11_numerator = 65520;
    BigInt denominator = 691;
    BigInt e10_coefficient = 264;
};

namespace detail
{

inline void require_m_at_least_2(long m)
{
    if (m < 2) {
        throw std::invalid_argument("m must be >= 2");
    }
}

} // namespace detail

/// F_m(x) = psi_m + 247944 tau(m)/691 - 65520 sigma_11(m)/691 - 264 sigma_9(m)
///          - 264 sum_{l=1}^{m-2} sigma_9(l) psi_{m-l} - (tau(m) + 264 sigma_9(m-1)) psi_1.
inline IntPoly hecke_poly_f(int m, const PrecisionContext &ctx, const HeckeFormulaConstants &k = {})
{
    detail::require_m_at_least_2(m);
    const BigInt t = tau(m, ctx);
    const BigInt s11 = sigma(11, m);

    const BigInt num = k.tau_numerator * t - k.sigma11_numerator * s11;
    if (num % k.denominator != 0) {
        throw std::logic_error("F_" + std::to_string(m) + ": constant " + to_string(num) + "/" +
                               to_string(k.denominator) + " is not an integer");
    }
    const BigInt constant = num / k.denominator - k.e10_coefficient * sigma(9, m);

    IntPoly f = faber_psi(m) + IntPoly(constant);
    for (int l = 1; l <= m - 2; ++l) {
        f -= faber_psi(m - l) * BigInt(k.e10_coefficient * sigma(9, l));
    }
    f -= faber_psi(1) * BigInt(t + k.e10_coefficient * sigma(9, m - 1));
    return f;
}

/// A value linear in the two leading mock coefficients a_Delta(-1), a_Delta(0).
struct MockLinear {
    BigRat a_minus1 = 0;
    BigRat a0 = 0;

    MockLinear() = default;
    MockLinear(long zero)
    {
        if (zero != 0) {
            throw std::invalid_argument("MockLinear: only the integer 0 converts");
        }
    }
    MockLinear(BigRat am1, BigRat a00) : a_minus1(std::move(am1)), a0(std::move(a00)) {}

    MockLinear &operator+=(const MockLinear &o)
    {
        a_minus1 += o.a_minus1;
        a0 += o.a0;
        return *this;
    }
    MockLinear &operator-=(const MockLinear &o)
    {
        a_minus1 -= o.a_minus1;
        a0 -= o.a0;
        return *this;
    }
    friend MockLinear operator+(MockLinear a, const MockLinear &b)
    {
        return a += b;
    }
    friend MockLinear operator-(MockLinear a, const MockLinear &b)
    {
        return a -= b;
    }
    friend MockLinear operator-(const MockLinear &a)
    {
        return {-a.a_minus1, -a.a0};
    }
    friend MockLinear operator*(const MockLinear &a, const BigRat &s)
    {
        return {a.a_minus1 * s, a.a0 * s};
    }
    friend bool operator==(const MockLinear &a, const MockLinear &b)
    {
        return a.a_minus1 == b.a_minus1 && a.a0 == b.a0;
    }
    friend bool operator==(const MockLinear &a, int zero)
    {
        return zero == 0 && a.a_minus1 == 0 && a.a0 == 0;
    }

    /// Substitutes numeric values for the two symbols.
    BigRat value(const BigRat &am1, const BigRat &a00) const
    {
        return a_minus1 * am1 + a0 * a00;
    }
};

using MockSeries = LaurentSeries<MockLinear>;

/// a_Delta(-1) = 11!.
inline BigRat mock_a_minus1()
{
    return BigRat(factorial(11));
}

/// a_Delta(0) = 24 * 11! / B_12 = -2615348736000/691.
inline BigRat mock_a0()
{
    return BigRat(24) * BigRat(factorial(11)) / bernoulli(12);
}

/// Principal part and constant of m^11 M_Delta | T_{-10}(m), keeping a_Delta(-1)
/// and a_Delta(0) symbolic. Exponents -m..0 are returned (truncation 1).
///
/// Every divisor pair is enumerated; only indices mn/d^2 in {-1, 0} contribute.
inline MockSeries hecke_image_mdelta_symbolic(int m)
{
    if (m < 1) {
        throw std::invalid_argument("m must be >= 1");
    }
    std::vector<MockLinear> out(static_cast<std::size_t>(m + 1));
    for (long n = -m; n <= 0; ++n) {
        MockLinear acc;
        for (long d = 1; d <= m; ++d) {
            if (m % d != 0 || n % d != 0) {
                continue;
            }
            const long idx = m * n / (d * d);
            // m^11 d^-11 = (m/d)^11
            const BigRat w(pow_int(BigInt(m / d), 11));
            if (idx == -1) {
                acc += MockLinear(w, 0);
            } else if (idx == 0) {
                acc += MockLinear(0, w);
            }
        }
        out[static_cast<std::size_t>(n + m)] = acc;
    }
    return MockSeries(-m, std::move(out));
}

/// F_m rebuilt from the principal part of E_10 * (m^11 M|T(m) - tau(m) M),
/// expanded in the basis psi_n after substituting a_Delta(-1), a_Delta(0)
/// and dividing by 11!. Independent of the closed formula.
inline IntPoly hecke_poly_f_oracle(int m, const PrecisionContext &ctx)
{
    detail::require_m_at_least_2(m);
    const BigRat t(tau(m, ctx));
    MockSeries s = hecke_image_mdelta_symbolic(m);
    // - tau(m) * (A q^{-1} + A0)
    std::vector<MockLinear> tail(static_cast<std::size_t>(m + 1));
    tail[m - 1] = MockLinear(t, 0);
    tail[m] = MockLinear(0, t);
    s = s - MockSeries(-m, std::move(tail));

    const QSeries e10 = eisenstein(10, m + 1);
    const BigRat am1 = mock_a_minus1();
    const BigRat a0 = mock_a0();
    const BigRat inv11 = BigRat(1) / am1;

    // coefficient of q^{-e} in E_10 * s, 0 <= e <= m, after substitution and / 11!
    std::vector<BigRat> pp(static_cast<std::size_t>(m + 1));
    for (long e = -m; e <= 0; ++e) {
        MockLinear acc;
        for (long i = 0; i <= e + m; ++i) {
            acc += s.coeff(e - i) * e10.coeff(i);
        }
        pp[static_cast<std::size_t>(-e)] = acc.value(am1, a0) * inv11;
    }

    // psi_n(j) = q^{-n} + O(q): the principal part fixes the combination
    RatPoly f;
    for (int n = 0; n <= m; ++n) {
        if (pp[n] != 0) {
            f += to_rat(faber_psi(n)) * pp[n];
        }
    }
    return to_int(f);
}

struct IntegralityWitness {
    BigInt numerator; // 247944 tau(m) - 65520 sigma_11(m)
    bool divisible;   // numerator = 0 mod 691
};

inline IntegralityWitness integrality_witness(int m, const PrecisionContext &ctx)
{
    detail::require_m_at_least_2(m);
    IntegralityWitness w;
    w.numerator = BigInt(247944) * tau(m, ctx) - BigInt(65520) * sigma(11, m);
    w.divisible = w.numerator % 691 == 0;
    return w;
}

struct HeckePolyReport {
    int m = 0;
    IntPoly poly;
    IntPoly oracle_poly;
    bool agree = false;
    bool zero_at_0 = false;
    bool zero_at_1728 = false;
};

inline HeckePolyReport hecke_poly_report(int m, const PrecisionContext &ctx, const HeckeFormulaConstants &k = {})
{
    HeckePolyReport r;
    r.m = m;
    r.poly = hecke_poly_f(m, ctx, k);
    r.oracle_poly = hecke_poly_f_oracle(m, ctx);
    r.agree = r.poly == r.oracle_poly;
    r.zero_at_0 = r.poly(BigInt(0)) == 0;
    r.zero_at_1728 = r.poly(BigInt(1728)) == 0;
    return r;
}

} // namespace mockdelta
