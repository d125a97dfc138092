#pragma once

// Arbitrary-precision reals (MPFR through Boost.Multiprecision) and a small
// complex type on top of them.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <mockdelta/numbers.hpp>

#include <cmath>
#include <ios>
#include <mutex>
#include <string>

namespace mockdelta
{

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

namespace detail
{

inline std::recursive_mutex &precision_mutex()
{
    static std::recursive_mutex mu;
    return mu;
}

} // namespace detail

/// Sets the default decimal precision for newly created Reals and restores it
/// on exit. MPFR's default precision is process-wide in this Boost version, so
/// the guard also holds a recursive lock: numeric work under different
/// precisions is serialized across threads, nested guards on one thread nest.
class DigitsGuard
{
public:
    explicit DigitsGuard(int digits) : lock_(detail::precision_mutex()), saved_(Real::default_precision())
    {
        if (digits < 10) {
            digits = 10;
        }
        Real::default_precision(static_cast<unsigned>(digits));
    }
    ~DigitsGuard()
    {
        Real::default_precision(saved_);
    }
    DigitsGuard(const DigitsGuard &) = delete;
    DigitsGuard &operator=(const DigitsGuard &) = delete;

    static int current()
    {
        return static_cast<int>(Real::default_precision());
    }

private:
    std::unique_lock<std::recursive_mutex> lock_;
    unsigned saved_;
};

/// x rounded to the current default precision. A Real keeps the precision it
/// was created with and arithmetic inherits it from the operands, so functions
/// taking Real arguments round them with this on entry.
inline Real at_current(const Real &x)
{
    return Real(x, Real::default_precision());
}

inline Real real_pi()
{
    return boost::math::constants::pi<Real>();
}

inline Real to_real(const BigInt &x)
{
    return Real(x.get_str());
}

inline Real to_real(const BigRat &x)
{
    return to_real(x.get_num()) / to_real(x.get_den());
}

/// Nearest rational p / 10^digits to x.
inline BigRat to_rat(const Real &x, int digits)
{
    const Real scaled = x * pow(Real(10), digits);
    BigInt n;
    mpfr_get_z(n.get_mpz_t(), scaled.backend().data(), MPFR_RNDN);
    return make_rat(n, pow_int(10, static_cast<unsigned long>(digits)));
}

/// Scientific notation with the given number of significant digits.
inline std::string format_sci(const Real &x, int digits)
{
    return x.str(digits, std::ios_base::scientific);
}

/// Fixed notation with the given number of digits after the point.
inline std::string format_fixed(const Real &x, int decimals)
{
    std::string s = x.str(decimals, std::ios_base::fixed);
    if (s.rfind("-0", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1); // no negative zero
    }
    return s;
}

/// log10 |x| as a double, -inf for zero.
inline double log10_abs(const Real &x)
{
    if (x == 0) {
        return -INFINITY;
    }
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, x.backend().data(), MPFR_RNDN);
    return std::log10(std::fabs(m)) + static_cast<double>(e) * std::log10(2.0);
}

struct Complex {
    Real re = 0;
    Real im = 0;

    Complex() = default;
    Complex(Real r, Real i = 0) : re(std::move(r)), im(std::move(i)) {}

    static Complex polar(const Real &r, const Real &theta)
    {
        return {r * cos(theta), r * sin(theta)};
    }

    Complex &operator+=(const Complex &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex &operator-=(const Complex &o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend Complex operator+(Complex a, const Complex &b)
    {
        return a += b;
    }
    friend Complex operator-(Complex a, const Complex &b)
    {
        return a -= b;
    }
    friend Complex operator*(const Complex &a, const Complex &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex &a, const Real &s)
    {
        return {a.re * s, a.im * s};
    }
    friend Complex operator*(const Real &s, const Complex &a)
    {
        return a * s;
    }
    friend Complex operator/(const Complex &a, const Complex &b)
    {
        const Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }

    Complex conj() const
    {
        return {re, -im};
    }
    Real abs() const
    {
        return hypot(re, im);
    }
};

/// Neumaier-compensated running sum; the order of add() calls fixes the result.
class CompensatedSum
{
public:
    void add(const Real &x)
    {
        const Real t = sum_ + x;
        if (abs(sum_) >= abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    Real value() const
    {
        return sum_ + comp_;
    }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

} // namespace mockdelta
