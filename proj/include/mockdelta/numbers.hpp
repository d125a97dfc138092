#pragma once

// Exact integer / rational scalars and the shared precision context.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mockdelta
{

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Reduced rational from numerator and denominator.
inline BigRat make_rat(const BigInt &num, const BigInt &den)
{
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const BigInt &x)
{
    return x.get_str();
}

/// "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const BigRat &x)
{
    return x.get_str();
}

/// Parses "p/q", "p", or a plain decimal such as "1e-30" / "0.125".
inline BigRat parse_rat(std::string_view text)
{
    std::string s(text);
    if (s.find_first_of(".eE") == std::string::npos) {
        BigRat r;
        if (r.set_str(s, 10) != 0) {
            throw std::invalid_argument("not a rational: " + s);
        }
        r.canonicalize();
        return r;
    }
    // decimal with optional exponent
    std::string mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        exp10 = std::stol(s.substr(e + 1));
    }
    bool neg = !mant.empty() && mant[0] == '-';
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        mant.erase(0, 1);
    }
    std::string digits;
    for (char ch : mant) {
        if (ch == '.') {
            continue;
        }
        if (ch < '0' || ch > '9') {
            throw std::invalid_argument("not a decimal: " + s);
        }
        digits.push_back(ch);
    }
    if (auto dot = mant.find('.'); dot != std::string::npos) {
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty()) {
        throw std::invalid_argument("not a decimal: " + s);
    }
    BigInt num(digits, 10);
    BigInt p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    BigRat r = exp10 < 0 ? make_rat(num, p10) : BigRat(num * p10);
    return neg ? BigRat(-r) : r;
}

inline BigInt pow_int(const BigInt &base, unsigned long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt factorial(unsigned long n)
{
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k)
{
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// Working parameters threaded through every numeric and series operation.
struct PrecisionContext {
    int series_order = 64;   // N: coefficients known for exponents < N
    long c_max = 10000;      // Kloosterman / Bessel truncation
    int work_digits = 60;    // decimal digits of working precision
    BigRat root_tol = BigRat(1, BigInt("1000000000000000000000000000000")); // 1e-30

    void validate() const
    {
        if (series_order < 2) {
            throw std::invalid_argument("series order must be >= 2");
        }
        if (c_max < 1) {
            throw std::invalid_argument("cmax must be >= 1");
        }
        if (work_digits < 30) {
            throw std::invalid_argument("working precision must be >= 30 digits");
        }
        if (root_tol <= 0) {
            throw std::invalid_argument("root tolerance must be positive");
        }
    }
};

} // namespace mockdelta
