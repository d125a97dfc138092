#pragma once

// Dense univariate polynomials over Z and Q.

#include <mockdelta/numbers.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mockdelta
{

/// Dense polynomial, coeffs[i] is the coefficient of x^i. Trailing zeros are
/// always stripped, so the zero polynomial has no coefficients and degree -1.
template <typename C>
class Poly
{
public:
    using coeff_type = C;

    Poly() = default;
    explicit Poly(std::vector<C> coeffs) : coeffs_(std::move(coeffs))
    {
        trim();
    }
    Poly(std::initializer_list<C> coeffs) : coeffs_(coeffs)
    {
        trim();
    }
    // Constant polynomial.
    Poly(const C &c) : coeffs_{c}
    {
        trim();
    }
    Poly(long c) : Poly(C(c)) {}

    static Poly x()
    {
        return Poly({C(0), C(1)});
    }
    static Poly monomial(std::size_t deg, const C &c = C(1))
    {
        std::vector<C> v(deg + 1, C(0));
        v[deg] = c;
        return Poly(std::move(v));
    }

    int degree() const
    {
        return static_cast<int>(coeffs_.size()) - 1;
    }
    bool is_zero() const
    {
        return coeffs_.empty();
    }
    const std::vector<C> &coeffs() const
    {
        return coeffs_;
    }
    /// Coefficient of x^i, zero beyond the degree.
    C operator[](std::size_t i) const
    {
        return i < coeffs_.size() ? coeffs_[i] : C(0);
    }
    const C &leading() const
    {
        if (coeffs_.empty()) {
            throw std::domain_error("leading coefficient of the zero polynomial");
        }
        return coeffs_.back();
    }
    bool is_monic() const
    {
        return !coeffs_.empty() && coeffs_.back() == 1;
    }

    Poly &operator+=(const Poly &o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size(), C(0));
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            coeffs_[i] += o.coeffs_[i];
        }
        trim();
        return *this;
    }
    Poly &operator-=(const Poly &o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size(), C(0));
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            coeffs_[i] -= o.coeffs_[i];
        }
        trim();
        return *this;
    }
    Poly &operator*=(const C &s)
    {
        for (auto &c : coeffs_) {
            c *= s;
        }
        trim();
        return *this;
    }
    Poly &operator*=(const Poly &o)
    {
        *this = *this * o;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly &b)
    {
        return a += b;
    }
    friend Poly operator-(Poly a, const Poly &b)
    {
        return a -= b;
    }
    friend Poly operator-(Poly a)
    {
        for (auto &c : a.coeffs_) {
            c = -c;
        }
        return a;
    }
    friend Poly operator*(Poly a, const C &s)
    {
        return a *= s;
    }
    friend Poly operator*(const C &s, Poly a)
    {
        return a *= s;
    }
    friend Poly operator*(const Poly &a, const Poly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return Poly();
        }
        std::vector<C> out(a.coeffs_.size() + b.coeffs_.size() - 1, C(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t k = 0; k < b.coeffs_.size(); ++k) {
                out[i + k] += a.coeffs_[i] * b.coeffs_[k];
            }
        }
        return Poly(std::move(out));
    }
    friend bool operator==(const Poly &a, const Poly &b)
    {
        return a.coeffs_ == b.coeffs_;
    }

    /// Horner evaluation in any ring that accepts C scalars.
    template <typename T>
    T evaluate(const T &at, const T &one) const
    {
        T acc = one * C(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * at + one * *it;
        }
        return acc;
    }

    C operator()(const C &at) const
    {
        C acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * at + *it;
        }
        return acc;
    }

    Poly derivative() const
    {
        if (coeffs_.size() <= 1) {
            return Poly();
        }
        std::vector<C> out(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            out[i - 1] = coeffs_[i] * C(static_cast<long>(i));
        }
        return Poly(std::move(out));
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0) {
            coeffs_.pop_back();
        }
    }

    std::vector<C> coeffs_;
};

using IntPoly = Poly<BigInt>;
using RatPoly = Poly<BigRat>;

inline RatPoly to_rat(const IntPoly &p)
{
    std::vector<BigRat> v;
    v.reserve(p.coeffs().size());
    for (const auto &c : p.coeffs()) {
        v.emplace_back(c);
    }
    return RatPoly(std::move(v));
}

/// Exact conversion; throws if a coefficient is not an integer.
inline IntPoly to_int(const RatPoly &p)
{
    std::vector<BigInt> v;
    v.reserve(p.coeffs().size());
    for (const auto &c : p.coeffs()) {
        if (c.get_den() != 1) {
            throw std::domain_error("non-integral coefficient " + to_string(c));
        }
        v.emplace_back(c.get_num());
    }
    return IntPoly(std::move(v));
}

/// Clears denominators: returns the primitive integer polynomial with positive
/// leading coefficient that is a rational multiple of p.
inline IntPoly primitive_integer_multiple(const RatPoly &p)
{
    BigInt l = 1;
    for (const auto &c : p.coeffs()) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    std::vector<BigInt> v;
    v.reserve(p.coeffs().size());
    for (const auto &c : p.coeffs()) {
        v.emplace_back(c.get_num() * (l / c.get_den()));
    }
    IntPoly q(std::move(v));
    BigInt g = 0;
    for (const auto &c : q.coeffs()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (q.is_zero()) {
        return q;
    }
    if (q.leading() < 0) {
        g = -g;
    }
    std::vector<BigInt> w(q.coeffs());
    for (auto &c : w) {
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
    return IntPoly(std::move(w));
}

inline BigInt content(const IntPoly &p)
{
    BigInt g = 0;
    for (const auto &c : p.coeffs()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) {
            break;
        }
    }
    return g;
}

/// p divided by its content, with the sign chosen so the leading coefficient is positive.
inline IntPoly primitive_part(const IntPoly &p)
{
    if (p.is_zero()) {
        return p;
    }
    BigInt g = content(p);
    if (p.leading() < 0) {
        g = -g;
    }
    std::vector<BigInt> w(p.coeffs());
    for (auto &c : w) {
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
    return IntPoly(std::move(w));
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, computed over Z.
inline IntPoly pseudo_remainder(const IntPoly &a, const IntPoly &b)
{
    if (b.is_zero()) {
        throw std::domain_error("pseudo-remainder by zero polynomial");
    }
    const int da = a.degree();
    const int db = b.degree();
    if (da < db) {
        return a;
    }
    std::vector<BigInt> r(a.coeffs());
    const BigInt &lb = b.leading();
    BigInt lr, t;
    for (int k = da; k >= db; --k) {
        lr = r[k];
        for (int i = 0; i < k; ++i) {
            r[i] *= lb;
        }
        if (lr != 0) {
            const int shift = k - db;
            for (int i = 0; i < db; ++i) {
                t = lr * b.coeffs()[i];
                r[i + shift] -= t;
            }
        }
        r.pop_back();
    }
    return IntPoly(std::move(r));
}

/// Quotient and remainder over Q.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly &a, const RatPoly &b)
{
    if (b.is_zero()) {
        throw std::domain_error("division by zero polynomial");
    }
    std::vector<BigRat> r(a.coeffs());
    const int db = b.degree();
    std::vector<BigRat> q(std::max(0, a.degree() - db + 1), BigRat(0));
    for (int dr = static_cast<int>(r.size()) - 1; dr >= db; --dr) {
        if (r[dr] == 0) {
            continue;
        }
        BigRat f = r[dr] / b.leading();
        q[dr - db] = f;
        for (int i = 0; i <= db; ++i) {
            r[i + dr - db] -= f * b.coeffs()[i];
        }
    }
    return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

/// Exact quotient a / b over Z; throws if b does not divide a.
inline IntPoly exact_divide(const IntPoly &a, const IntPoly &b)
{
    auto [q, r] = divmod(to_rat(a), to_rat(b));
    if (!r.is_zero()) {
        throw std::domain_error("polynomial division is not exact");
    }
    return to_int(q);
}

/// Primitive gcd over Z[x] with positive leading coefficient.
inline IntPoly gcd(IntPoly a, IntPoly b)
{
    if (a.degree() < b.degree()) {
        std::swap(a, b);
    }
    if (b.is_zero()) {
        return primitive_part(a);
    }
    a = primitive_part(a);
    b = primitive_part(b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_remainder(a, b);
        a = std::move(b);
        b = primitive_part(r);
    }
    return a;
}

namespace detail
{

template <typename C>
std::string coeff_str(const C &c)
{
    return to_string(c);
}

} // namespace detail

/// Human-readable form, highest degree first: "x^2 - 1488x + 159768".
template <typename C>
std::string format_poly(const Poly<C> &p, const std::string &var = "x")
{
    if (p.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const C &c = p.coeffs()[i];
        if (c == 0) {
            continue;
        }
        const bool neg = c < 0;
        const C mag = neg ? C(-c) : c;
        if (first) {
            if (neg) {
                os << '-';
            }
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            os << detail::coeff_str(mag);
            continue;
        }
        if (mag != 1) {
            os << detail::coeff_str(mag);
        }
        os << var;
        if (i > 1) {
            os << '^' << i;
        }
    }
    return os.str();
}

} // namespace mockdelta
