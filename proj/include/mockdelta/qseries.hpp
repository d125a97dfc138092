#pragma once

// Truncated Laurent q-expansions with exact coefficients, level-one modular
// objects (E_k, Delta, j) and the coefficientwise Hecke action.

#include <mockdelta/numbers.hpp>
#include <mockdelta/poly.hpp>

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mockdelta
{

/// Raised when an operation would need coefficients the operands do not carry.
class TruncationError : public std::out_of_range
{
public:
    TruncationError(const std::string &what, long required)
        : std::out_of_range(what + " (need truncation >= " + std::to_string(required) + ")"), required_(required)
    {
    }
    long required() const noexcept
    {
        return required_;
    }

private:
    long required_;
};

// Inverse of a unit of the coefficient ring. Found by ADL from LaurentSeries::inverse.
inline BigRat unit_inverse(const BigRat &x)
{
    if (x == 0) {
        throw std::domain_error("inverse of zero");
    }
    return BigRat(1) / x;
}

inline BigInt unit_inverse(const BigInt &x)
{
    if (x != 1 && x != -1) {
        throw std::domain_error("integer " + to_string(x) + " is not a unit");
    }
    return x;
}

template <typename C>
Poly<C> unit_inverse(const Poly<C> &p)
{
    if (p.degree() != 0) {
        throw std::domain_error("non-constant polynomial is not a unit");
    }
    return Poly<C>(unit_inverse(p.leading()));
}

/// q^v * (c_0 + c_1 q + ... + c_{L-1} q^{L-1}) + O(q^{v+L}).
///
/// The stored exponent range [valuation, truncation) is exactly the range of
/// known coefficients; everything at or above the truncation is unknown and
/// never fabricated. The leading stored coefficient may be zero.
template <typename R>
class LaurentSeries
{
public:
    using coeff_type = R;

    LaurentSeries() = default;
    LaurentSeries(long valuation, std::vector<R> coeffs) : val_(valuation), coeffs_(std::move(coeffs)) {}

    /// c * q^e + O(q^trunc).
    static LaurentSeries monomial(long e, const R &c, long trunc)
    {
        if (trunc <= e) {
            throw std::invalid_argument("monomial exponent at or beyond truncation");
        }
        std::vector<R> v(static_cast<std::size_t>(trunc - e), R(0));
        v[0] = c;
        return LaurentSeries(e, std::move(v));
    }

    long valuation() const
    {
        return val_;
    }
    long truncation() const
    {
        return val_ + static_cast<long>(coeffs_.size());
    }
    const std::vector<R> &coeffs() const
    {
        return coeffs_;
    }

    /// Coefficient of q^e; zero below the valuation, an error at or above the truncation.
    R coeff(long e) const
    {
        if (e >= truncation()) {
            throw TruncationError("coefficient of q^" + std::to_string(e) + " is beyond the truncation", e + 1);
        }
        if (e < val_) {
            return R(0);
        }
        return coeffs_[static_cast<std::size_t>(e - val_)];
    }

    /// Exponent of the first nonzero known coefficient, or truncation() if none.
    long order() const
    {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (!(coeffs_[i] == 0)) {
                return val_ + static_cast<long>(i);
            }
        }
        return truncation();
    }

    /// Drops knowledge at and above new_trunc.
    LaurentSeries truncated(long new_trunc) const
    {
        if (new_trunc > truncation()) {
            throw TruncationError("cannot extend a truncated series", new_trunc);
        }
        if (new_trunc <= val_) {
            return LaurentSeries(new_trunc, {});
        }
        return LaurentSeries(val_, std::vector<R>(coeffs_.begin(), coeffs_.begin() + (new_trunc - val_)));
    }

    /// Re-anchors at the first nonzero coefficient (or at the truncation for zero).
    LaurentSeries normalized() const
    {
        const long o = order();
        return LaurentSeries(o, std::vector<R>(coeffs_.begin() + (o - val_), coeffs_.end()));
    }

    /// Multiplication by q^k.
    LaurentSeries shifted(long k) const
    {
        return LaurentSeries(val_ + k, coeffs_);
    }

    friend LaurentSeries operator+(const LaurentSeries &a, const LaurentSeries &b)
    {
        return combine(a, b, false);
    }
    friend LaurentSeries operator-(const LaurentSeries &a, const LaurentSeries &b)
    {
        return combine(a, b, true);
    }
    friend LaurentSeries operator-(LaurentSeries a)
    {
        for (auto &c : a.coeffs_) {
            c = -c;
        }
        return a;
    }
    template <typename S>
    friend LaurentSeries scale(LaurentSeries a, const S &s)
    {
        for (auto &c : a.coeffs_) {
            c = c * s;
        }
        return a;
    }

    /// Product; valuation v_a + v_b, length min(len_a, len_b).
    friend LaurentSeries operator*(const LaurentSeries &a, const LaurentSeries &b)
    {
        const std::size_t len = std::min(a.coeffs_.size(), b.coeffs_.size());
        std::vector<R> out(len, R(0));
        for (std::size_t i = 0; i < len; ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t k = 0; i + k < len; ++k) {
                out[i + k] += a.coeffs_[i] * b.coeffs_[k];
            }
        }
        return LaurentSeries(a.val_ + b.val_, std::move(out));
    }

    /// Multiplicative inverse; the stored leading coefficient must be a unit.
    LaurentSeries inverse() const
    {
        if (coeffs_.empty()) {
            throw std::domain_error("inverse of a series with no known coefficients");
        }
        if (coeffs_[0] == 0) {
            throw std::domain_error("inverse of a series with zero leading coefficient");
        }
        const R inv0 = unit_inverse(coeffs_[0]);
        const std::size_t len = coeffs_.size();
        std::vector<R> out(len, R(0));
        out[0] = inv0;
        for (std::size_t k = 1; k < len; ++k) {
            R acc(0);
            for (std::size_t i = 1; i <= k; ++i) {
                if (coeffs_[i] == 0) {
                    continue;
                }
                acc += coeffs_[i] * out[k - i];
            }
            out[k] = -(acc * inv0);
        }
        return LaurentSeries(-val_, std::move(out));
    }

    LaurentSeries pow(unsigned e) const
    {
        if (e == 0) {
            return monomial(0, R(1), static_cast<long>(coeffs_.size()));
        }
        LaurentSeries r = *this;
        for (unsigned i = 1; i < e; ++i) {
            r = r * *this;
        }
        return r;
    }

    /// Equality of all coefficients both operands know.
    friend bool agree(const LaurentSeries &a, const LaurentSeries &b)
    {
        const long lo = std::min(a.val_, b.val_);
        const long hi = std::min(a.truncation(), b.truncation());
        for (long e = lo; e < hi; ++e) {
            if (!(a.coeff(e) == b.coeff(e))) {
                return false;
            }
        }
        return true;
    }

private:
    static LaurentSeries combine(const LaurentSeries &a, const LaurentSeries &b, bool subtract)
    {
        const long lo = std::min(a.val_, b.val_);
        const long hi = std::min(a.truncation(), b.truncation());
        if (hi <= lo) {
            return LaurentSeries(hi, {});
        }
        std::vector<R> out(static_cast<std::size_t>(hi - lo), R(0));
        for (long e = std::max(lo, a.val_); e < hi; ++e) {
            out[e - lo] = a.coeffs_[e - a.val_];
        }
        for (long e = std::max(lo, b.val_); e < hi; ++e) {
            if (subtract) {
                out[e - lo] -= b.coeffs_[e - b.val_];
            } else {
                out[e - lo] += b.coeffs_[e - b.val_];
            }
        }
        return LaurentSeries(lo, std::move(out));
    }

    long val_ = 0;
    std::vector<R> coeffs_;
};

using QSeries = LaurentSeries<BigRat>;
using ZSeries = LaurentSeries<BigInt>;

inline QSeries to_qseries(const ZSeries &s)
{
    std::vector<BigRat> v(s.coeffs().begin(), s.coeffs().end());
    return QSeries(s.valuation(), std::move(v));
}

/// Exact integer copy; throws if a coefficient is not integral.
inline ZSeries to_zseries(const QSeries &s)
{
    std::vector<BigInt> v;
    v.reserve(s.coeffs().size());
    for (const auto &c : s.coeffs()) {
        if (c.get_den() != 1) {
            throw std::domain_error("non-integral series coefficient " + to_string(c));
        }
        v.push_back(c.get_num());
    }
    return ZSeries(s.valuation(), std::move(v));
}

// ---------------------------------------------------------------------------
// Arithmetic functions

/// sigma_nu(n) = sum of d^nu over the positive divisors d of n.
inline BigInt sigma(unsigned nu, long n)
{
    if (n <= 0) {
        throw std::invalid_argument("sigma requires n >= 1");
    }
    BigInt s = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        s += pow_int(BigInt(d), nu);
        const long e = n / d;
        if (e != d) {
            s += pow_int(BigInt(e), nu);
        }
    }
    return s;
}

/// Number of positive divisors.
inline long num_divisors(long n)
{
    long count = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            count += (d * d == n) ? 1 : 2;
        }
    }
    return count;
}

/// Bernoulli number B_k for even k >= 2 (B_2 = 1/6, B_12 = -691/2730).
inline BigRat bernoulli(int k)
{
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("bernoulli: k must be even and >= 2");
    }
    static std::mutex mu;
    static std::vector<BigRat> memo{BigRat(1)}; // B_0, B_1, ...
    std::lock_guard lock(mu);
    for (int n = static_cast<int>(memo.size()); n <= k; ++n) {
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        BigRat acc = 0;
        for (int j = 0; j < n; ++j) {
            acc += BigRat(binomial(static_cast<unsigned long>(n + 1), static_cast<unsigned long>(j))) * memo[j];
        }
        memo.push_back(-acc / BigRat(n + 1));
    }
    return memo[k];
}

// ---------------------------------------------------------------------------
// Modular objects

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n + O(q^N).
inline QSeries eisenstein(int k, int trunc)
{
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("eisenstein: k must be even and >= 2");
    }
    if (trunc < 1) {
        throw std::invalid_argument("eisenstein: truncation must be >= 1");
    }
    const BigRat factor = -BigRat(2 * k) / bernoulli(k);
    std::vector<BigRat> c(static_cast<std::size_t>(trunc));
    c[0] = 1;
    for (int n = 1; n < trunc; ++n) {
        c[n] = factor * BigRat(sigma(static_cast<unsigned>(k - 1), n));
    }
    return QSeries(0, std::move(c));
}

inline QSeries eisenstein(int k, const PrecisionContext &ctx)
{
    return eisenstein(k, ctx.series_order);
}

namespace detail
{

// Integer E_4 and E_6 (both have integral expansions).
inline ZSeries eisenstein_int(int k, int trunc)
{
    return to_zseries(eisenstein(k, trunc));
}

// Integer Delta and j, grown on demand and shared by all callers.
class ModularCache
{
public:
    static ModularCache &instance()
    {
        static ModularCache c;
        return c;
    }

    /// Delta + O(q^trunc).
    ZSeries delta(int trunc)
    {
        std::lock_guard lock(mu_);
        if (delta_.truncation() < trunc) {
            const int n = static_cast<int>(std::max<long>(trunc, 2 * delta_.truncation()));
            const ZSeries e4 = eisenstein_int(4, n);
            const ZSeries e6 = eisenstein_int(6, n);
            ZSeries d = e4 * e4 * e4 - e6 * e6;
            std::vector<BigInt> c(d.coeffs().begin() + 1, d.coeffs().end());
            for (auto &x : c) {
                mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), 1728);
            }
            delta_ = ZSeries(1, std::move(c));
        }
        return delta_.truncated(trunc);
    }

    /// j + O(q^trunc).
    ZSeries j(int trunc)
    {
        {
            std::lock_guard lock(mu_);
            if (j_.truncation() >= trunc) {
                return j_.truncated(trunc);
            }
        }
        const int n = static_cast<int>(std::max<long>(trunc, 2 * j_cached_trunc()));
        const ZSeries d = delta(n + 2);
        const ZSeries e4 = eisenstein_int(4, n + 2);
        ZSeries jj = e4 * e4 * e4 * d.inverse();
        std::lock_guard lock(mu_);
        if (jj.truncation() > j_.truncation()) {
            j_ = std::move(jj);
        }
        return j_.truncated(trunc);
    }

private:
    long j_cached_trunc()
    {
        std::lock_guard lock(mu_);
        return j_.truncation();
    }

    std::mutex mu_;
    ZSeries delta_{1, {}};
    ZSeries j_{-1, {}};
};

} // namespace detail

/// Delta = (E_4^3 - E_6^2)/1728 = q - 24q^2 + ... + O(q^trunc).
inline QSeries delta(int trunc)
{
    return to_qseries(detail::ModularCache::instance().delta(trunc));
}

inline QSeries delta(const PrecisionContext &ctx)
{
    return delta(ctx.series_order);
}

/// j = E_4^3 / Delta = q^{-1} + 744 + 196884q + ... + O(q^trunc).
inline QSeries jfunction(int trunc)
{
    return to_qseries(detail::ModularCache::instance().j(trunc));
}

inline QSeries jfunction(const PrecisionContext &ctx)
{
    return jfunction(ctx.series_order);
}

/// Integer j + O(q^trunc), for callers that stay in Z.
inline ZSeries jfunction_int(int trunc)
{
    return detail::ModularCache::instance().j(trunc);
}

/// Ramanujan's tau(n), read from a Delta expansion.
inline BigInt tau(const QSeries &delta_series, long n)
{
    if (n < 1) {
        throw std::invalid_argument("tau requires n >= 1");
    }
    return delta_series.coeff(n).get_num();
}

/// tau(n) with Delta taken to the context's series order; n must be below it.
inline BigInt tau(long n, const PrecisionContext &ctx)
{
    if (n < 1) {
        throw std::invalid_argument("tau requires n >= 1");
    }
    if (n >= ctx.series_order) {
        throw TruncationError("tau(" + std::to_string(n) + ") is beyond the series order", n + 1);
    }
    return detail::ModularCache::instance().delta(ctx.series_order).coeff(n);
}

/// tau(n) with no order limit (Delta grown as needed).
inline BigInt tau(long n)
{
    if (n < 1) {
        throw std::invalid_argument("tau requires n >= 1");
    }
    return detail::ModularCache::instance().delta(static_cast<int>(n + 1)).coeff(n);
}

// ---------------------------------------------------------------------------
// Hecke operators

/// (f | T_k(m)) on a weight-k meromorphic q-expansion:
///   coefficient of q^n = sum_{d | (m,n), d > 0} d^{k-1} c_f(mn/d^2),
/// returned for exponents below out_trunc.
inline QSeries hecke_holomorphic(const QSeries &f, int k, long m, long out_trunc)
{
    if (m < 1) {
        throw std::invalid_argument("hecke: m must be >= 1");
    }
    const long v = f.valuation();
    const long out_val = v > 0 ? 1 : m * v;
    if (out_trunc <= out_val) {
        return QSeries(out_trunc, {});
    }
    const long need = out_trunc - 1 > 0 ? m * (out_trunc - 1) + 1 : 1;
    if (f.truncation() < need) {
        throw TruncationError("hecke: input truncation " + std::to_string(f.truncation()) + " too small", need);
    }
    std::vector<BigRat> out(static_cast<std::size_t>(out_trunc - out_val), BigRat(0));
    for (long n = out_val; n < out_trunc; ++n) {
        const long g = std::gcd(m, n); // gcd(m, 0) = m
        BigRat acc = 0;
        for (long d = 1; d <= g; ++d) {
            if (g % d != 0) {
                continue;
            }
            const long idx = m * n / (d * d);
            if (idx < v) {
                continue;
            }
            const BigRat c = f.coeff(idx);
            if (c == 0) {
                continue;
            }
            const BigInt dp = pow_int(BigInt(d), static_cast<unsigned long>(k - 1 >= 0 ? k - 1 : 1 - k));
            acc += k - 1 >= 0 ? BigRat(c * dp) : BigRat(c / dp);
        }
        out[static_cast<std::size_t>(n - out_val)] = acc;
    }
    return QSeries(out_val, std::move(out));
}

/// Horner evaluation of a polynomial at a series, in the exact series ring.
template <typename C, typename R>
LaurentSeries<R> evaluate_at_series(const Poly<C> &p, const LaurentSeries<R> &s)
{
    const long len = static_cast<long>(s.coeffs().size());
    if (p.is_zero()) {
        return LaurentSeries<R>(0, std::vector<R>(static_cast<std::size_t>(std::max(len, 1L)), R(0)));
    }
    if (p.degree() > 0 && len == 0) {
        throw TruncationError("evaluate: series has no known coefficients", s.valuation() + 1);
    }
    LaurentSeries<R> acc = LaurentSeries<R>::monomial(0, R(p.leading()), std::max(len, 1L));
    for (int i = p.degree() - 1; i >= 0; --i) {
        acc = acc * s;
        // a constant at or beyond the truncation is absorbed by the O-term
        if (acc.truncation() > 0) {
            acc = acc + LaurentSeries<R>::monomial(0, R(p.coeffs()[i]), acc.truncation());
        }
    }
    if (acc.truncation() <= std::min(0L, acc.valuation())) {
        throw TruncationError("evaluate: truncation underflow", s.truncation() + 1);
    }
    return acc;
}

} // namespace mockdelta
