#pragma once

// Faber polynomials psi_m of the j-function and divisor polynomials of
// level-one modular forms.

#include <mockdelta/numbers.hpp>
#include <mockdelta/poly.hpp>
#include <mockdelta/qseries.hpp>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mockdelta
{

/// psi_0 .. psi_M built by greedy principal-part reduction against powers of j.
///
/// psi_m is the unique monic integer polynomial with psi_m(j) = q^{-m} + O(q).
class FaberTable
{
public:
    explicit FaberTable(int max_m)
    {
        if (max_m < 0) {
            throw std::invalid_argument("FaberTable: max_m must be >= 0");
        }
        build(max_m);
    }

    int max_m() const
    {
        return static_cast<int>(psi_.size()) - 1;
    }

    const IntPoly &psi(int m) const
    {
        if (m < 0 || m > max_m()) {
            throw std::out_of_range("psi_" + std::to_string(m) + " not in table");
        }
        return psi_[m];
    }

private:
    void build(int max_m)
    {
        // principal[e][t] = coefficient of q^{-t} in j^e, 0 <= t <= e.
        // Coefficients of j^e at exponent -t only involve j up to q^{e-1}.
        const ZSeries jser = jfunction_int(max_m + 2);
        std::vector<std::vector<BigInt>> principal(max_m + 1);
        ZSeries power = ZSeries::monomial(0, BigInt(1), static_cast<long>(jser.coeffs().size()));
        for (int e = 0; e <= max_m; ++e) {
            if (e > 0) {
                power = power * jser;
            }
            principal[e].resize(e + 1);
            for (int t = 0; t <= e; ++t) {
                principal[e][t] = power.coeff(-t);
            }
        }

        psi_.reserve(max_m + 1);
        for (int m = 0; m <= max_m; ++m) {
            std::vector<BigInt> p(m + 1, BigInt(0));
            p[m] = 1;
            std::vector<BigInt> residual = principal[m];
            for (int t = m - 1; t >= 0; --t) {
                const BigInt c = residual[t];
                if (c == 0) {
                    continue;
                }
                p[t] -= c;
                for (int s = 0; s <= t; ++s) {
                    residual[s] -= c * principal[t][s];
                }
            }
            psi_.emplace_back(std::move(p));
        }
    }

    std::vector<IntPoly> psi_;
};

namespace detail
{

inline const FaberTable &shared_faber_table(int need)
{
    static std::mutex mu;
    static std::vector<std::unique_ptr<FaberTable>> tables; // old tables stay alive for readers
    std::lock_guard lock(mu);
    if (tables.empty() || tables.back()->max_m() < need) {
        const int size = std::max(need, tables.empty() ? 16 : 2 * tables.back()->max_m());
        tables.push_back(std::make_unique<FaberTable>(size));
    }
    return *tables.back();
}

} // namespace detail

/// psi_m(x); monic of degree m with integer coefficients.
inline IntPoly faber_psi(int m)
{
    if (m < 0) {
        throw std::invalid_argument("faber_psi: m must be >= 0");
    }
    return detail::shared_faber_table(m).psi(m);
}

/// psi_0 .. psi_{m_max} read off the generating function
///   sum psi_m(x) q^m = E_4^2 E_6 / Delta * 1/(j - x),
/// computed as a q-series with polynomial coefficients.
inline std::vector<IntPoly> faber_via_generating(int m_max, const PrecisionContext &ctx)
{
    if (m_max < 0) {
        throw std::invalid_argument("faber_via_generating: m_max must be >= 0");
    }
    if (ctx.series_order <= m_max) {
        throw TruncationError("faber_via_generating: series order too small", m_max + 1);
    }
    using PSeries = LaurentSeries<IntPoly>;
    const int n = m_max + 2;

    const ZSeries e4 = detail::eisenstein_int(4, n + 2);
    const ZSeries e6 = detail::eisenstein_int(6, n + 2);
    const ZSeries lead = e4 * e4 * e6 * detail::ModularCache::instance().delta(n + 2).inverse();
    const ZSeries jser = jfunction_int(n);

    std::vector<IntPoly> lead_c(lead.coeffs().begin(), lead.coeffs().end());
    const PSeries lead_p(lead.valuation(), std::move(lead_c));

    // j - x: the constant coefficient picks up -x.
    std::vector<IntPoly> jx;
    jx.reserve(jser.coeffs().size());
    for (long e = jser.valuation(); e < jser.truncation(); ++e) {
        IntPoly c(jser.coeff(e));
        if (e == 0) {
            c -= IntPoly::x();
        }
        jx.push_back(std::move(c));
    }
    const PSeries gen = lead_p * PSeries(jser.valuation(), std::move(jx)).inverse();

    std::vector<IntPoly> out;
    out.reserve(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        out.push_back(gen.coeff(m));
    }
    return out;
}

/// m * (j_1 | T_0(m)) with j_1 = j - 744, from j taken to the context's series order.
inline QSeries hecke_image_j1(int m, long out_trunc, const PrecisionContext &ctx)
{
    if (m < 1) {
        throw std::invalid_argument("hecke_image_j1: m must be >= 1");
    }
    QSeries j1 = jfunction(ctx.series_order) - QSeries::monomial(0, BigRat(744), ctx.series_order);
    return scale(hecke_holomorphic(j1, 0, m, out_trunc), BigRat(m));
}

// ---------------------------------------------------------------------------
// Divisor polynomials

namespace detail
{

inline void require_even(int k)
{
    if (k % 2 != 0) {
        throw std::invalid_argument("weight must be even, got " + std::to_string(k));
    }
}

inline int mod12(int k)
{
    return ((k % 12) + 12) % 12;
}

} // namespace detail

/// Exponent m(k) of Delta in the divisor-polynomial normalization.
inline int m_exponent(int k)
{
    detail::require_even(k);
    if (k < 0) {
        throw std::invalid_argument("m_exponent: weight must be >= 0");
    }
    return detail::mod12(k) == 2 ? k / 12 - 1 : k / 12;
}

/// The product of E_4, E_6 powers carrying the forced zeros at i and omega.
inline QSeries tilde_e(int k, int trunc)
{
    detail::require_even(k);
    const QSeries one = QSeries::monomial(0, BigRat(1), trunc);
    switch (detail::mod12(k)) {
    case 0:
        return one;
    case 2:
        return eisenstein(4, trunc) * eisenstein(4, trunc) * eisenstein(6, trunc);
    case 4:
        return eisenstein(4, trunc);
    case 6:
        return eisenstein(6, trunc);
    case 8:
        return eisenstein(4, trunc) * eisenstein(4, trunc);
    default: // 10
        return eisenstein(4, trunc) * eisenstein(6, trunc);
    }
}

/// h_k(x): the factors x (j(omega) = 0) and x - 1728 (j(i) = 1728) forced by weight.
inline IntPoly h_k(int k)
{
    detail::require_even(k);
    const IntPoly x = IntPoly::x();
    const IntPoly x1728 = x - IntPoly(1728);
    switch (detail::mod12(k)) {
    case 0:
        return IntPoly(1);
    case 2:
        return x * x * x1728;
    case 4:
        return x;
    case 6:
        return x1728;
    case 8:
        return x * x;
    default:
        return x * x1728;
    }
}

/// F(f; x) = h_k(x) * Ftilde(f; x), where Ftilde(f; j) = f / (Delta^{m(k)} Etilde_k).
///
/// Throws if f / (Delta^{m(k)} Etilde_k) is not a polynomial in j on the known
/// coefficients, which means f is not a holomorphic form of weight k.
inline RatPoly divisor_polynomial(const QSeries &f, int k)
{
    detail::require_even(k);
    const int mk = m_exponent(k);
    if (mk < 0) {
        throw std::invalid_argument("divisor_polynomial: weight " + std::to_string(k) + " has no cusp-form factor");
    }
    const long trunc = f.truncation();
    if (trunc <= f.valuation() || trunc < 1) {
        throw TruncationError("divisor_polynomial: series carries no coefficients", 1);
    }
    const QSeries tilde = tilde_e(k, static_cast<int>(trunc + mk + 1));
    const QSeries dm = delta(static_cast<int>(trunc + mk + 1)).pow(static_cast<unsigned>(mk));
    QSeries g = f * (mk > 0 ? dm * tilde : tilde).inverse();

    const long deg = -std::min(0L, g.order());
    if (g.truncation() < 2) {
        throw TruncationError("divisor_polynomial: too few coefficients to check holomorphy", mk + deg + 2);
    }
    const QSeries jser = jfunction(static_cast<int>(g.truncation() + deg + 1));

    std::vector<QSeries> jpow;
    jpow.push_back(QSeries::monomial(0, BigRat(1), jser.truncation() + deg));
    for (long e = 1; e <= deg; ++e) {
        jpow.push_back(jpow.back() * jser);
    }

    std::vector<BigRat> ft(static_cast<std::size_t>(deg + 1), BigRat(0));
    for (long e = deg; e >= 0; --e) {
        const BigRat c = g.coeff(-e);
        if (c == 0) {
            continue;
        }
        ft[e] = c;
        g = g - scale(jpow[e], c);
    }
    for (long e = g.valuation(); e < g.truncation(); ++e) {
        if (g.coeff(e) != 0) {
            throw std::domain_error("divisor_polynomial: nonzero residual at q^" + std::to_string(e) +
                                    "; input is not a holomorphic form of weight " + std::to_string(k));
        }
    }
    return to_rat(h_k(k)) * RatPoly(std::move(ft));
}

} // namespace mockdelta
