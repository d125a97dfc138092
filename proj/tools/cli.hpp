#pragma once

// Command-line front end. run_cli parses arguments, runs one command and
// writes its result to `out`; diagnostics go to `err`.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <mockdelta/analytic.hpp>
#include <mockdelta/faber.hpp>
#include <mockdelta/heckepoly.hpp>
#include <mockdelta/numbers.hpp>
#include <mockdelta/poly.hpp>
#include <mockdelta/qseries.hpp>
#include <mockdelta/real.hpp>
#include <mockdelta/roots.hpp>
#include <mockdelta/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace mockdelta::cli
{

using Json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };

struct RunConfig {
    Format format = Format::Text;
    PrecisionContext ctx;
    bool series_order_given = false;
    std::string tol_text = "1e-30";
};

/// Raised for bad input after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail
{

inline BigRat parse_tol(const std::string &s)
{
    // accepts 1e-40, 1E-40, 0.001, 1/1000
    static const std::regex sci(R"(^\s*([0-9]+)(?:\.([0-9]*))?[eE]([-+]?[0-9]+)\s*$)");
    std::smatch mt;
    BigRat t;
    if (std::regex_match(s, mt, sci)) {
        const std::string frac = mt[2].matched ? mt[2].str() : "";
        const BigInt mant(mt[1].str() + frac);
        const long e = std::stol(mt[3].str()) - static_cast<long>(frac.size());
        t = e >= 0 ? BigRat(mant * pow_int(10, static_cast<unsigned long>(e)))
                   : make_rat(mant, pow_int(10, static_cast<unsigned long>(-e)));
    } else {
        try {
            t = parse_rat(s);
        } catch (const std::exception &) {
            throw UsageError("--tol: cannot parse '" + s + "'");
        }
    }
    if (t <= 0) {
        throw UsageError("--tol must be positive");
    }
    return t;
}

inline int parse_precision_env(const std::string &s)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != s.size() || v < 30 || v > 2000) {
        throw UsageError("MOCKDELTA_PRECISION must be an integer in [30, 2000], got '" + s + "'");
    }
    return v;
}

inline PrecisionContext with_order(const RunConfig &cfg, int need)
{
    PrecisionContext ctx = cfg.ctx;
    if (!cfg.series_order_given) {
        ctx.series_order = std::max(ctx.series_order, need);
    }
    return ctx;
}

inline Json coeff_array(const IntPoly &p)
{
    Json a = Json::array();
    for (const auto &c : p.coeffs()) {
        a.push_back(to_string(c));
    }
    return a;
}

inline Json coeff_array(const RatPoly &p)
{
    Json a = Json::array();
    for (const auto &c : p.coeffs()) {
        a.push_back(to_string(c));
    }
    return a;
}

/// Decimals of `value` not swamped by `tail`, capped by the working precision.
inline int decimals_for(const Real &value, const Real &tail, int work_digits)
{
    const double mag = value == 0 ? 0 : std::floor(log10_abs(value)) + 1;
    const int cap = std::max(0, work_digits - 5 - static_cast<int>(std::max(0.0, mag)));
    if (tail == 0) {
        return cap;
    }
    const int by_tail = static_cast<int>(std::floor(-log10_abs(tail))) - 1;
    return std::clamp(by_tail, 0, cap);
}

inline Json json_real(const Real &value, const Real &tail, int work_digits)
{
    const int dec = decimals_for(value, tail, work_digits);
    Json j;
    j["value"] = format_fixed(value, dec);
    j["digits"] = dec;
    j["tail_estimate"] = format_sci(tail, 3);
    return j;
}

inline Json json_real(const Real &value, int decimals)
{
    Json j;
    j["value"] = format_fixed(value, decimals);
    j["digits"] = decimals;
    return j;
}

inline void print_poly(std::ostream &out, Format f, int index, const IntPoly &p,
                       const std::optional<std::string> &text_override = std::nullopt)
{
    switch (f) {
    case Format::Json: {
        Json j;
        j["m"] = std::to_string(index);
        j["degree"] = p.degree();
        j["coefficients"] = coeff_array(p);
        j["poly"] = format_poly(p);
        if (text_override) {
            j["factored"] = *text_override;
        }
        out << j.dump(2) << "\n";
        break;
    }
    case Format::Csv:
        out << "power,coefficient\n";
        for (int i = 0; i <= p.degree(); ++i) {
            out << i << "," << to_string(p.coeffs()[i]) << "\n";
        }
        break;
    case Format::Text:
        out << (text_override ? *text_override : format_poly(p)) << "\n";
        break;
    }
}

inline std::string wrap_factor(const IntPoly &g)
{
    return "(" + format_poly(g) + ")";
}

// ---------------------------------------------------------------------------
// commands

inline int cmd_psi(const RunConfig &cfg, int m, std::ostream &out)
{
    if (m < 0) {
        throw UsageError("m must be >= 0");
    }
    print_poly(out, cfg.format, m, faber_psi(m));
    return 0;
}

inline int cmd_fpoly(const RunConfig &cfg, int m, bool split, std::ostream &out)
{
    if (m < 2) {
        throw UsageError("m must be >= 2");
    }
    const PrecisionContext ctx = with_order(cfg, m + 1);
    const IntPoly f = hecke_poly_f(m, ctx);
    std::optional<std::string> factored;
    if (split) {
        const IntPoly x = IntPoly::x();
        const IntPoly g = exact_divide(f, x * (x - IntPoly(1728)));
        factored = g.degree() == 0 ? "x * (x - 1728)" : "x * " + wrap_factor(g) + " * (x - 1728)";
    }
    print_poly(out, cfg.format, m, f, factored);
    return 0;
}

inline int cmd_roots(const RunConfig &cfg, int m, std::ostream &out, std::ostream &err)
{
    if (m < 2) {
        throw UsageError("m must be >= 2");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const PrecisionContext ctx = with_order(cfg, m + 1);
    const RootReport rep = certify_roots(m, ctx);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!rep.pass) {
        err << "root certification failed: " << rep.failure << "\n";
        return 1;
    }
    DigitsGuard g(ctx.work_digits);
    const int dec = std::min(ctx.work_digits - 10, mockdelta::detail::digits_for_tol(ctx.root_tol));
    auto ell = [](const RootRecord &r) { return r.ell ? std::to_string(*r.ell) : std::string(); };
    switch (cfg.format) {
    case Format::Csv:
        out << "m,l,x,theta,u\n";
        for (const auto &r : rep.roots) {
            out << m << "," << ell(r) << "," << format_fixed(r.x_approx, dec) << "," << format_fixed(r.theta, dec) << ","
                << format_fixed(r.u, 12) << "\n";
        }
        break;
    case Format::Json: {
        Json j;
        j["m"] = std::to_string(m);
        j["certified"] = true;
        j["root_tol"] = to_string(ctx.root_tol);
        Json rows = Json::array();
        for (const auto &r : rep.roots) {
            Json row;
            row["l"] = r.ell ? Json(std::to_string(*r.ell)) : Json(nullptr);
            row["x"] = json_real(r.x_approx, dec);
            row["x"]["tail_estimate"] = to_string(ctx.root_tol);
            row["theta"] = json_real(r.theta, dec);
            row["u"] = json_real(r.u, 12);
            rows.push_back(row);
        }
        j["roots"] = rows;
        out << j.dump(2) << "\n";
        break;
    }
    case Format::Text:
        out << "F_" << m << ": " << m << " simple roots in [0, 1728]\n";
        for (const auto &r : rep.roots) {
            out << std::setw(4) << (r.ell ? std::to_string(*r.ell) : "-") << "  x = " << format_fixed(r.x_approx, dec)
                << "  theta = " << format_fixed(r.theta, dec) << "  u = " << format_fixed(r.u, 12) << "\n";
        }
        break;
    }
    err << "roots " << m << ": " << std::fixed << std::setprecision(2) << secs << " s\n";
    return 0;
}

inline int cmd_coeff(const RunConfig &cfg, long n, std::ostream &out)
{
    if (n < -1) {
        throw UsageError("a_Delta(n) vanishes for n < -1");
    }
    if (n <= 0) {
        const BigRat v = n == -1 ? mock_a_minus1() : mock_a0();
        if (cfg.format == Format::Json) {
            Json j;
            j["n"] = std::to_string(n);
            j["exact"] = to_string(v);
            out << j.dump(2) << "\n";
        } else {
            out << to_string(v) << "\n";
        }
        return 0;
    }
    const SeriesEstimate a = a_delta(n, cfg.ctx);
    DigitsGuard g(cfg.ctx.work_digits);
    if (cfg.format == Format::Json) {
        Json j;
        j["n"] = std::to_string(n);
        j["a_delta"] = json_real(a.value, a.tail, cfg.ctx.work_digits);
        j["c_used"] = std::to_string(a.terms);
        j["c_max"] = std::to_string(a.limit);
        out << j.dump(2) << "\n";
    } else {
        out << format_fixed(a.value, decimals_for(a.value, a.tail, cfg.ctx.work_digits)) << "\n"
            << "tail_estimate " << format_sci(a.tail, 3) << "\n"
            << "c_used " << a.terms << " of " << a.limit << "\n";
    }
    return 0;
}

inline int cmd_beta(const RunConfig &cfg, std::ostream &out)
{
    const SeriesEstimate b = beta_delta(cfg.ctx);
    DigitsGuard g(cfg.ctx.work_digits);
    if (cfg.format == Format::Json) {
        Json j;
        j["beta"] = json_real(b.value, b.tail, cfg.ctx.work_digits);
        j["c_used"] = std::to_string(b.terms);
        j["c_max"] = std::to_string(b.limit);
        out << j.dump(2) << "\n";
    } else {
        out << format_fixed(b.value, decimals_for(b.value, b.tail, cfg.ctx.work_digits)) << "\n"
            << "tail_estimate " << format_sci(b.tail, 3) << "\n"
            << "c_used " << b.terms << " of " << b.limit << "\n";
    }
    return 0;
}

inline int cmd_bound_check(const RunConfig &cfg, long m, int grid, std::ostream &out)
{
    if (m < 3) {
        throw UsageError("the bound requires m >= 3");
    }
    if (grid < 1) {
        throw UsageError("--grid must be >= 1");
    }
    const auto reps = check_f_bound(m, grid, cfg.ctx);
    DigitsGuard g(cfg.ctx.work_digits);
    const Real fact = to_real(factorial(11));
    int fails = 0;
    for (const auto &r : reps) {
        fails += r.pass ? 0 : 1;
    }
    switch (cfg.format) {
    case Format::Json: {
        Json j;
        j["m"] = std::to_string(m);
        j["budget"] = "39916800";
        Json rows = Json::array();
        for (const auto &r : reps) {
            Json row;
            row["theta"] = json_real(r.theta, 30);
            row["lhs"] = json_real(r.lhs, 12);
            row["lhs"]["tail_estimate"] = format_sci(r.truncation_error, 3);
            row["imag_residual"] = format_sci(r.imag_residual, 3);
            row["accuracy_digits"] = r.digits;
            row["pass"] = r.pass;
            rows.push_back(row);
        }
        j["reports"] = rows;
        j["all_pass"] = fails == 0;
        out << j.dump(2) << "\n";
        break;
    }
    case Format::Csv:
        out << "m,theta,lhs_over_11fact,truncation_error,pass\n";
        for (const auto &r : reps) {
            out << m << "," << format_fixed(r.theta, 30) << "," << format_fixed(r.lhs / fact, 20) << ","
                << format_sci(r.truncation_error, 3) << "," << (r.pass ? "1" : "0") << "\n";
        }
        break;
    case Format::Text:
        for (const auto &r : reps) {
            out << "theta " << format_fixed(r.theta, 15) << "  lhs/11! " << format_fixed(r.lhs / fact, 15) << "  err "
                << format_sci(r.truncation_error, 2) << "  " << (r.pass ? "pass" : "FAIL") << "\n";
        }
        out << (fails == 0 ? "all " + std::to_string(reps.size()) + " points pass"
                           : std::to_string(fails) + " of " + std::to_string(reps.size()) + " points fail")
            << "\n";
        break;
    }
    return fails == 0 ? 0 : 1;
}

inline int cmd_equidist(const RunConfig &cfg, int m, std::ostream &out)
{
    if (m < 2) {
        throw UsageError("m must be >= 2");
    }
    const EquidistReport e = equidistribution(m, with_order(cfg, m + 1));
    DigitsGuard g(cfg.ctx.work_digits);
    switch (cfg.format) {
    case Format::Json: {
        Json j;
        j["m"] = std::to_string(m);
        Json pos = Json::array();
        for (const auto &u : e.positions) {
            pos.push_back(format_fixed(u, 20));
        }
        j["positions"] = pos;
        j["star_discrepancy"] = json_real(e.star_discrepancy, 20);
        out << j.dump(2) << "\n";
        break;
    }
    case Format::Csv:
        out << "i,u\n";
        for (std::size_t i = 0; i < e.positions.size(); ++i) {
            out << i + 1 << "," << format_fixed(e.positions[i], 20) << "\n";
        }
        break;
    case Format::Text:
        for (const auto &u : e.positions) {
            out << format_fixed(u, 20) << "\n";
        }
        out << "star discrepancy " << format_fixed(e.star_discrepancy, 20) << "\n";
        break;
    }
    return 0;
}

/// Products of E<k> and Delta factors, each optionally raised to a power: "E4^2*E6", "Delta*E4".
inline std::pair<QSeries, int> parse_form(const std::string &text, int trunc)
{
    static const std::regex factor(R"(^(E(\d+)|Delta)(?:\^(\d+))?$)");
    QSeries f = QSeries::monomial(0, BigRat(1), trunc);
    int weight = 0;
    std::stringstream ss(text);
    std::string item;
    bool any = false;
    while (std::getline(ss, item, '*')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        std::smatch mt;
        if (!std::regex_match(item, mt, factor)) {
            throw UsageError("cannot parse form factor '" + item + "' (use E<k>, Delta, optional ^p, joined by *)");
        }
        const int p = mt[3].matched ? std::stoi(mt[3].str()) : 1;
        QSeries base;
        int k;
        if (mt[1].str() == "Delta") {
            base = delta(trunc);
            k = 12;
        } else {
            k = std::stoi(mt[2].str());
            if (k < 4 || k % 2 != 0) {
                throw UsageError("E_k requires even k >= 4");
            }
            base = eisenstein(k, trunc);
        }
        for (int i = 0; i < p; ++i) {
            f = f * base;
        }
        weight += k * p;
        any = true;
    }
    if (!any) {
        throw UsageError("empty form");
    }
    return {f, weight};
}

inline int cmd_divisor_poly(const RunConfig &cfg, const std::string &form, std::ostream &out)
{
    auto [f, k] = parse_form(form, cfg.ctx.series_order);
    const RatPoly p = divisor_polynomial(f, k);
    const IntPoly ip = primitive_integer_multiple(p);
    int distinct = 0, in_range = 0;
    if (ip.degree() > 0) {
        const IntPoly sq = exact_divide(ip, gcd(ip, ip.derivative()));
        const SturmChain chain(sq);
        distinct = chain.count_all();
        in_range = chain.count(BigRat(0), BigRat(1728)) + (sign_at(sq, BigRat(0)) == 0 ? 1 : 0);
    }
    if (cfg.format == Format::Json) {
        Json j;
        j["form"] = form;
        j["weight"] = k;
        j["coefficients"] = coeff_array(p);
        j["poly"] = format_poly(p);
        j["distinct_real_roots"] = distinct;
        j["distinct_roots_in_0_1728"] = in_range;
        out << j.dump(2) << "\n";
    } else {
        out << format_poly(p) << "\n"
            << "weight " << k << ", distinct real roots " << distinct << ", in [0, 1728] " << in_range << "\n";
    }
    return 0;
}

inline int cmd_verify(const RunConfig &cfg, const std::string &level, bool corrupt, int only, std::ostream &out)
{
    VerifyOptions o;
    if (level == "quick") {
        o.level = VerifyLevel::Quick;
    } else if (level == "full") {
        o.level = VerifyLevel::Full;
    } else {
        throw UsageError("--level must be quick or full");
    }
    o.ctx = cfg.ctx;
    o.corrupt_constant = corrupt;
    std::vector<CriterionResult> results;
    if (only > 0) {
        if (only > criterion_count()) {
            throw UsageError("no criterion " + std::to_string(only));
        }
        results.push_back(run_criterion(only, o));
    } else {
        results = run_criteria(o);
    }
    int fails = 0, passes = 0, skipped = 0;
    for (const auto &r : results) {
        if (r.skipped) {
            ++skipped;
        } else if (r.pass) {
            ++passes;
        } else {
            ++fails;
        }
    }
    if (cfg.format == Format::Json) {
        Json j = Json::array();
        for (const auto &r : results) {
            Json row;
            row["criterion"] = r.id;
            row["name"] = r.name;
            row["status"] = r.skipped ? "skip" : r.pass ? "pass" : "fail";
            row["detail"] = r.detail;
            j.push_back(row);
        }
        out << j.dump(2) << "\n";
    } else {
        for (const auto &r : results) {
            out << format_result(r) << "\n";
        }
        out << passes << " pass, " << fails << " fail, " << skipped << " skipped\n";
    }
    return fails == 0 ? 0 : 1;
}

} // namespace detail

inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Hecke polynomials of the weight -10 mock modular form M_Delta, their roots, and the "
                 "analytic bounds behind them"};
    app.fallthrough();
    app.require_subcommand(1);

    RunConfig cfg;
    bool json = false, csv = false;
    int series_order = cfg.ctx.series_order;
    long cmax = cfg.ctx.c_max;
    int precision = cfg.ctx.work_digits;
    app.add_flag("--json", json, "JSON output");
    app.add_flag("--csv", csv, "CSV output");
    auto *so = app.add_option("--series-order", series_order, "q-series truncation order N")
                   ->check(CLI::PositiveNumber)
                   ->capture_default_str();
    app.add_option("--cmax", cmax, "largest modulus c in Kloosterman-Bessel sums")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto *prec = app.add_option("--precision", precision,
                                "working precision in decimal digits (default from MOCKDELTA_PRECISION)")
                     ->check(CLI::Range(30, 2000))
                     ->capture_default_str();
    app.add_option("--tol", cfg.tol_text, "root refinement tolerance")->capture_default_str();

    int m = 0;
    long n = 0;
    int grid = 50;
    bool split = false, corrupt = false;
    int only = 0;
    std::string level = "quick", form;

    auto *psi = app.add_subcommand("psi", "Faber polynomial psi_m");
    psi->add_option("m", m, "index m >= 0")->required();
    auto *fpoly = app.add_subcommand("fpoly", "Hecke polynomial F_m");
    fpoly->add_option("m", m, "index m >= 2")->required();
    fpoly->add_flag("--split-endpoints", split, "factor out x and x - 1728");
    auto *roots = app.add_subcommand("roots", "certified roots of F_m with angles and normalized positions");
    roots->add_option("m", m, "index m >= 2")->required();
    auto *coeff = app.add_subcommand("coeff", "coefficient a_Delta(n) of M_Delta");
    coeff->add_option("n", n, "index n >= -1")->required();
    auto *beta = app.add_subcommand("beta", "the constant beta_Delta");
    auto *bound = app.add_subcommand("bound-check", "the bound |... - f_m(theta)| < 11! on a theta grid");
    bound->add_option("m", m, "index m >= 3")->required();
    bound->add_option("--grid", grid, "number of grid points")->capture_default_str();
    auto *equi = app.add_subcommand("equidist", "normalized root positions and star discrepancy");
    equi->add_option("m", m, "index m >= 2")->required();
    auto *divp = app.add_subcommand("divisor-poly", "divisor polynomial of a product of E_k and Delta");
    divp->add_option("form", form, "e.g. E12, E4^2*E6, Delta*E4")->required();
    auto *ver = app.add_subcommand("verify", "run the acceptance criteria");
    ver->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
    ver->add_flag("--corrupt-constant", corrupt, "perturb a constant of the F_m formula (negative control)");
    ver->add_option("--criterion", only, "run a single criterion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    try {
        if (json && csv) {
            throw UsageError("--json and --csv are exclusive");
        }
        cfg.format = json ? Format::Json : csv ? Format::Csv : Format::Text;
        cfg.ctx.series_order = series_order;
        cfg.series_order_given = so->count() > 0;
        cfg.ctx.c_max = cmax;
        if (prec->count() == 0) {
            if (const char *env = std::getenv("MOCKDELTA_PRECISION"); env && *env) {
                precision = detail::parse_precision_env(env);
            }
        }
        cfg.ctx.work_digits = precision;
        cfg.ctx.root_tol = detail::parse_tol(cfg.tol_text);
        cfg.ctx.validate();

        if (*psi) {
            return detail::cmd_psi(cfg, m, out);
        }
        if (*fpoly) {
            return detail::cmd_fpoly(cfg, m, split, out);
        }
        if (*roots) {
            return detail::cmd_roots(cfg, m, out, err);
        }
        if (*coeff) {
            return detail::cmd_coeff(cfg, n, out);
        }
        if (*beta) {
            return detail::cmd_beta(cfg, out);
        }
        if (*bound) {
            return detail::cmd_bound_check(cfg, m, grid, out);
        }
        if (*equi) {
            return detail::cmd_equidist(cfg, m, out);
        }
        if (*divp) {
            return detail::cmd_divisor_poly(cfg, form, out);
        }
        if (*ver) {
            return detail::cmd_verify(cfg, level, corrupt, only, out);
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const TruncationError &e) {
        err << "error: " << e.what() << " (raise --series-order to at least " << e.required() << ")\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace mockdelta::cli
