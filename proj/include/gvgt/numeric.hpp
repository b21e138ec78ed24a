#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvgt/util.hpp"

namespace gvgt {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

/// Exact rational with int64 parts, always normalized (gcd 1, den > 0).
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Ratio() = default;

    Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Ratio: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    long double to_long_double() const {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }
    bigrat to_bigrat() const { return bigrat(num, den); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline bool operator==(const Ratio& a, const Ratio& b) {
    return a.num == b.num && a.den == b.den;
}
inline bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }

/// Parses "num/den" or a bare integer.
inline Ratio parse_ratio(const std::string& s) {
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Ratio(std::stoll(s), 1);
        return Ratio(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("parse_ratio: malformed rational '" + s + "'");
    }
}

/// Log-space binomial tables for one field order q: ln C(a, b) for
/// a <= max_n via cumulative log-factorials, plus ln(1 - 1/q) and ln(1/q).
///
/// Accumulation runs in long double so that every ln C(a, b) carries an
/// absolute error below 1e-9.
class LogPmfTable {
public:
    LogPmfTable(int max_n, std::uint32_t q) : max_n_(max_n), q_(q) {
        if (max_n < 0) throw std::invalid_argument("LogPmfTable: negative size");
        if (q < 2) throw std::invalid_argument("LogPmfTable: field order must be >= 2");
        lf_.resize(static_cast<std::size_t>(max_n) + 1);
        lf_[0] = 0.0L;
        for (int i = 1; i <= max_n; ++i) lf_[i] = lf_[i - 1] + std::log(static_cast<long double>(i));
        ln_success_ = std::log(static_cast<long double>(q - 1)) -
                      std::log(static_cast<long double>(q));
        ln_fail_ = -std::log(static_cast<long double>(q));
    }

    int max_n() const { return max_n_; }
    std::uint32_t q() const { return q_; }

    double ln_choose(int a, int b) const {
        if (a < 0 || b < 0 || b > a || a > max_n_) {
            throw std::out_of_range("LogPmfTable::ln_choose: arguments out of range");
        }
        return static_cast<double>(lf_[a] - lf_[b] - lf_[a - b]);
    }

    /// ln Pr[one coordinate is nonzero] = ln(1 - 1/q).
    double ln_success() const { return static_cast<double>(ln_success_); }
    /// ln Pr[one coordinate is zero] = ln(1/q).
    double ln_fail() const { return static_cast<double>(ln_fail_); }

private:
    int max_n_;
    std::uint32_t q_;
    std::vector<long double> lf_;
    long double ln_success_;
    long double ln_fail_;
};

namespace detail {

/// Largest integer strictly below threshold, i.e. ceil(threshold) - 1.
inline std::int64_t strict_below(const Ratio& threshold) {
    return ceil_div(threshold.num, threshold.den) - 1;
}

/// log(sum of exp(terms)) accumulated against the running maximum.
inline double logsumexp(const std::vector<double>& terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    double mx = terms[0];
    for (double t : terms) mx = std::max(mx, t);
    if (!std::isfinite(mx)) return mx;
    long double acc = 0.0L;
    for (double t : terms) acc += std::exp(static_cast<long double>(t - mx));
    return mx + static_cast<double>(std::log(acc));
}

}  // namespace detail

/// Pr[X < threshold] for X ~ Binomial(trials, p), summed in log space.
/// Uses the caller's ln C table, which must cover `trials`.
inline double binom_tail_lt(std::int64_t trials, Ratio p, Ratio threshold,
                            const LogPmfTable& table) {
    if (trials < 0) throw std::invalid_argument("binom_tail_lt: negative trial count");
    if (p.num < 0 || p.num > p.den) throw std::invalid_argument("binom_tail_lt: p outside [0, 1]");
    if (trials > table.max_n()) throw std::out_of_range("binom_tail_lt: table too small");

    std::int64_t w_max = detail::strict_below(threshold);
    if (w_max < 0) return 0.0;
    if (w_max >= trials) return 1.0;
    if (p.num == 0) return 1.0;       // X = 0 surely, and 0 <= w_max
    if (p.num == p.den) return 0.0;   // X = trials surely, and w_max < trials

    const double lp = std::log(static_cast<double>(p.num)) - std::log(static_cast<double>(p.den));
    const double lq = std::log(static_cast<double>(p.den - p.num)) -
                      std::log(static_cast<double>(p.den));
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(w_max) + 1);
    for (std::int64_t w = 0; w <= w_max; ++w) {
        terms.push_back(table.ln_choose(static_cast<int>(trials), static_cast<int>(w)) +
                        static_cast<double>(w) * lp + static_cast<double>(trials - w) * lq);
    }
    double r = std::exp(detail::logsumexp(terms));
    return r > 1.0 ? 1.0 : r;
}

/// Convenience overload that builds a throwaway table.
inline double binom_tail_lt(std::int64_t trials, Ratio p, Ratio threshold) {
    LogPmfTable table(static_cast<int>(trials), 2);
    return binom_tail_lt(trials, p, threshold, table);
}

/// Exact C(n, k) by iterated multiply/divide (each division is exact).
inline bigint binom_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    bigint r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline bigint bigint_pow(bigint base, std::uint64_t e) {
    bigint r = 1;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// Exact Pr[X < threshold] for X ~ Binomial(trials, p).
inline bigrat binom_tail_lt_exact(std::int64_t trials, Ratio p, Ratio threshold) {
    if (trials < 0) throw std::invalid_argument("binom_tail_lt_exact: negative trial count");
    if (p.num < 0 || p.num > p.den) {
        throw std::invalid_argument("binom_tail_lt_exact: p outside [0, 1]");
    }
    std::int64_t w_max = detail::strict_below(threshold);
    if (w_max < 0) return 0;
    if (w_max >= trials) return 1;
    if (p.num == 0) return 1;
    if (p.num == p.den) return 0;

    // sum_{w <= w_max} C(trials, w) num^w (den-num)^(trials-w)  over  den^trials
    bigint acc = 0;
    bigint term = bigint_pow(bigint(p.den - p.num), static_cast<std::uint64_t>(trials));
    for (std::int64_t w = 0;; ++w) {
        acc += binom_choose(trials, w) * term;
        if (w == w_max) break;
        term *= p.num;
        term /= p.den - p.num;  // exact: term holds (den-num)^(trials-w) * num^w
    }
    return bigrat(acc) / bigrat(bigint_pow(bigint(p.den), static_cast<std::uint64_t>(trials)));
}

}  // namespace gvgt
