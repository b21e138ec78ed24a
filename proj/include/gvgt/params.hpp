#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "gvgt/field.hpp"
#include "gvgt/numeric.hpp"
#include "gvgt/util.hpp"

namespace gvgt {

using bigfloat = boost::multiprecision::cpp_bin_float_100;

namespace detail {

template <typename F>
F log_of(std::int64_t x) {
    using std::log;
    return log(F(x));
}

/// q-ary entropy of p = num/den, evaluated in floating type F from
/// integer logarithms only.
template <typename F>
F entropy_impl(std::uint32_t q, std::int64_t num, std::int64_t den) {
    if (num == 0) return F(0);
    F lq = log_of<F>(q);
    F left = F(num) * (log_of<F>(q - 1) + log_of<F>(den) - log_of<F>(num));
    F right = num == den ? F(0)
                         : F(den - num) * (log_of<F>(den) - log_of<F>(den - num));
    return (left + right) / (F(den) * lq);
}

/// m * (1 - H_q(delta)): the rate bound that k is compared against.
template <typename F>
F gv_rhs(std::uint32_t q, const Ratio& delta, std::uint32_t m) {
    return F(m) * (F(1) - entropy_impl<F>(q, delta.num, delta.den));
}

/// Relative margin below which long double verdicts are re-derived in
/// 100-digit arithmetic.
constexpr long double kPrecisionMargin = 1e-9L;

}  // namespace detail

/// q-ary entropy H_q(p) = p log_q((q-1)/p) + (1-p) log_q(1/(1-p)).
/// Defined for 0 <= p <= 1 with H_q(0) = 0 and H_q(1) = log_q(q-1).
inline double entropy_q(std::uint32_t q, Ratio p) {
    if (q < 2) throw std::invalid_argument("entropy_q: base must be >= 2");
    if (p.num < 0 || p.num > p.den) throw std::invalid_argument("entropy_q: p outside [0, 1]");
    return static_cast<double>(detail::entropy_impl<long double>(q, p.num, p.den));
}

/// Parameters of a q-ary linear code with m x k generator matrix and
/// relative distance target delta.
///
/// The constructor checks ranges only; whether the rate actually clears the
/// entropy bound is a separate query (satisfies_rate_bound), because several
/// useful fixtures, e.g. short Reed-Solomon codes, are valid codes without it.
struct CodeParams {
    std::uint32_t q;
    std::uint32_t m;
    std::uint32_t k;
    Ratio delta;

    CodeParams(std::uint32_t q_, std::uint32_t m_, std::uint32_t k_, Ratio delta_)
        : q(q_), m(m_), k(k_), delta(delta_) {
        if (!is_prime(q)) throw std::invalid_argument("CodeParams: q must be prime");
        if (k < 1 || m < k) throw std::invalid_argument("CodeParams: need m >= k >= 1");
        if (delta.num < 0) throw std::invalid_argument("CodeParams: delta must be >= 0");
        // delta <= 1 - 1/q, i.e. delta*q <= q - 1
        if (delta.num * static_cast<std::int64_t>(q) >
            static_cast<std::int64_t>(q - 1) * delta.den) {
            throw std::invalid_argument("CodeParams: delta must be <= 1 - 1/q");
        }
    }

    /// True when k <= m * (1 - H_q(delta)); verdicts within relative margin
    /// 1e-9 of the boundary are recomputed at 100-digit precision.
    bool satisfies_rate_bound() const {
        long double rhs = detail::gv_rhs<long double>(q, delta, m);
        long double lhs = static_cast<long double>(k);
        if (std::fabs(lhs - rhs) < detail::kPrecisionMargin * std::fabs(rhs)) {
            bigfloat rhs_hp = detail::gv_rhs<bigfloat>(q, delta, m);
            return bigfloat(k) <= rhs_hp;
        }
        return lhs <= rhs;
    }

    /// Required minimum distance, ceil(delta * m).
    std::int64_t distance_requirement() const {
        return ceil_div(delta.num * static_cast<std::int64_t>(m), delta.den);
    }

    /// q^k, saturating at `cap`.
    std::uint64_t message_count(std::uint64_t cap = UINT64_MAX) const {
        std::uint64_t total = 1;
        for (std::uint32_t i = 0; i < k; ++i) total = sat_mul(total, q, cap);
        return total;
    }
};

/// ln of the per-message failure bound q^(-m (1 - H_q(delta))), natural log.
inline double bad_event_log_bound(const CodeParams& p) {
    long double rhs = detail::gv_rhs<long double>(p.q, p.delta, p.m);
    return static_cast<double>(-rhs * std::log(static_cast<long double>(p.q)));
}

/// Smallest m >= k with k <= m * (1 - H_q(delta)); throws when delta leaves
/// no rate at all (H_q(delta) >= 1).
inline std::uint32_t minimal_code_length(std::uint32_t q, std::uint32_t k, Ratio delta) {
    long double h = detail::entropy_impl<long double>(q, delta.num, delta.den);
    if (h >= 1.0L - 1e-15L) {
        bigfloat hp = detail::entropy_impl<bigfloat>(q, delta.num, delta.den);
        if (hp >= 1) {
            throw std::invalid_argument("minimal_code_length: delta admits no positive rate");
        }
    }
    long double guess = static_cast<long double>(k) / (1.0L - h);
    std::uint32_t m = k;
    if (guess > static_cast<long double>(k)) {
        if (guess > 4e9L) throw std::invalid_argument("minimal_code_length: m out of range");
        m = static_cast<std::uint32_t>(guess);
        m = m > 3 ? m - 3 : k;  // back off, then scan upward past float error
        if (m < k) m = k;
    }
    for (;; ++m) {
        if (m == UINT32_MAX) throw std::invalid_argument("minimal_code_length: m out of range");
        if (CodeParams(q, m, k, delta).satisfies_rate_bound()) return m;
    }
}

/// Full parameter set for an (n, r)-selective scheme.
///
/// `trivial` flags instances where r^2 ln n >= n; those are served by one
/// singleton test per item, but the derived code parameters are populated
/// either way so callers can inspect or force the code path.
struct SchemeParams {
    std::uint64_t n;
    std::uint32_t r;
    bool trivial;
    CodeParams code;
};

namespace detail {

inline bool trivial_regime(std::uint64_t n, std::uint32_t r) {
    long double lhs = static_cast<long double>(r) * static_cast<long double>(r) *
                      std::log(static_cast<long double>(n));
    long double rhs = static_cast<long double>(n);
    if (std::fabs(lhs - rhs) < kPrecisionMargin * rhs) {
        using std::log;
        bigfloat lhs_hp = bigfloat(r) * bigfloat(r) * log(bigfloat(n));
        return lhs_hp >= bigfloat(n);
    }
    return lhs >= rhs;
}

}  // namespace detail

/// Derives code parameters for an (n, r)-selective scheme:
/// delta = (r-1)/r, q the smallest prime in [2r, 4r), k minimal with
/// q^k >= n, and m minimal under the rate bound.
inline SchemeParams derive_params(std::uint64_t n, std::uint32_t r) {
    if (n < 2) throw std::invalid_argument("derive_params: need n >= 2");
    if (r < 1 || static_cast<std::uint64_t>(r) > n) {
        throw std::invalid_argument("derive_params: need 1 <= r <= n");
    }

    bool trivial = detail::trivial_regime(n, r);

    Ratio delta(static_cast<std::int64_t>(r) - 1, static_cast<std::int64_t>(r));
    std::uint64_t q64 = smallest_prime_in(2ULL * r, 4ULL * r);
    if (q64 >= (1ULL << 31)) {
        throw std::invalid_argument("derive_params: field order exceeds supported range");
    }
    auto q = static_cast<std::uint32_t>(q64);

    std::uint32_t k = 1;
    std::uint64_t power = q;
    while (power < n) {
        power = sat_mul(power, q);
        ++k;
    }

    std::uint32_t m = minimal_code_length(q, k, delta);
    return SchemeParams{n, r, trivial, CodeParams(q, m, k, delta)};
}

}  // namespace gvgt
