#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvgt {

/// Deterministic trial division; sufficient for the field orders used here.
inline bool is_prime(std::uint64_t x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    if (x % 3 == 0) return x == 3;
    for (std::uint64_t d = 5; d * d <= x; d += 6) {
        if (x % d == 0 || x % (d + 2) == 0) return false;
    }
    return true;
}

/// Smallest prime p with lo <= p < hi; throws if the interval contains none.
inline std::uint64_t smallest_prime_in(std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t p = lo; p < hi; ++p) {
        if (is_prime(p)) return p;
    }
    throw std::invalid_argument("smallest_prime_in: no prime in [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + ")");
}

class PrimeField;

/// Element of a specific PrimeField; arithmetic between elements of
/// different fields throws.
class FieldElement {
public:
    FieldElement(std::uint32_t value, const PrimeField& field) : value_(value), field_(&field) {}

    std::uint32_t value() const { return value_; }
    const PrimeField& field() const { return *field_; }

private:
    std::uint32_t value_;
    const PrimeField* field_;
};

/// Prime field F_q with canonical representatives 0..q-1.
///
/// Inverses come from a precomputed table for q <= 2^16 and from the
/// extended Euclidean algorithm above that.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t q) : q_(q) {
        if (!is_prime(q)) {
            throw std::invalid_argument("PrimeField: order " + std::to_string(q) +
                                        " is not prime");
        }
        if (q <= (1u << 16)) {
            inv_table_.resize(q);
            for (std::uint32_t a = 1; a < q; ++a) inv_table_[a] = inv_euclid(a, q);
        }
    }

    std::uint32_t order() const { return q_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }

    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>(std::uint64_t(a) * b % q_);
    }

    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("PrimeField::inv: zero has no inverse");
        return inv_table_.empty() ? inv_euclid(a, q_) : inv_table_[a];
    }

    /// Canonical element from any integer (reduces mod q).
    FieldElement element(std::uint64_t v) const {
        return FieldElement(static_cast<std::uint32_t>(v % q_), *this);
    }

    FieldElement zero() const { return FieldElement(0, *this); }
    FieldElement one() const { return element(1); }

private:
    static std::uint32_t inv_euclid(std::uint32_t a, std::uint32_t q) {
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = q, new_r = a;
        while (new_r != 0) {
            std::int64_t quot = r / new_r;
            std::int64_t tmp = t - quot * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - quot * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (t < 0) t += q;
        return static_cast<std::uint32_t>(t);
    }

    std::uint32_t q_;
    std::vector<std::uint32_t> inv_table_;
};

namespace detail {
inline void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field().order() != b.field().order()) {
        throw std::invalid_argument("FieldElement: operands belong to different fields");
    }
}
}  // namespace detail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    detail::require_same_field(a, b);
    return FieldElement(a.field().add(a.value(), b.value()), a.field());
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    detail::require_same_field(a, b);
    return FieldElement(a.field().sub(a.value(), b.value()), a.field());
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    detail::require_same_field(a, b);
    return FieldElement(a.field().mul(a.value(), b.value()), a.field());
}

inline FieldElement operator-(const FieldElement& a) {
    return FieldElement(a.field().neg(a.value()), a.field());
}

inline FieldElement inverse(const FieldElement& a) {
    return FieldElement(a.field().inv(a.value()), a.field());
}

inline bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field().order() == b.field().order() && a.value() == b.value();
}

inline bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

}  // namespace gvgt
