#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace gvgt {

/// Malformed input file; message carries a 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// ceil(a / b) for b > 0, correct for negative a.
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && a > 0) ++q;
    return q;
}

/// floor(a / b) for b > 0, correct for negative a.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

/// Unbiased draw from [0, bound) via rejection; bit-reproducible for a fixed
/// engine state, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_mod(std::mt19937_64& eng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_mod: bound must be positive");
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t v = eng();
        if (v >= threshold) return v % bound;
    }
}

/// splitmix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// a * b capped at `cap` (monotone saturating product for budget estimates).
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap = UINT64_MAX) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap;
    std::uint64_t p = a * b;
    return p > cap ? cap : p;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap = UINT64_MAX) {
    if (b > cap || a > cap - b) return cap;
    return a + b;
}

}  // namespace gvgt
