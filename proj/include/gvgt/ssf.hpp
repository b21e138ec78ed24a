#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvgt/gvcode.hpp"
#include "gvgt/util.hpp"

namespace gvgt {

/// Default cap on elementary membership probes for exhaustive family checks.
constexpr std::uint64_t kDefaultSsfBudget = 1'000'000'000ULL;

/// Test family over items 1..n. `r` is the selection strength the family
/// was built for: within any set of at most r items, every item appears
/// alone in some test.
struct Scheme {
    std::uint64_t n = 0;
    std::uint32_t r = 0;
    std::vector<std::vector<std::uint32_t>> tests;  // each sorted ascending
};

namespace detail {

inline void validate_scheme(const Scheme& s) {
    if (s.n < 1) throw std::invalid_argument("Scheme: need n >= 1");
    if (s.n > UINT32_MAX) throw std::invalid_argument("Scheme: n out of supported range");
    if (s.r < 1) throw std::invalid_argument("Scheme: need r >= 1");
    for (const auto& test : s.tests) {
        if (test.empty()) throw std::invalid_argument("Scheme: empty test");
        std::uint32_t prev = 0;
        for (std::uint32_t x : test) {
            if (x <= prev || x > s.n) {
                throw std::invalid_argument("Scheme: test items must be increasing in [1, n]");
            }
            prev = x;
        }
    }
}

}  // namespace detail

/// Builds the test family of a code: one test per (position, symbol) pair,
/// holding the items whose codeword has that symbol at that position.
/// Items 1..n map to the first n messages in lexicographic order (digit 0
/// least significant); empty tests are dropped.
///
/// The family selects within sets of up to ceil(1/(1 - delta)) items: any
/// two distinct codewords agree on fewer than m - delta*m + 1 positions, so
/// each member of a small set keeps a private position.
inline Scheme reduce_code(const GeneratorMatrix& g, std::uint64_t n) {
    const CodeParams& p = g.params;
    if (n < 1) throw std::invalid_argument("reduce_code: need n >= 1");
    if (n > p.message_count() || n > UINT32_MAX) {
        throw std::invalid_argument("reduce_code: n exceeds the message space");
    }
    if (p.delta.num == p.delta.den) {
        throw std::invalid_argument("reduce_code: delta must be below 1");
    }

    const PrimeField field(p.q);
    std::vector<std::vector<std::uint32_t>> cols(p.k, std::vector<std::uint32_t>(p.m));
    for (std::uint32_t j = 0; j < p.k; ++j) {
        for (std::uint32_t i = 0; i < p.m; ++i) cols[j][i] = g.at(i, j);
    }

    std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(p.m) * p.q);
    std::vector<std::uint32_t> digits(p.k, 0);
    std::vector<std::uint32_t> cw(p.m, 0);
    for (std::uint32_t item = 1;; ++item) {
        for (std::uint32_t pos = 0; pos < p.m; ++pos) {
            buckets[static_cast<std::size_t>(pos) * p.q + cw[pos]].push_back(item);
        }
        if (item == n) break;
        // lexicographic increment with incremental codeword update
        std::uint32_t j = 0;
        while (digits[j] == p.q - 1) {
            digits[j] = 0;
            // digit drops by q-1, i.e. the codeword gains one column
            for (std::uint32_t pos = 0; pos < p.m; ++pos) {
                cw[pos] = field.add(cw[pos], cols[j][pos]);
            }
            ++j;
        }
        ++digits[j];
        for (std::uint32_t pos = 0; pos < p.m; ++pos) {
            cw[pos] = field.add(cw[pos], cols[j][pos]);
        }
    }

    Scheme s;
    s.n = n;
    s.r = static_cast<std::uint32_t>(ceil_div(p.delta.den, p.delta.den - p.delta.num));
    s.tests.reserve(buckets.size());
    for (auto& b : buckets) {
        if (!b.empty()) s.tests.push_back(std::move(b));
    }
    return s;
}

enum class SsfStatus { selective, not_selective, unverified };

/// Verdict of a family check; on a violation, `witness_set` is a candidate
/// set in which `witness_item` is never alone in a test.
struct SsfCheck {
    SsfStatus status;
    std::vector<std::uint32_t> witness_set;
    std::uint32_t witness_item = 0;
};

namespace detail {

inline bool item_in_test(const std::vector<std::uint32_t>& test, std::uint32_t x) {
    return std::binary_search(test.begin(), test.end(), x);
}

/// True when every member of `set` appears alone in some test.
inline bool all_selected(const Scheme& s, const std::vector<std::uint32_t>& set,
                         std::uint32_t& unselected) {
    const std::size_t r = set.size();
    std::uint64_t selected = 0;
    const std::uint64_t full = r >= 64 ? ~0ULL : (1ULL << r) - 1;
    for (const auto& test : s.tests) {
        std::size_t count = 0, last = 0;
        for (std::size_t i = 0; i < r; ++i) {
            if (item_in_test(test, set[i])) {
                if (++count > 1) break;
                last = i;
            }
        }
        if (count == 1) {
            selected |= 1ULL << last;
            if (selected == full) return true;
        }
    }
    if (selected == full) return true;
    for (std::size_t i = 0; i < r; ++i) {
        if (!(selected & (1ULL << i))) {
            unselected = set[i];
            break;
        }
    }
    return false;
}

inline std::uint64_t sat_choose(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = sat_mul(r, n - k + i, cap);
        r /= i;  // rounded down, fine for a budget estimate once saturated
        if (r == 0) r = 1;
    }
    return r;
}

}  // namespace detail

/// Exhaustive selection check over all candidate sets of size 1..min(r, n).
/// Returns `unverified` when the estimated probe count exceeds the budget.
inline SsfCheck verify_ssf(const Scheme& s, std::uint32_t r,
                           std::uint64_t budget = kDefaultSsfBudget) {
    detail::validate_scheme(s);
    if (r < 1) throw std::invalid_argument("verify_ssf: need r >= 1");
    const std::uint32_t top = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(r, s.n));
    if (top > 63) throw std::invalid_argument("verify_ssf: r above 63 is not supported");

    std::uint64_t ops = 0;
    for (std::uint32_t size = 1; size <= top; ++size) {
        std::uint64_t sets = detail::sat_choose(s.n, size, UINT64_MAX / 2);
        ops = sat_add(ops, sat_mul(sat_mul(sets, s.tests.size()), size));
    }
    if (ops > budget) return SsfCheck{SsfStatus::unverified, {}, 0};

    const auto n32 = static_cast<std::uint32_t>(s.n);
    for (std::uint32_t size = 1; size <= top; ++size) {
        std::vector<std::uint32_t> set(size);
        for (std::uint32_t i = 0; i < size; ++i) set[i] = i + 1;
        for (;;) {
            std::uint32_t unselected = 0;
            if (!detail::all_selected(s, set, unselected)) {
                return SsfCheck{SsfStatus::not_selective, set, unselected};
            }
            // next combination in lexicographic order
            std::int64_t i = size - 1;
            while (i >= 0 && set[i] == n32 - size + i + 1) --i;
            if (i < 0) break;
            ++set[i];
            for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < size; ++j) {
                set[j] = set[j - 1] + 1;
            }
        }
    }
    return SsfCheck{SsfStatus::selective, {}, 0};
}

/// Monte-Carlo selection check: samples `trials` candidate sets of size
/// min(r, n) and verifies each member is selected. Violations in smaller
/// sets survive in larger ones, so sampling the top size loses nothing.
/// True means no violation was found.
inline bool verify_ssf_sampled(const Scheme& s, std::uint32_t r, std::uint64_t trials,
                               std::uint64_t seed) {
    detail::validate_scheme(s);
    if (r < 1) throw std::invalid_argument("verify_ssf_sampled: need r >= 1");
    const auto size = static_cast<std::uint32_t>(std::min<std::uint64_t>(r, s.n));
    if (size > 63) throw std::invalid_argument("verify_ssf_sampled: set size above 63");
    std::mt19937_64 eng(seed);
    std::vector<std::uint32_t> set;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        set.clear();
        // Floyd's sampling: uniform size-subset of [1, n]
        for (std::uint64_t j = s.n - size + 1; j <= s.n; ++j) {
            std::uint64_t t = uniform_mod(eng, j) + 1;
            auto t32 = static_cast<std::uint32_t>(t);
            auto it = std::lower_bound(set.begin(), set.end(), t32);
            if (it != set.end() && *it == t32) {
                auto j32 = static_cast<std::uint32_t>(j);
                set.insert(std::lower_bound(set.begin(), set.end(), j32), j32);
            } else {
                set.insert(it, t32);
            }
        }
        std::uint32_t unselected = 0;
        if (!detail::all_selected(s, set, unselected)) return false;
    }
    return true;
}

// --- scheme file format ------------------------------------------------------
//
// Line 1:  GTS 1
// Line 2:  n <n> r <r> t <t>
// Then t lines, each one test: ascending items separated by spaces.

inline void write_scheme(std::ostream& os, const Scheme& s) {
    os << "GTS 1\n";
    os << "n " << s.n << " r " << s.r << " t " << s.tests.size() << "\n";
    for (const auto& test : s.tests) {
        for (std::size_t i = 0; i < test.size(); ++i) {
            if (i) os << ' ';
            os << test[i];
        }
        os << '\n';
    }
}

inline Scheme read_scheme(std::istream& is) {
    std::size_t lineno = 0;
    std::string line = detail::next_line(is, lineno, "header");
    if (line != "GTS 1") throw parse_error("expected 'GTS 1'", lineno);

    line = detail::next_line(is, lineno, "parameter line");
    std::istringstream hdr(line);
    std::string tn, tr, tt, vn, vr, vt, extra;
    hdr >> tn >> vn >> tr >> vr >> tt >> vt;
    if (!hdr || tn != "n" || tr != "r" || tt != "t" || (hdr >> extra)) {
        throw parse_error("expected 'n <n> r <r> t <t>'", lineno);
    }
    Scheme s;
    s.n = detail::parse_uint(vn, lineno, "n");
    std::uint64_t r = detail::parse_uint(vr, lineno, "r");
    std::uint64_t t = detail::parse_uint(vt, lineno, "t");
    if (r > UINT32_MAX) throw parse_error("r out of range", lineno);
    s.r = static_cast<std::uint32_t>(r);
    if (s.n < 1 || s.n > UINT32_MAX || s.r < 1) {
        throw parse_error("need 1 <= r and 1 <= n <= 2^32-1", lineno);
    }

    s.tests.resize(t);
    for (std::uint64_t i = 0; i < t; ++i) {
        line = detail::next_line(is, lineno, "test line");
        std::istringstream row(line);
        std::string tok;
        std::uint64_t prev = 0;
        while (row >> tok) {
            std::uint64_t v = detail::parse_uint(tok, lineno, "item");
            if (v > s.n) throw parse_error("item above n", lineno);
            if (v <= prev) throw parse_error("items must be strictly increasing", lineno);
            prev = v;
            s.tests[i].push_back(static_cast<std::uint32_t>(v));
        }
        if (s.tests[i].empty()) throw parse_error("empty test", lineno);
    }
    detail::expect_no_trailing(is, lineno);
    try {
        detail::validate_scheme(s);
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what(), lineno);
    }
    return s;
}

inline void write_scheme_file(const std::string& path, const Scheme& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_scheme(os, s);
    if (!os.flush()) throw std::runtime_error("write failed: " + path);
}

inline Scheme read_scheme_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_scheme(is);
}

}  // namespace gvgt
