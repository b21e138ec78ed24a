#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gvgt/params.hpp"
#include "gvgt/ssf.hpp"
#include "gvgt/util.hpp"

namespace gvgt {

/// Per-test results, one flag per test, true = positive.
using OutcomeVector = std::vector<std::uint8_t>;

/// Strictly increasing item indices in [1, n].
using DefectiveSet = std::vector<std::uint32_t>;

/// Raised when an outcome vector cannot have come from at most r defectives.
class inconsistent_outcomes : public std::runtime_error {
public:
    explicit inconsistent_outcomes(const std::string& what) : std::runtime_error(what) {}
};

/// Scheme construction result with the audit trail of the underlying code.
struct SchemeBuild {
    Scheme scheme;
    SchemeParams params;
    bool used_code;            // false on the singleton branch
    bool distance_checked;     // code audit ran within budget
    std::uint32_t min_weight;  // meaningful when used_code && distance_checked
    bool exact_rerun;
    std::uint64_t total_items;  // sum of test sizes
};

namespace detail {

inline std::uint64_t scheme_total_items(const Scheme& s) {
    std::uint64_t total = 0;
    for (const auto& t : s.tests) total += t.size();
    return total;
}

}  // namespace detail

/// Builds an (n, r)-selective family: for r^2 ln n >= n one singleton test
/// per item, otherwise the derandomized code reduced to its test family.
inline SchemeBuild build_scheme(std::uint64_t n, std::uint32_t r,
                                BuildMode mode = BuildMode::fast,
                                std::uint64_t verify_budget = kDefaultVerifyBudget) {
    if (n > UINT32_MAX) throw std::invalid_argument("build_scheme: n out of supported range");
    SchemeParams sp = derive_params(n, r);
    SchemeBuild out{Scheme{}, sp, false, false, 0, false, 0};
    if (sp.trivial) {
        out.scheme.n = n;
        out.scheme.r = r;
        out.scheme.tests.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            out.scheme.tests[i] = {static_cast<std::uint32_t>(i + 1)};
        }
    } else {
        BuildReport rep = derandomized_construct(sp.code, mode, verify_budget);
        out.scheme = reduce_code(rep.code, n);
        out.used_code = true;
        out.distance_checked = rep.distance_checked;
        out.min_weight = rep.min_weight;
        out.exact_rerun = rep.exact_rerun;
    }
    out.total_items = detail::scheme_total_items(out.scheme);
    return out;
}

/// Non-adaptive group-testing scheme identifying up to r defectives among n
/// items: an (n, r+1)-selective family.
inline SchemeBuild build_gt_scheme(std::uint64_t n, std::uint32_t r,
                                   BuildMode mode = BuildMode::fast,
                                   std::uint64_t verify_budget = kDefaultVerifyBudget) {
    if (r < 1) throw std::invalid_argument("build_gt_scheme: need r >= 1");
    if (static_cast<std::uint64_t>(r) + 1 > n) {
        throw std::invalid_argument("build_gt_scheme: need r + 1 <= n");
    }
    return build_scheme(n, r + 1, mode, verify_budget);
}

namespace detail {

inline void validate_defectives(const Scheme& s, const DefectiveSet& d, const char* who) {
    std::uint32_t prev = 0;
    for (std::uint32_t x : d) {
        if (x <= prev || x > s.n) {
            throw std::invalid_argument(std::string(who) +
                                        ": defectives must be increasing in [1, n]");
        }
        prev = x;
    }
}

}  // namespace detail

/// Test outcomes under the standard model: a test is positive iff it
/// contains a defective item.
inline OutcomeVector outcomes(const Scheme& s, const DefectiveSet& d) {
    detail::validate_defectives(s, d, "outcomes");
    std::vector<std::uint8_t> defective(s.n + 1, 0);
    for (std::uint32_t x : d) defective[x] = 1;
    OutcomeVector o(s.tests.size(), 0);
    for (std::size_t i = 0; i < s.tests.size(); ++i) {
        for (std::uint32_t x : s.tests[i]) {
            if (defective[x]) {
                o[i] = 1;
                break;
            }
        }
    }
    return o;
}

/// Cover decoder: keeps exactly the items that appear in no negative test.
/// Monotone in the outcome vector; no consistency checking.
inline DefectiveSet cover_decode(const Scheme& s, const OutcomeVector& o) {
    if (o.size() != s.tests.size()) {
        throw std::invalid_argument("cover_decode: outcome count does not match test count");
    }
    std::vector<std::uint8_t> eliminated(s.n + 1, 0);
    for (std::size_t i = 0; i < s.tests.size(); ++i) {
        if (o[i]) continue;
        for (std::uint32_t x : s.tests[i]) eliminated[x] = 1;
    }
    DefectiveSet d;
    for (std::uint64_t x = 1; x <= s.n; ++x) {
        if (!eliminated[x]) d.push_back(static_cast<std::uint32_t>(x));
    }
    return d;
}

/// Decodes outcomes produced by at most r defectives; the result is exact
/// for schemes of strength r+1. Throws inconsistent_outcomes when no set of
/// at most r defectives could have produced `o`.
inline DefectiveSet decode(const Scheme& s, const OutcomeVector& o, std::uint32_t r) {
    DefectiveSet d = cover_decode(s, o);
    if (d.size() > r) {
        throw inconsistent_outcomes("decode: more than r candidate defectives remain");
    }
    if (outcomes(s, d) != o) {
        throw inconsistent_outcomes("decode: candidate set does not reproduce the outcomes");
    }
    return d;
}

/// Round-trip statistics for random defective sets.
struct SimulationReport {
    SchemeBuild build;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t first_failure_trial = UINT64_MAX;
    DefectiveSet first_failure;
    double build_ms = 0.0;
    double trials_ms = 0.0;
};

namespace detail {

/// Uniform size-`size` subset of [1, n] via Floyd's algorithm.
inline DefectiveSet sample_defectives(std::mt19937_64& eng, std::uint64_t n,
                                      std::uint32_t size) {
    DefectiveSet set;
    for (std::uint64_t j = n - size + 1; j <= n; ++j) {
        auto t = static_cast<std::uint32_t>(uniform_mod(eng, j) + 1);
        auto it = std::lower_bound(set.begin(), set.end(), t);
        if (it != set.end() && *it == t) {
            auto j32 = static_cast<std::uint32_t>(j);
            set.insert(std::lower_bound(set.begin(), set.end(), j32), j32);
        } else {
            set.insert(it, t);
        }
    }
    return set;
}

}  // namespace detail

/// Builds a scheme for up to r defectives among n items and replays
/// `trials` random defective sets through outcomes + decode. Trial results
/// depend only on (seed, trial index), so thread count never changes them.
inline SimulationReport simulate(std::uint64_t n, std::uint32_t r, std::uint64_t trials,
                                 std::uint64_t seed, BuildMode mode = BuildMode::fast,
                                 unsigned threads = 1,
                                 std::uint64_t verify_budget = kDefaultVerifyBudget) {
    namespace chrono = std::chrono;
    auto t0 = chrono::steady_clock::now();
    SchemeBuild build = build_gt_scheme(n, r, mode, verify_budget);
    auto t1 = chrono::steady_clock::now();
    SimulationReport rep{std::move(build), trials, 0, UINT64_MAX, {}, 0.0, 0.0};
    rep.build_ms = chrono::duration<double, std::milli>(t1 - t0).count();

    const Scheme& s = rep.build.scheme;
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& failures,
                         std::uint64_t& first_trial, DefectiveSet& first_set) {
        for (std::uint64_t trial = lo; trial < hi; ++trial) {
            std::mt19937_64 eng(mix_seed(seed, trial));
            auto size = static_cast<std::uint32_t>(uniform_mod(eng, r + 1));  // 0..r
            DefectiveSet d = detail::sample_defectives(eng, n, size);
            bool ok = false;
            try {
                ok = decode(s, outcomes(s, d), r) == d;
            } catch (const inconsistent_outcomes&) {
                ok = false;
            }
            if (!ok) {
                ++failures;
                if (trial < first_trial) {
                    first_trial = trial;
                    first_set = d;
                }
            }
        }
    };

    if (threads <= 1 || trials < 2) {
        run_range(0, trials, rep.failures, rep.first_failure_trial, rep.first_failure);
    } else {
        const auto workers = static_cast<unsigned>(
            std::min<std::uint64_t>(threads, trials));
        std::vector<std::uint64_t> fail(workers, 0);
        std::vector<std::uint64_t> first(workers, UINT64_MAX);
        std::vector<DefectiveSet> first_sets(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min(trials, lo + chunk);
            pool.emplace_back([&, w, lo, hi] {
                run_range(lo, hi, fail[w], first[w], first_sets[w]);
            });
        }
        for (auto& th : pool) th.join();
        for (unsigned w = 0; w < workers; ++w) {
            rep.failures += fail[w];
            if (first[w] < rep.first_failure_trial) {
                rep.first_failure_trial = first[w];
                rep.first_failure = first_sets[w];
            }
        }
    }
    auto t2 = chrono::steady_clock::now();
    rep.trials_ms = chrono::duration<double, std::milli>(t2 - t1).count();
    return rep;
}

// --- outcome file format -----------------------------------------------------
//
// Line 1:  GTO 1
// Line 2:  t <t>
// Line 3:  <t> characters, '0' negative / '1' positive.

inline void write_outcomes(std::ostream& os, const OutcomeVector& o) {
    os << "GTO 1\n";
    os << "t " << o.size() << "\n";
    for (std::uint8_t b : o) os << (b ? '1' : '0');
    os << '\n';
}

inline OutcomeVector read_outcomes(std::istream& is) {
    std::size_t lineno = 0;
    std::string line = detail::next_line(is, lineno, "header");
    if (line != "GTO 1") throw parse_error("expected 'GTO 1'", lineno);

    line = detail::next_line(is, lineno, "count line");
    if (line.rfind("t ", 0) != 0) throw parse_error("expected 't <t>'", lineno);
    std::uint64_t t = detail::parse_uint(line.substr(2), lineno, "t");

    OutcomeVector o;
    if (t > 0) {
        line = detail::next_line(is, lineno, "outcome line");
        if (line.size() != t) throw parse_error("outcome line length differs from t", lineno);
        o.reserve(t);
        for (char ch : line) {
            if (ch != '0' && ch != '1') throw parse_error("outcomes must be '0' or '1'", lineno);
            o.push_back(ch == '1');
        }
    }
    detail::expect_no_trailing(is, lineno);
    return o;
}

inline void write_outcomes_file(const std::string& path, const OutcomeVector& o) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_outcomes(os, o);
    if (!os.flush()) throw std::runtime_error("write failed: " + path);
}

inline OutcomeVector read_outcomes_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_outcomes(is);
}

}  // namespace gvgt
