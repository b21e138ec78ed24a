#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvgt/field.hpp"
#include "gvgt/gray.hpp"
#include "gvgt/numeric.hpp"
#include "gvgt/params.hpp"
#include "gvgt/util.hpp"

namespace gvgt {

/// Default cap on enumerated messages for distance checks.
constexpr std::uint64_t kDefaultVerifyBudget = 1ULL << 24;

/// Hard cap on q^k for stateful construction (the vanish-count array has
/// one entry per message).
constexpr std::uint64_t kMaxStateMessages = 1ULL << 28;

/// Row-major m x k generator matrix over F_q; codewords are G * y for
/// column messages y in F_q^k.
struct GeneratorMatrix {
    CodeParams params;
    std::vector<std::uint32_t> entries;  // row-major, values in [0, q)

    explicit GeneratorMatrix(const CodeParams& p)
        : params(p), entries(static_cast<std::size_t>(p.m) * p.k, 0) {}

    std::uint32_t at(std::uint32_t row, std::uint32_t col) const {
        return entries[static_cast<std::size_t>(row) * params.k + col];
    }
    std::uint32_t& at(std::uint32_t row, std::uint32_t col) {
        return entries[static_cast<std::size_t>(row) * params.k + col];
    }
};

/// Codeword G * y; y must have k entries below q.
inline std::vector<std::uint32_t> encode(const GeneratorMatrix& g,
                                         const std::vector<std::uint32_t>& y) {
    const CodeParams& p = g.params;
    if (y.size() != p.k) throw std::invalid_argument("encode: message length mismatch");
    for (std::uint32_t v : y) {
        if (v >= p.q) throw std::invalid_argument("encode: message symbol out of range");
    }
    std::vector<std::uint32_t> cw(p.m);
    for (std::uint32_t i = 0; i < p.m; ++i) {
        std::uint64_t acc = 0;
        for (std::uint32_t j = 0; j < p.k; ++j) {
            acc += std::uint64_t(g.at(i, j)) * y[j];
        }
        cw[i] = static_cast<std::uint32_t>(acc % p.q);
    }
    return cw;
}

namespace detail {

/// Sweeps all q^k codewords in Gray order, updating one column per step,
/// and reports the Hamming weight of every nonzero message's codeword.
template <typename Fn>
void for_each_nonzero_weight(const GeneratorMatrix& g, Fn&& fn) {
    const CodeParams& p = g.params;
    const PrimeField field(p.q);
    std::vector<std::vector<std::uint32_t>> cols(p.k, std::vector<std::uint32_t>(p.m));
    for (std::uint32_t j = 0; j < p.k; ++j) {
        for (std::uint32_t i = 0; i < p.m; ++i) cols[j][i] = g.at(i, j);
    }
    std::vector<std::uint32_t> cw(p.m, 0);
    std::uint32_t weight = 0;
    GrayEnumerator gray(p.q, p.k);
    std::uint32_t t;
    int delta;
    while (gray.next(t, delta)) {
        const std::vector<std::uint32_t>& col = cols[t];
        if (delta > 0) {
            for (std::uint32_t i = 0; i < p.m; ++i) {
                std::uint32_t old = cw[i];
                std::uint32_t nw = field.add(old, col[i]);
                cw[i] = nw;
                weight += (nw != 0) - (old != 0);
            }
        } else {
            for (std::uint32_t i = 0; i < p.m; ++i) {
                std::uint32_t old = cw[i];
                std::uint32_t nw = field.sub(old, col[i]);
                cw[i] = nw;
                weight += (nw != 0) - (old != 0);
            }
        }
        fn(weight);
    }
}

}  // namespace detail

/// Number of nonzero messages whose codeword weight falls below the
/// distance requirement ceil(delta * m); zero means the code meets it.
inline std::int64_t goal(const GeneratorMatrix& g,
                         std::uint64_t budget = kDefaultVerifyBudget) {
    if (g.params.message_count() > budget) {
        throw std::invalid_argument("goal: message space exceeds budget");
    }
    const std::int64_t need = g.params.distance_requirement();
    std::int64_t bad = 0;
    detail::for_each_nonzero_weight(g, [&](std::uint32_t w) {
        if (static_cast<std::int64_t>(w) < need) ++bad;
    });
    return bad;
}

/// Minimum nonzero-codeword weight by full enumeration, or nullopt when
/// q^k exceeds the budget.
inline std::optional<std::uint32_t> verify_distance(
    const GeneratorMatrix& g, std::uint64_t budget = kDefaultVerifyBudget) {
    if (g.params.message_count() > budget) return std::nullopt;
    std::uint32_t best = g.params.m + 1;
    detail::for_each_nonzero_weight(g, [&](std::uint32_t w) { best = std::min(best, w); });
    if (best > g.params.m) best = 0;  // k >= 1 guarantees at least one nonzero message
    return best;
}

/// Uniformly random generator matrix (row-major fill order, rejection
/// sampling per entry). No distance guarantee; callers should verify.
inline GeneratorMatrix random_code(const CodeParams& p, std::uint64_t seed) {
    GeneratorMatrix g(p);
    std::mt19937_64 eng(seed);
    for (auto& e : g.entries) e = static_cast<std::uint32_t>(uniform_mod(eng, p.q));
    return g;
}

/// Greedy score for one undetermined entry: the gap between the conditional
/// probabilities of a distance shortfall when the current symbol makes the
/// word's next coordinate vanish versus when it does not.
///
/// `remaining` is the number of still-random rows and `c` the coordinate
/// weight the word has collected so far; the gap equals the probability
/// that a Binomial(remaining, 1 - 1/q) variable lands exactly on
/// ceil(delta * m) - c - 1.
inline double dif(const CodeParams& p, const LogPmfTable& table, std::uint32_t remaining,
                  std::int64_t c) {
    const std::int64_t w = p.distance_requirement() - c - 1;
    if (w < 0 || w > static_cast<std::int64_t>(remaining)) return 0.0;
    return std::exp(table.ln_choose(static_cast<int>(remaining), static_cast<int>(w)) +
                    static_cast<double>(w) * table.ln_success() +
                    static_cast<double>(remaining - w) * table.ln_fail());
}

namespace detail {

/// dif values for every feasible prefix weight c in [0, determined], as
/// floats.
inline std::vector<double> dif_table_fast(const CodeParams& p, const LogPmfTable& table,
                                          std::uint32_t determined) {
    const std::uint32_t remaining = p.m - determined - 1;
    std::vector<double> out(determined + 1);
    for (std::uint32_t c = 0; c <= determined; ++c) {
        out[c] = dif(p, table, remaining, static_cast<std::int64_t>(c));
    }
    return out;
}

/// Same table exactly: integer numerators over the common denominator
/// q^remaining. Successive c values step the binomial index down by one,
/// so each entry follows from the previous with O(1) big-integer work.
struct ExactDifTable {
    std::vector<bigint> num;
    std::uint32_t remaining;
};

inline ExactDifTable dif_table_exact(const CodeParams& p, std::uint32_t determined) {
    const std::uint32_t u = p.m - determined - 1;
    const std::int64_t w0 = p.distance_requirement() - 1;  // index at c = 0
    ExactDifTable t;
    t.remaining = u;
    t.num.assign(determined + 1, 0);
    bigint cur = 0;
    bool have_cur = false;
    for (std::uint32_t c = 0; c <= determined; ++c) {
        const std::int64_t w = w0 - c;
        if (w < 0) break;  // stays below zero from here on
        if (w > static_cast<std::int64_t>(u)) continue;
        if (!have_cur) {
            cur = binom_choose(u, w) * bigint_pow(bigint(p.q - 1), static_cast<std::uint64_t>(w));
            have_cur = true;
        } else {
            cur *= w + 1;
            cur /= bigint(u - w) * (p.q - 1);
        }
        t.num[c] = cur;
    }
    return t;
}

/// Visits every message in block j (nonzero digit j, zeros above) once,
/// reporting its index ell and the one symbol value for the entry under
/// construction that would make the word's next coordinate vanish.
///
/// Messages inside the block are swept in Gray order over digits 0..j-1,
/// so the partial inner product with the current row updates in O(1) per
/// message.
template <typename Fn>
void for_each_block_message(const PrimeField& field, const std::uint32_t* row_prefix,
                            std::uint32_t j, const std::uint64_t* powq, Fn&& fn) {
    const std::uint32_t q = field.order();
    for (std::uint32_t yj = 1; yj < q; ++yj) {
        // vanish symbol v0 = -inv(yj) * sum_{t<j} row[t] y[t]
        const std::uint32_t coef = field.neg(field.inv(yj));
        const std::uint64_t base = yj * powq[j];
        if (j == 0) {
            fn(base, 0u);
            continue;
        }
        GrayEnumerator gray(q, j);
        std::uint32_t s = 0;
        std::uint64_t off = 0;
        fn(base, 0u);
        std::uint32_t t;
        int delta;
        while (gray.next(t, delta)) {
            if (delta > 0) {
                s = field.add(s, row_prefix[t]);
                off += powq[t];
            } else {
                s = field.sub(s, row_prefix[t]);
                off -= powq[t];
            }
            fn(base + off, field.mul(coef, s));
        }
    }
}

}  // namespace detail

enum class BuildMode { fast, exact };

/// Stepwise derandomized construction state.
///
/// Entries are fixed row by row, left to right. Each step scores all q
/// candidate symbols for the next entry against the words whose codeword
/// coordinate in the current row is decided by that entry (one block per
/// column), then commits the symbol with the best score and updates the
/// per-word vanish counts.
class CodeBuilder {
public:
    CodeBuilder(const CodeParams& p, BuildMode mode)
        : params_(p),
          field_(p.q),
          mode_(mode),
          table_(static_cast<int>(p.m), p.q) {
        if (!p.satisfies_rate_bound()) {
            throw std::invalid_argument("CodeBuilder: parameters miss the rate bound");
        }
        const std::uint64_t total = p.message_count();
        if (total > kMaxStateMessages) {
            throw std::invalid_argument("CodeBuilder: q^k exceeds the state budget");
        }
        powq_.resize(p.k + 1);
        powq_[0] = 1;
        for (std::uint32_t j = 0; j < p.k; ++j) powq_[j + 1] = powq_[j] * p.q;
        g_.assign(static_cast<std::size_t>(p.m) * p.k, 0);
        a_.assign(total, 0);
    }

    const CodeParams& params() const { return params_; }
    const PrimeField& field() const { return field_; }
    BuildMode mode() const { return mode_; }
    const LogPmfTable& table() const { return table_; }

    bool finished() const { return row_ == params_.m; }
    std::uint32_t row() const { return row_; }
    std::uint32_t col() const { return col_; }

    /// Vanish counts per message index: rows of the determined prefix whose
    /// codeword coordinate is zero.
    const std::vector<std::uint32_t>& vanish_counts() const { return a_; }
    const std::vector<std::uint32_t>& entries() const { return g_; }
    const std::vector<std::uint64_t>& radix_powers() const { return powq_; }

    /// Elementary block visits so far (two sweeps per step).
    std::uint64_t visit_count() const { return visits_; }

    GeneratorMatrix matrix() const {
        GeneratorMatrix g(params_);
        g.entries = g_;
        return g;
    }

    /// Fixes the next entry. Throws once the matrix is complete.
    void step() {
        if (finished()) throw std::logic_error("CodeBuilder::step: already finished");
        if (mode_ == BuildMode::fast) {
            step_impl<double>();
        } else {
            step_impl<bigint>();
        }
    }

private:
    template <typename Weight>
    void step_impl() {
        refresh_dif_tables();
        const std::uint32_t q = params_.q;
        const std::uint32_t j = col_;
        const std::uint32_t* prefix = &g_[static_cast<std::size_t>(row_) * params_.k];

        std::vector<Weight>& w = weights<Weight>();
        w.assign(q, Weight(0));
        const auto* difs = dif_values<Weight>();
        detail::for_each_block_message(
            field_, prefix, j, powq_.data(), [&](std::uint64_t ell, std::uint32_t v0) {
                const std::uint32_t c = row_ - a_[ell];
                const Weight& d = difs[c];
                if (d != Weight(0)) w[v0] -= d;
            });

        std::uint32_t best = 0;
        for (std::uint32_t v = 1; v < q; ++v) {
            if (w[v] > w[best]) best = v;
        }
        g_[static_cast<std::size_t>(row_) * params_.k + j] = best;

        detail::for_each_block_message(
            field_, prefix, j, powq_.data(), [&](std::uint64_t ell, std::uint32_t v0) {
                if (v0 == best) ++a_[ell];
            });

        visits_ += 2 * std::uint64_t(q - 1) * powq_[j];
        if (++col_ == params_.k) {
            col_ = 0;
            ++row_;
        }
    }

    void refresh_dif_tables() {
        if (dif_row_ == row_) return;
        if (mode_ == BuildMode::fast) {
            dif_fast_ = detail::dif_table_fast(params_, table_, row_);
        } else {
            dif_exact_ = detail::dif_table_exact(params_, row_).num;
        }
        dif_row_ = row_;
    }

    template <typename Weight>
    std::vector<Weight>& weights();
    template <typename Weight>
    const Weight* dif_values() const;

    CodeParams params_;
    PrimeField field_;
    BuildMode mode_;
    LogPmfTable table_;
    std::vector<std::uint64_t> powq_;
    std::vector<std::uint32_t> g_;
    std::vector<std::uint32_t> a_;
    std::uint32_t row_ = 0;
    std::uint32_t col_ = 0;
    std::uint64_t visits_ = 0;
    std::uint32_t dif_row_ = UINT32_MAX;
    std::vector<double> dif_fast_;
    std::vector<bigint> dif_exact_;
    std::vector<double> w_fast_;
    std::vector<bigint> w_exact_;
};

template <>
inline std::vector<double>& CodeBuilder::weights<double>() {
    return w_fast_;
}
template <>
inline std::vector<bigint>& CodeBuilder::weights<bigint>() {
    return w_exact_;
}
template <>
inline const double* CodeBuilder::dif_values<double>() const {
    return dif_fast_.data();
}
template <>
inline const bigint* CodeBuilder::dif_values<bigint>() const {
    return dif_exact_.data();
}

/// Candidate scores for the next entry in float arithmetic. Higher is
/// better; CodeBuilder commits the smallest symbol among maximal scores.
inline std::vector<double> step_weights_fast(const CodeBuilder& b) {
    if (b.finished()) throw std::logic_error("step_weights_fast: construction finished");
    const CodeParams& p = b.params();
    std::vector<double> difs = detail::dif_table_fast(p, b.table(), b.row());
    std::vector<double> w(p.q, 0.0);
    const std::uint32_t* prefix = &b.entries()[static_cast<std::size_t>(b.row()) * p.k];
    detail::for_each_block_message(
        b.field(), prefix, b.col(), b.radix_powers().data(),
        [&](std::uint64_t ell, std::uint32_t v0) {
            w[v0] -= difs[b.row() - b.vanish_counts()[ell]];
        });
    return w;
}

/// Candidate scores exactly, as integer numerators over the common
/// denominator q^(m - row - 1); all values are <= 0.
inline std::vector<bigint> step_weights_exact(const CodeBuilder& b) {
    if (b.finished()) throw std::logic_error("step_weights_exact: construction finished");
    const CodeParams& p = b.params();
    detail::ExactDifTable difs = detail::dif_table_exact(p, b.row());
    std::vector<bigint> w(p.q, bigint(0));
    const std::uint32_t* prefix = &b.entries()[static_cast<std::size_t>(b.row()) * p.k];
    detail::for_each_block_message(
        b.field(), prefix, b.col(), b.radix_powers().data(),
        [&](std::uint64_t ell, std::uint32_t v0) {
            const bigint& d = difs.num[b.row() - b.vanish_counts()[ell]];
            if (d != 0) w[v0] -= d;
        });
    return w;
}

/// Exact conditional expectation of `goal` at the builder's current state:
/// the expected number of nonzero messages whose codeword would miss the
/// distance requirement if all undetermined entries were drawn uniformly.
inline bigrat expected_goal(const CodeBuilder& b) {
    const CodeParams& p = b.params();
    const std::int64_t w0 = p.distance_requirement();
    const std::vector<std::uint64_t>& powq = b.radix_powers();
    const std::vector<std::uint32_t>& a = b.vanish_counts();

    // Tail prefix sums per remaining-row count u: tail[w+1] = number of
    // weight outcomes < w+1 scaled by q^u.
    auto tail_sums = [&](std::uint32_t u) {
        std::vector<bigint> ps(u + 2);
        ps[0] = 0;
        bigint term = 1;  // C(u, w) (q-1)^w at w = 0
        for (std::uint32_t w = 0; w <= u; ++w) {
            ps[w + 1] = ps[w] + term;
            if (w < u) {
                term *= bigint(u - w) * (p.q - 1);
                term /= w + 1;
            }
        }
        return ps;
    };

    const std::uint32_t d_lo = b.row();  // blocks at or past the current column
    std::vector<bigint> tails_lo = tail_sums(p.m - d_lo);
    std::vector<bigint> tails_hi;  // blocks before it: one more row determined
    if (b.col() > 0) tails_hi = tail_sums(p.m - d_lo - 1);

    bigint acc_lo = 0, acc_hi = 0;
    for (std::uint32_t jb = 0; jb < p.k; ++jb) {
        const bool ahead = jb < b.col();
        const std::uint32_t d = d_lo + (ahead ? 1 : 0);
        const std::uint32_t u = p.m - d;
        const std::vector<bigint>& tails = ahead ? tails_hi : tails_lo;
        bigint& acc = ahead ? acc_hi : acc_lo;
        for (std::uint64_t ell = powq[jb]; ell < powq[jb + 1]; ++ell) {
            std::int64_t widx = w0 - (static_cast<std::int64_t>(d) - a[ell]) - 1;
            if (widx < 0) continue;
            if (widx > static_cast<std::int64_t>(u)) widx = u;
            acc += tails[widx + 1];
        }
    }

    bigrat result = bigrat(acc_lo) / bigrat(bigint_pow(bigint(p.q), p.m - d_lo));
    if (b.col() > 0) {
        result += bigrat(acc_hi) / bigrat(bigint_pow(bigint(p.q), p.m - d_lo - 1));
    }
    return result;
}

/// Construction outcome plus the distance audit that followed it.
struct BuildReport {
    GeneratorMatrix code;
    bool distance_checked;      // false when q^k exceeded the budget
    std::uint32_t min_weight;   // meaningful only when checked
    bool exact_rerun;           // fast mode fell back to exact scoring
};

/// Runs the full derandomized construction and audits the result.
///
/// The constructed code meets the distance requirement by design; the audit
/// is a safety net. If the fast scoring ever commits a bad symbol through
/// float rounding, the construction reruns in exact mode, which cannot fail.
inline BuildReport derandomized_construct(const CodeParams& p, BuildMode mode,
                                          std::uint64_t verify_budget = kDefaultVerifyBudget) {
    auto run = [&](BuildMode m) {
        CodeBuilder b(p, m);
        while (!b.finished()) b.step();
        return b.matrix();
    };

    BuildReport report{run(mode), false, 0, false};
    std::optional<std::uint32_t> w = verify_distance(report.code, verify_budget);
    if (!w) return report;

    if (static_cast<std::int64_t>(*w) < p.distance_requirement() && mode == BuildMode::fast) {
        report.code = run(BuildMode::exact);
        report.exact_rerun = true;
        w = verify_distance(report.code, verify_budget);
    }
    if (static_cast<std::int64_t>(*w) < p.distance_requirement()) {
        throw std::logic_error("derandomized_construct: distance requirement missed");
    }
    report.distance_checked = true;
    report.min_weight = *w;
    return report;
}

// --- code file format -------------------------------------------------------
//
// Line 1:  GVC 1
// Line 2:  q <q> m <m> k <k> delta <num>/<den>
// Then m lines of k space-separated entries in [0, q).

inline void write_code(std::ostream& os, const GeneratorMatrix& g) {
    const CodeParams& p = g.params;
    os << "GVC 1\n";
    os << "q " << p.q << " m " << p.m << " k " << p.k << " delta " << p.delta.str() << "\n";
    for (std::uint32_t i = 0; i < p.m; ++i) {
        for (std::uint32_t j = 0; j < p.k; ++j) {
            if (j) os << ' ';
            os << g.at(i, j);
        }
        os << '\n';
    }
}

namespace detail {

inline std::string next_line(std::istream& is, std::size_t& lineno, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error(std::string("missing ") + what, lineno + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline void expect_no_trailing(std::istream& is, std::size_t lineno) {
    std::string line;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) throw parse_error("unexpected trailing content", lineno);
    }
}

inline std::uint64_t parse_uint(const std::string& tok, std::size_t lineno, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw parse_error(std::string("malformed ") + what + " '" + tok + "'", lineno);
    }
    try {
        return std::stoull(tok);
    } catch (const std::out_of_range&) {
        throw parse_error(std::string(what) + " out of range", lineno);
    }
}

}  // namespace detail

inline GeneratorMatrix read_code(std::istream& is) {
    std::size_t lineno = 0;
    std::string line = detail::next_line(is, lineno, "header");
    if (line != "GVC 1") throw parse_error("expected 'GVC 1'", lineno);

    line = detail::next_line(is, lineno, "parameter line");
    std::istringstream hdr(line);
    std::string tq, tm, tk, td, vq, vm, vk, vd, extra;
    hdr >> tq >> vq >> tm >> vm >> tk >> vk >> td >> vd;
    if (!hdr || tq != "q" || tm != "m" || tk != "k" || td != "delta" || (hdr >> extra)) {
        throw parse_error("expected 'q <q> m <m> k <k> delta <num>/<den>'", lineno);
    }
    std::uint64_t q = detail::parse_uint(vq, lineno, "q");
    std::uint64_t m = detail::parse_uint(vm, lineno, "m");
    std::uint64_t k = detail::parse_uint(vk, lineno, "k");
    if (q >= (1ULL << 31) || m > UINT32_MAX || k > UINT32_MAX) {
        throw parse_error("parameter out of range", lineno);
    }
    Ratio delta;
    try {
        delta = parse_ratio(vd);
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what(), lineno);
    }
    std::optional<CodeParams> params;
    try {
        params.emplace(static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(m),
                       static_cast<std::uint32_t>(k), delta);
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what(), lineno);
    }

    GeneratorMatrix g(*params);
    for (std::uint32_t i = 0; i < params->m; ++i) {
        line = detail::next_line(is, lineno, "matrix row");
        std::istringstream row(line);
        for (std::uint32_t j = 0; j < params->k; ++j) {
            std::string tok;
            if (!(row >> tok)) throw parse_error("row has too few entries", lineno);
            std::uint64_t v = detail::parse_uint(tok, lineno, "entry");
            if (v >= q) throw parse_error("entry not below q", lineno);
            g.at(i, j) = static_cast<std::uint32_t>(v);
        }
        std::string tok;
        if (row >> tok) throw parse_error("row has too many entries", lineno);
    }
    detail::expect_no_trailing(is, lineno);
    return g;
}

inline void write_code_file(const std::string& path, const GeneratorMatrix& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_code(os, g);
    if (!os.flush()) throw std::runtime_error("write failed: " + path);
}

inline GeneratorMatrix read_code_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_code(is);
}

}  // namespace gvgt
