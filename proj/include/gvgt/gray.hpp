#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gvgt {

/// Loopless reflected Gray enumerator over fixed-radix words.
///
/// Visits all radix^digits words, changing exactly one digit by +-1 per
/// step. Starts at the all-zero word; next() advances and reports which
/// digit moved and in which direction.
class GrayEnumerator {
public:
    GrayEnumerator(std::uint32_t radix, std::uint32_t digits) : radix_(radix), n_(digits) {
        if (radix < 2) throw std::invalid_argument("GrayEnumerator: radix must be >= 2");
        reset();
    }

    void reset() {
        a_.assign(n_, 0);
        o_.assign(n_, 1);
        f_.resize(n_ + 1);
        for (std::uint32_t j = 0; j <= n_; ++j) f_[j] = j;
        done_ = false;
    }

    /// Advances to the next word. Returns false once all words were visited;
    /// on true, `digit` is the changed position and `delta` is +1 or -1.
    bool next(std::uint32_t& digit, int& delta) {
        if (done_) return false;
        std::uint32_t j = f_[0];
        f_[0] = 0;
        if (j == n_) {
            done_ = true;
            return false;
        }
        digit = j;
        delta = o_[j];
        a_[j] = static_cast<std::uint32_t>(static_cast<int>(a_[j]) + o_[j]);
        if (a_[j] == 0 || a_[j] == radix_ - 1) {
            o_[j] = -o_[j];
            f_[j] = f_[j + 1];
            f_[j + 1] = j + 1;
        }
        return true;
    }

    const std::vector<std::uint32_t>& word() const { return a_; }

private:
    std::uint32_t radix_;
    std::uint32_t n_;
    bool done_ = false;
    std::vector<std::uint32_t> a_;
    std::vector<int> o_;
    std::vector<std::uint32_t> f_;
};

}  // namespace gvgt
