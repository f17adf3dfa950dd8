// Copyright 2026 The qbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file boolfn.hpp
/// Boolean datasets, truth tables, and the two descriptors used to
/// classify them: Lempel-Ziv complexity and entropy.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qbias/error.hpp"

namespace qbias {

/// One n-bit input. bits[0] is the leftmost (most significant) character
/// of the input's binary string, so input index 5 at n=3 is (1,0,1).
struct BooleanInput {
    std::vector<std::uint8_t> bits;

    std::size_t size() const noexcept { return bits.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits[i]; }
    std::size_t count_ones() const noexcept {
        return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
    }
    bool all_zero() const noexcept { return count_ones() == 0; }
    std::string to_string() const {
        std::string s;
        for (auto b : bits) s.push_back(b ? '1' : '0');
        return s;
    }
    friend bool operator==(const BooleanInput &, const BooleanInput &) = default;
};

/// All 2^n inputs in ascending binary order.
struct BooleanDataset {
    int n = 0;
    std::vector<BooleanInput> inputs;
};

/// The `n`-bit binary expansion of `index`.
inline BooleanInput input_from_index(std::uint64_t index, int n) {
    BooleanInput x;
    x.bits.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        x.bits[static_cast<std::size_t>(j)] =
            static_cast<std::uint8_t>((index >> (n - 1 - j)) & 1U);
    }
    return x;
}

inline BooleanDataset enumerate_inputs(int n) {
    if (n < 1 || n > 20) {
        throw SizeError("enumerate_inputs: n must be in [1, 20], got " +
                        std::to_string(n));
    }
    BooleanDataset ds;
    ds.n = n;
    const std::uint64_t m = std::uint64_t{1} << n;
    ds.inputs.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        ds.inputs.push_back(input_from_index(i, n));
    }
    return ds;
}

/// Truth table of f : {0,1}^n -> {0,1}, packed 64 labels per word.
///
/// Label i (the output on input index i) is bit i % 64 of word i / 64.
/// The canonical text form lists labels from input 0 to input 2^n - 1,
/// and the integer value reads that text as a big-endian binary number,
/// so ordering and equality agree with the text form.
class BooleanFunction {
  public:
    BooleanFunction() = default;

    /// All-zeros function of the given length (a power of two).
    explicit BooleanFunction(std::size_t length)
        : size_(length), words_((length + 63) / 64, 0) {
        if (length == 0 || !std::has_single_bit(length)) {
            throw SizeError("BooleanFunction: length must be a power of two, got " +
                            std::to_string(length));
        }
    }

    static BooleanFunction from_string(std::string_view text) {
        BooleanFunction f(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '1') {
                f.set(i, true);
            } else if (text[i] != '0') {
                throw SizeError("BooleanFunction: non-binary character in '" +
                                std::string(text) + "'");
            }
        }
        return f;
    }

    static BooleanFunction from_labels(std::span<const std::uint8_t> labels) {
        BooleanFunction f(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            f.set(i, labels[i] != 0);
        }
        return f;
    }

    std::size_t size() const noexcept { return size_; }

    /// Number of input bits n, with size() == 2^n.
    int num_inputs() const noexcept {
        return static_cast<int>(std::countr_zero(size_));
    }

    bool operator[](std::size_t i) const noexcept {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }

    void set(std::size_t i, bool v) noexcept {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }

    std::size_t count_ones() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if ((*this)[i]) s[i] = '1';
        }
        return s;
    }

    std::vector<std::uint8_t> labels() const {
        std::vector<std::uint8_t> out(size_);
        for (std::size_t i = 0; i < size_; ++i) out[i] = (*this)[i] ? 1 : 0;
        return out;
    }

    BooleanFunction reversed() const {
        BooleanFunction r(size_);
        for (std::size_t i = 0; i < size_; ++i) r.set(size_ - 1 - i, (*this)[i]);
        return r;
    }

    BooleanFunction complement() const {
        BooleanFunction r(*this);
        for (auto &w : r.words_) w = ~w;
        r.clear_padding();
        return r;
    }

    /// Big-endian integer value of the text form; empty beyond 64 labels.
    std::optional<std::uint64_t> to_integer() const {
        if (size_ > 64) return std::nullopt;
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < size_; ++i) v = (v << 1) | ((*this)[i] ? 1U : 0U);
        return v;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const BooleanFunction &, const BooleanFunction &) = default;

    /// Orders by length, then by integer value.
    friend std::strong_ordering operator<=>(const BooleanFunction &a,
                                            const BooleanFunction &b) {
        if (auto c = a.size_ <=> b.size_; c != 0) return c;
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            const std::uint64_t diff = a.words_[w] ^ b.words_[w];
            if (diff != 0) {
                // lowest differing label index is the most significant digit
                const std::uint64_t low = diff & (~diff + 1);
                return (a.words_[w] & low) ? std::strong_ordering::greater
                                           : std::strong_ordering::less;
            }
        }
        return std::strong_ordering::equal;
    }

  private:
    void clear_padding() noexcept {
        if (size_ % 64 != 0) {
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
        }
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Bit i equals popcount(i) mod 2.
inline BooleanFunction parity_function(int n) {
    if (n < 1 || n > 20) {
        throw SizeError("parity_function: n must be in [1, 20]");
    }
    BooleanFunction f(std::size_t{1} << n);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.set(i, std::popcount(i) % 2 == 1);
    }
    return f;
}

/// Lempel-Ziv (1976) phrase count, Kaspar-Schuster scan. A trailing
/// incomplete phrase counts as one phrase.
inline std::size_t lz76_phrase_count(std::span<const std::uint8_t> s) {
    const std::size_t n = s.size();
    if (n == 0) {
        throw SizeError("lz76_phrase_count: empty sequence");
    }
    if (n == 1) return 1;
    std::size_t i = 0, k = 1, l = 1, k_max = 1, c = 1;
    while (true) {
        if (s[i + k - 1] == s[l + k - 1]) {
            ++k;
            if (l + k > n) {
                ++c;
                break;
            }
        } else {
            k_max = std::max(k, k_max);
            ++i;
            if (i == l) {
                ++c;
                l += k_max;
                if (l + 1 > n) break;
                i = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    return c;
}

/// log2(len) * (N(s) + N(reverse s)) / 2, or log2(len) for constant s.
inline double lz_complexity(std::span<const std::uint8_t> bits) {
    if (bits.size() < 2) {
        throw SizeError("lz_complexity: length must be at least 2");
    }
    const double scale = std::log2(static_cast<double>(bits.size()));
    const bool constant =
        std::all_of(bits.begin(), bits.end(), [&](auto b) { return b == bits[0]; });
    if (constant) return scale;
    std::vector<std::uint8_t> rev(bits.rbegin(), bits.rend());
    const auto forward = static_cast<double>(lz76_phrase_count(bits));
    const auto backward = static_cast<double>(lz76_phrase_count(rev));
    return scale * (forward + backward) / 2.0;
}

inline double lz_complexity(const BooleanFunction &f) {
    const auto l = f.labels();
    return lz_complexity(std::span<const std::uint8_t>(l));
}

/// Binary Shannon entropy of the label distribution, in [0, 1].
inline double shannon_entropy(std::size_t ones, std::size_t length) {
    if (ones == 0 || ones == length) return 0.0;
    const double p = static_cast<double>(ones) / static_cast<double>(length);
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double shannon_entropy(const BooleanFunction &f) {
    return shannon_entropy(f.count_ones(), f.size());
}

/// min(#zeros, #ones).
inline std::size_t count_entropy(const BooleanFunction &f) {
    const std::size_t ones = f.count_ones();
    return std::min(ones, f.size() - ones);
}

struct ComplexityReport {
    double lz = 0.0;
    double shannon_entropy = 0.0;
    std::size_t count_entropy = 0;
};

inline ComplexityReport describe(const BooleanFunction &f) {
    return {lz_complexity(f), shannon_entropy(f), count_entropy(f)};
}

} // namespace qbias

template <>
struct std::hash<qbias::BooleanFunction> {
    std::size_t operator()(const qbias::BooleanFunction &f) const noexcept {
        std::uint64_t h = f.size();
        for (auto w : f.words()) h = h * 0x100000001b3ULL ^ w;
        return static_cast<std::size_t>(h);
    }
};
