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

/// @file prior.hpp
/// Priors over Boolean functions: sample random-parameter classifiers and
/// tabulate P(f), P(K), rank-frequency and entropy/complexity cells.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "qbias/ansatz.hpp"
#include "qbias/boolfn.hpp"
#include "qbias/encode.hpp"
#include "qbias/model.hpp"
#include "qbias/parallel.hpp"
#include "qbias/rng.hpp"
#include "qbias/stats.hpp"

namespace qbias::prior {

/// Multiset of sampled functions.
struct PriorStats {
    int n = 0;
    std::uint64_t total_samples = 0;
    /// Ordered by function integer value.
    std::map<BooleanFunction, std::uint64_t> counts;
    /// Set when label 0 was pinned for an unencodable input.
    bool fixed_zero_label = false;

    void add(const BooleanFunction &f, std::uint64_t c = 1) {
        counts[f] += c;
        total_samples += c;
    }

    void merge(const PriorStats &other) {
        for (const auto &[f, c] : other.counts) counts[f] += c;
        total_samples += other.total_samples;
        fixed_zero_label = fixed_zero_label || other.fixed_zero_label;
    }

    double probability(const BooleanFunction &f) const {
        const auto it = counts.find(f);
        return it == counts.end() ? 0.0
                                  : static_cast<double>(it->second) /
                                        static_cast<double>(total_samples);
    }

    std::uint64_t count(const BooleanFunction &f) const {
        const auto it = counts.find(f);
        return it == counts.end() ? 0 : it->second;
    }
};

struct SamplerConfig {
    EncodingMethod encoder;
    AnsatzSpec ansatz;
    int n = 3;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    ParamRange range;
    std::size_t workers = 1;
};

/// Labels every input for one parameter vector.
inline BooleanFunction sample_function(const QnnModel &model, std::span<const double> params) {
    return model.sample_function(params);
}

/// Draws `samples` i.i.d. parameter vectors (sample k from stream k of
/// `seed`) and counts the resulting functions.
inline PriorStats estimate_prior(const QnnModel &model, std::uint64_t samples,
                                 std::uint64_t seed, ParamRange range = {},
                                 std::size_t workers = 1) {
    std::vector<PriorStats> partial(std::max<std::size_t>(workers, 1));
    parallel_chunks(samples, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        auto &local = partial[w];
        for (std::size_t k = begin; k < end; ++k) {
            Rng rng(seed, k);
            const auto params = sample_parameters(model.ansatz(), rng, range);
            local.add(model.sample_function(params));
        }
    });
    PriorStats out;
    out.n = model.n();
    out.fixed_zero_label = !model.fixed_zero_inputs().empty();
    for (const auto &p : partial) out.merge(p);
    return out;
}

inline PriorStats estimate_prior(const SamplerConfig &cfg) {
    const QnnModel model(cfg.encoder, cfg.ansatz, cfg.n);
    return estimate_prior(model, cfg.samples, cfg.seed, cfg.range, cfg.workers);
}

struct PfRow {
    BooleanFunction function;
    double complexity = 0.0;
    std::uint64_t count = 0;
    double probability = 0.0;
};

/// One row per observed function, ascending by function value.
inline std::vector<PfRow> prob_vs_complexity(const PriorStats &s) {
    if (s.total_samples == 0) throw SizeError("prob_vs_complexity: empty prior");
    std::vector<PfRow> rows;
    rows.reserve(s.counts.size());
    for (const auto &[f, c] : s.counts) {
        rows.push_back({f, lz_complexity(f), c,
                        static_cast<double>(c) / static_cast<double>(s.total_samples)});
    }
    return rows;
}

struct PkRow {
    double complexity = 0.0;
    double probability = 0.0;
};

inline std::vector<PkRow> prob_of_complexity(const PriorStats &s) {
    if (s.total_samples == 0) throw SizeError("prob_of_complexity: empty prior");
    std::map<double, std::uint64_t> by_k;
    for (const auto &[f, c] : s.counts) by_k[lz_complexity(f)] += c;
    std::vector<PkRow> rows;
    for (const auto &[k, c] : by_k) {
        rows.push_back({k, static_cast<double>(c) / static_cast<double>(s.total_samples)});
    }
    return rows;
}

struct RankRow {
    std::size_t rank = 0;
    BooleanFunction function;
    double probability = 0.0;
    double zipf = 0.0;
};

/// 1 / (ln(2^(2^n)) * rank).
inline double zipf_reference(int n, std::size_t rank) {
    return 1.0 / (std::ldexp(1.0, n) * std::numbers::ln2 * static_cast<double>(rank));
}

/// Descending frequency, ties by ascending function value.
inline std::vector<RankRow> rank_table(const PriorStats &s) {
    if (s.total_samples == 0) throw SizeError("rank_table: empty prior");
    std::vector<std::pair<const BooleanFunction *, std::uint64_t>> items;
    items.reserve(s.counts.size());
    for (const auto &[f, c] : s.counts) items.emplace_back(&f, c);
    std::stable_sort(items.begin(), items.end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });
    std::vector<RankRow> rows;
    rows.reserve(items.size());
    for (std::size_t r = 0; r < items.size(); ++r) {
        rows.push_back({r + 1, *items[r].first,
                        static_cast<double>(items[r].second) / static_cast<double>(s.total_samples),
                        zipf_reference(s.n, r + 1)});
    }
    return rows;
}

struct EntropyCell {
    double complexity = 0.0;
    double entropy = 0.0;
    std::size_t count_entropy = 0;
    std::uint64_t max_count = 0;
};

/// Groups observed functions by (K, entropy) and keeps the largest
/// per-function count in each cell. Entropy is keyed exactly through the
/// number of minority labels.
inline std::vector<EntropyCell> entropy_complexity_histogram(const PriorStats &s) {
    if (s.total_samples == 0) throw SizeError("entropy_complexity_histogram: empty prior");
    std::map<std::pair<double, std::size_t>, EntropyCell> cells;
    for (const auto &[f, c] : s.counts) {
        const double k = lz_complexity(f);
        const std::size_t ce = count_entropy(f);
        auto &cell = cells[{k, ce}];
        cell.complexity = k;
        cell.count_entropy = ce;
        cell.entropy = shannon_entropy(ce, f.size());
        cell.max_count = std::max(cell.max_count, c);
    }
    std::vector<EntropyCell> rows;
    for (const auto &[key, cell] : cells) rows.push_back(cell);
    return rows;
}

/// Spearman correlation between log P(f) and K across observed functions.
/// Negative values mean simpler functions are more likely.
inline double simplicity_correlation(const PriorStats &s) {
    std::vector<double> logp, k;
    for (const auto &row : prob_vs_complexity(s)) {
        logp.push_back(std::log(row.probability));
        k.push_back(row.complexity);
    }
    return stats::spearman(logp, k);
}

/// Weights of the one-hidden-layer baseline network.
struct MlpWeights {
    int n = 0;
    int width = 0;
    std::vector<double> w1; // width x n, row-major
    std::vector<double> b1; // width
    std::vector<double> w2; // width
    double b2 = 0.0;

    static MlpWeights zeros(int n, int width) {
        return {n, width, std::vector<double>(static_cast<std::size_t>(n * width), 0.0),
                std::vector<double>(static_cast<std::size_t>(width), 0.0),
                std::vector<double>(static_cast<std::size_t>(width), 0.0), 0.0};
    }

    /// Gaussian weights and biases with std 1/sqrt(fan_in) per layer.
    static MlpWeights random(int n, int width, Rng &rng) {
        MlpWeights m = zeros(n, width);
        std::normal_distribution<double> hidden(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
        std::normal_distribution<double> output(0.0, 1.0 / std::sqrt(static_cast<double>(width)));
        for (auto &v : m.w1) v = hidden(rng);
        for (auto &v : m.b1) v = hidden(rng);
        for (auto &v : m.w2) v = output(rng);
        m.b2 = output(rng);
        return m;
    }
};

/// ReLU hidden layer, sigmoid output; output >= 0.5 labels 1.
inline BooleanFunction mlp_function(const MlpWeights &m) {
    const std::size_t len = std::size_t{1} << m.n;
    BooleanFunction f(len);
    std::vector<double> h(static_cast<std::size_t>(m.width));
    for (std::size_t i = 0; i < len; ++i) {
        const auto x = input_from_index(i, m.n);
        double out = m.b2;
        for (int j = 0; j < m.width; ++j) {
            double a = m.b1[static_cast<std::size_t>(j)];
            for (int q = 0; q < m.n; ++q) {
                a += m.w1[static_cast<std::size_t>(j * m.n + q)] * x[static_cast<std::size_t>(q)];
            }
            out += m.w2[static_cast<std::size_t>(j)] * std::max(a, 0.0);
        }
        const double y = 1.0 / (1.0 + std::exp(-out));
        f.set(i, y >= 0.5);
    }
    return f;
}

inline PriorStats mlp_prior_baseline(int n, int hidden_width, std::uint64_t samples,
                                     std::uint64_t seed, std::size_t workers = 1) {
    if (hidden_width < 1) throw SizeError("mlp_prior_baseline: hidden width must be >= 1");
    if (n < 1 || n > 20) throw SizeError("mlp_prior_baseline: n out of range");
    std::vector<PriorStats> partial(std::max<std::size_t>(workers, 1));
    parallel_chunks(samples, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        for (std::size_t k = begin; k < end; ++k) {
            Rng rng(seed, k);
            partial[w].add(mlp_function(MlpWeights::random(n, hidden_width, rng)));
        }
    });
    PriorStats out;
    out.n = n;
    for (const auto &p : partial) out.merge(p);
    return out;
}

/// Every label an independent fair coin.
inline PriorStats random_learner_baseline(int n, std::uint64_t samples, std::uint64_t seed,
                                          std::size_t workers = 1) {
    if (n < 1 || n > 20) throw SizeError("random_learner_baseline: n out of range");
    const std::size_t len = std::size_t{1} << n;
    std::vector<PriorStats> partial(std::max<std::size_t>(workers, 1));
    parallel_chunks(samples, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        for (std::size_t k = begin; k < end; ++k) {
            Rng rng(seed, k);
            BooleanFunction f(len);
            for (std::size_t i = 0; i < len; i += 64) {
                const std::uint64_t word = rng();
                for (std::size_t b = 0; b < 64 && i + b < len; ++b) f.set(i + b, (word >> b) & 1U);
            }
            partial[w].add(f);
        }
    });
    PriorStats out;
    out.n = n;
    for (const auto &p : partial) out.merge(p);
    return out;
}

} // namespace qbias::prior
