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

/// @file gen.hpp
/// Generalisation experiments: the five-bit target suite, half/half
/// splits, training by rejection sampling and SPSA loss curves.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbias/ansatz.hpp"
#include "qbias/boolfn.hpp"
#include "qbias/error.hpp"
#include "qbias/model.hpp"
#include "qbias/parallel.hpp"
#include "qbias/rng.hpp"
#include "qbias/spsa.hpp"
#include "qbias/stats.hpp"

namespace qbias::gen {

struct TargetFunction {
    int id = 0;
    BooleanFunction bits;
    std::string description;
};

/// The fixed n = 5 suite: thirteen reference targets plus one extra.
inline std::vector<TargetFunction> target_suite(int n = 5) {
    if (n != 5) throw UnsupportedError("target_suite: only n = 5 is defined");
    auto rep = [](const std::string &unit, std::size_t times) {
        std::string s;
        for (std::size_t i = 0; i < times; ++i) s += unit;
        return s;
    };
    const std::vector<std::pair<std::string, std::string>> rows = {
        {rep("0", 32), "all 0s"},
        {"01001110100010110111100001100010", "random"},
        {rep("1", 32), "all 1s"},
        {"00000000000000001000000000000000", "single 1"},
        {"11110111111111111111111111011111", "two 0s"},
        {"10000001110101011000101111010000", "ZZ sample"},
        {"01101001100101101001011001101001", "parity"},
        {rep("01", 16), "01 repeated"},
        {rep("10", 16), "10 repeated"},
        {rep("1", 16) + rep("0", 16), "1s then 0s"},
        {rep("0", 16) + rep("1", 16), "0s then 1s"},
        {rep("1110", 8), "length 4 unit repeated 8 times"},
        {rep("01011111", 4), "length 8 unit repeated 4 times"},
        {"01000001000000101000000000100000", "ZZ sample"},
    };
    std::vector<TargetFunction> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back({static_cast<int>(i + 1), BooleanFunction::from_string(rows[i].first),
                       rows[i].second});
    }
    return out;
}

inline TargetFunction find_target(int id) {
    for (auto &t : target_suite()) {
        if (t.id == id) return t;
    }
    throw UsageError("unknown target id " + std::to_string(id) + " (expected 1..14)");
}

struct Split {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;

    /// Test set is the complement of `train` in [0, 2^n).
    static Split from_train(int n, std::vector<std::size_t> train) {
        const std::size_t len = std::size_t{1} << n;
        std::vector<std::uint8_t> in(len, 0);
        for (auto i : train) {
            if (i >= len || in[i]) throw SizeError("Split: bad or repeated train index");
            in[i] = 1;
        }
        Split s;
        std::sort(train.begin(), train.end());
        s.train_indices = std::move(train);
        for (std::size_t i = 0; i < len; ++i) {
            if (!in[i]) s.test_indices.push_back(i);
        }
        return s;
    }
};

/// Uniform half/half partition (Fisher-Yates), both halves sorted.
inline Split make_split(int n, std::uint64_t seed) {
    if (n < 1 || n > 20) throw SizeError("make_split: n must be in [1, 20]");
    const std::size_t len = std::size_t{1} << n;
    std::vector<std::size_t> idx(len);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = len - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
    idx.resize(len / 2);
    return Split::from_train(n, std::move(idx));
}

/// Fraction of `indices` whose predicted label differs from the target.
inline double label_error(QnnModel::Bound &b, const BooleanFunction &target,
                          std::span<const std::size_t> indices) {
    std::size_t wrong = 0;
    for (auto i : indices) wrong += b.label(i) != target[i];
    return static_cast<double>(wrong) / static_cast<double>(indices.size());
}

struct TrainResult {
    std::optional<ParamVector> params;
    std::size_t attempts_used = 0;
    /// 0 on success; otherwise the best training error seen.
    double train_error = 1.0;
    std::optional<double> test_error;
};

/// Attempt a draws its parameters from derive_seed(seed, a); stops at the
/// first vector with zero training error.
inline TrainResult rejection_train(const QnnModel &model, const BooleanFunction &target,
                                   const Split &split, std::size_t budget, std::uint64_t seed,
                                   ParamRange range = {}) {
    if (budget < 1) throw SizeError("rejection_train: budget must be >= 1");
    if (target.size() != model.num_inputs()) throw SizeError("rejection_train: target length");
    TrainResult r;
    for (std::size_t a = 0; a < budget; ++a) {
        Rng rng(seed, a);
        auto params = sample_parameters(model.ansatz(), rng, range);
        auto b = model.bind(params);
        const double err = label_error(b, target, split.train_indices);
        r.train_error = std::min(r.train_error, err);
        if (err == 0.0) {
            r.attempts_used = a + 1;
            r.test_error = label_error(b, target, split.test_indices);
            r.params = std::move(params);
            return r;
        }
    }
    r.attempts_used = budget;
    return r;
}

struct GenRow {
    int target_id = 0;
    double complexity = 0.0;
    double entropy = 0.0;
    std::size_t count_entropy = 0;
    double mean_test_error = 0.0;
    double std_test_error = 0.0;
    std::size_t successes = 0;
    std::size_t repeats = 0;
    std::vector<double> test_errors;
};

/// Per target, `repeats` rounds of {make_split, rejection_train}. Round r
/// of target t uses streams 2r and 2r+1 of derive_seed(seed, t.id), so the
/// splits do not depend on the encoder. Means and standard deviations are
/// over successes only.
inline std::vector<GenRow> generalisation_table(const QnnModel &model,
                                                const std::vector<TargetFunction> &targets,
                                                std::size_t repeats, std::size_t budget,
                                                std::uint64_t seed, ParamRange range = {},
                                                std::size_t workers = 1) {
    if (repeats < 1) throw SizeError("generalisation_table: repeats must be >= 1");
    const std::size_t jobs = targets.size() * repeats;
    std::vector<std::optional<double>> errors(jobs);
    parallel_chunks(jobs, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t j = begin; j < end; ++j) {
            const auto &t = targets[j / repeats];
            const std::size_t r = j % repeats;
            const std::uint64_t base = derive_seed(seed, static_cast<std::uint64_t>(t.id));
            const auto split = make_split(model.n(), derive_seed(base, 2 * r));
            errors[j] = rejection_train(model, t.bits, split, budget,
                                        derive_seed(base, 2 * r + 1), range)
                            .test_error;
        }
    });
    std::vector<GenRow> rows;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        GenRow row;
        row.target_id = targets[ti].id;
        row.complexity = lz_complexity(targets[ti].bits);
        row.entropy = shannon_entropy(targets[ti].bits);
        row.count_entropy = count_entropy(targets[ti].bits);
        row.repeats = repeats;
        for (std::size_t r = 0; r < repeats; ++r) {
            if (const auto &e = errors[ti * repeats + r]) row.test_errors.push_back(*e);
        }
        row.successes = row.test_errors.size();
        // No successful split means no estimate, not a perfect score.
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.mean_test_error = row.successes ? stats::mean(row.test_errors) : nan;
        row.std_test_error = row.successes ? stats::stddev(row.test_errors) : nan;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// 1 - l * expval with l = +1 for label 0 and -1 for label 1.
constexpr double qnn_loss(double expval, std::uint8_t label) noexcept {
    return 1.0 - (label ? -1.0 : 1.0) * expval;
}

inline double mean_loss(const QnnModel &model, std::span<const double> params,
                        const BooleanFunction &target, std::span<const std::size_t> indices) {
    auto b = model.bind(params);
    double acc = 0.0;
    for (auto i : indices) acc += qnn_loss(b.expectation(i), target[i]);
    return acc / static_cast<double>(indices.size());
}

struct LossPoint {
    std::size_t iter = 0;
    double loss = 0.0;
    double train_error = 0.0;
};

struct SpsaRun {
    std::vector<LossPoint> curve;
    TrainResult result;
};

/// Initial parameters are drawn uniformly from `range` with stream 0 of
/// `seed`; perturbations use stream 1. The curve has iters + 1 points.
inline SpsaRun spsa_train(const QnnModel &model, const BooleanFunction &target,
                          const Split &split, std::size_t iters, std::uint64_t seed,
                          ParamRange range = {}, const SpsaConfig &cfg = {}) {
    if (iters < 1) throw SizeError("spsa_train: iters must be >= 1");
    Rng init(seed, 0);
    auto x0 = sample_parameters(model.ansatz(), init, range);
    SpsaRun run;
    auto loss = [&](std::span<const double> p) {
        return mean_loss(model, p, target, split.train_indices);
    };
    auto observe = [&](std::size_t k, std::span<const double> p) {
        auto b = model.bind(p);
        run.curve.push_back({k, loss(p), label_error(b, target, split.train_indices)});
    };
    auto x = spsa_minimize(loss, std::move(x0), iters, derive_seed(seed, 1), cfg, observe);
    auto b = model.bind(x);
    run.result.attempts_used = iters;
    run.result.train_error = label_error(b, target, split.train_indices);
    if (run.result.train_error == 0.0) {
        run.result.test_error = label_error(b, target, split.test_indices);
    }
    run.result.params = std::move(x);
    return run;
}

/// First iteration whose loss is below `threshold`, or the last iteration
/// index when never reached (censored).
inline std::size_t iterations_to_loss(std::span<const LossPoint> curve, double threshold) {
    for (const auto &p : curve) {
        if (p.loss < threshold) return p.iter;
    }
    return curve.empty() ? 0 : curve.back().iter;
}

} // namespace qbias::gen
