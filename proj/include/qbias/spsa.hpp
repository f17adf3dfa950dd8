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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qbias/error.hpp"
#include "qbias/rng.hpp"

namespace qbias {

/// Gain sequences a_k = a / (k + 1 + A)^alpha and c_k = c / (k + 1)^gamma.
/// Defaults follow the common Qiskit SPSA settings: Spall's exponents,
/// A = 0, c = 0.2 and `a` calibrated so the first step moves each
/// parameter by about 2pi/10.
struct SpsaConfig {
    /// Unset means calibrate from the initial point; 0 freezes the iterate.
    std::optional<double> a;
    double c = 0.2;
    double alpha = 0.602;
    double gamma = 0.101;
    double stability = 0.0;
    double target_magnitude = 0.2 * 3.14159265358979323846;
    std::size_t calibration_steps = 25;
};

/// a = target / mean |(L(x + c d) - L(x - c d)) / 2c| * (A + 1)^alpha over
/// `calibration_steps` random sign vectors d drawn from streams of `seed`.
inline double spsa_calibrate(const std::function<double(std::span<const double>)> &loss,
                             std::span<const double> x, std::uint64_t seed,
                             const SpsaConfig &cfg) {
    const std::size_t p = x.size();
    std::vector<double> plus(p), minus(p);
    double avg = 0.0;
    for (std::size_t s = 0; s < cfg.calibration_steps; ++s) {
        Rng rng(seed, s);
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < p; ++i) {
            if (i % 64 == 0) bits = rng();
            const double d = (bits >> (i % 64)) & 1U ? 1.0 : -1.0;
            plus[i] = x[i] + cfg.c * d;
            minus[i] = x[i] - cfg.c * d;
        }
        avg += std::abs((loss(plus) - loss(minus)) / (2.0 * cfg.c));
    }
    avg /= static_cast<double>(std::max<std::size_t>(cfg.calibration_steps, 1));
    const double a = avg < 1e-10 ? cfg.target_magnitude : cfg.target_magnitude / avg;
    return a * std::pow(cfg.stability + 1.0, cfg.alpha);
}

/// Simultaneous-perturbation stochastic approximation. `observe(k, x)` is
/// called with the iterate before step k and once more after the last
/// step. Perturbation signs for step k come from derive_seed(seed, k).
inline std::vector<double> spsa_minimize(
    const std::function<double(std::span<const double>)> &loss, std::vector<double> x,
    std::size_t iters, std::uint64_t seed, const SpsaConfig &cfg,
    const std::function<void(std::size_t, std::span<const double>)> &observe = {}) {
    if (iters < 1) throw SizeError("spsa: iters must be >= 1");
    const double big_a = cfg.stability;
    const double a = cfg.a ? *cfg.a : spsa_calibrate(loss, x, derive_seed(seed, ~0ULL), cfg);
    const std::size_t p = x.size();
    std::vector<double> delta(p), plus(p), minus(p);
    for (std::size_t k = 0; k < iters; ++k) {
        if (observe) observe(k, x);
        const double kk = static_cast<double>(k + 1);
        const double ak = a / std::pow(kk + big_a, cfg.alpha);
        const double ck = cfg.c / std::pow(kk, cfg.gamma);
        Rng rng(seed, k);
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < p; ++i) {
            if (i % 64 == 0) bits = rng();
            delta[i] = (bits >> (i % 64)) & 1U ? 1.0 : -1.0;
            plus[i] = x[i] + ck * delta[i];
            minus[i] = x[i] - ck * delta[i];
        }
        const double diff = loss(plus) - loss(minus);
        for (std::size_t i = 0; i < p; ++i) x[i] -= ak * diff / (2.0 * ck * delta[i]);
    }
    if (observe) observe(iters, x);
    return x;
}

} // namespace qbias
