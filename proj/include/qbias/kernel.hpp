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

/// @file kernel.hpp
/// Fidelity kernels of the encoders and the Gaussian-process prior they
/// induce over Boolean functions.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbias/boolfn.hpp"
#include "qbias/encode.hpp"
#include "qbias/error.hpp"
#include "qbias/parallel.hpp"
#include "qbias/prior.hpp"
#include "qbias/qsim.hpp"
#include "qbias/rng.hpp"

namespace qbias::kernel {

/// Eigenvalues below this are treated as zero when sampling.
inline constexpr double kClipThreshold = 1e-10;
/// Most negative eigenvalue accepted as numerical noise.
inline constexpr double kPsdTolerance = 1e-8;
inline constexpr double kSymmetryTolerance = 1e-10;

struct KernelMatrix {
    int n = 0;
    /// Row i corresponds to truth-table position positions[i].
    std::vector<std::size_t> positions;
    std::vector<BooleanInput> labels;
    Eigen::MatrixXd entries;
    /// Truth-table positions absent from the kernel (label fixed to 0).
    std::vector<std::size_t> fixed_zero;

    std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }

    /// Wraps an arbitrary square matrix over the first m inputs of an
    /// n-bit table, m = 2^n.
    static KernelMatrix from_matrix(Eigen::MatrixXd m) {
        if (m.rows() != m.cols()) throw MatrixError("kernel matrix must be square");
        const auto size = static_cast<std::size_t>(m.rows());
        if (size == 0 || (size & (size - 1)) != 0) {
            throw SizeError("kernel matrix size must be a power of two");
        }
        KernelMatrix k;
        k.n = std::countr_zero(size);
        for (std::size_t i = 0; i < size; ++i) {
            k.positions.push_back(i);
            k.labels.push_back(input_from_index(i, k.n));
        }
        k.entries = std::move(m);
        return k;
    }
};

/// |<phi(x_i)|phi(x_j)>|^2 over every encodable input; upper triangle
/// computed then mirrored so the result is exactly symmetric.
inline KernelMatrix kernel_matrix(const EncodingMethod &method, int n, std::size_t workers = 1) {
    if (n < 1 || n > 12) throw SizeError("kernel_matrix: n must be in [1, 12]");
    const Encoder enc(method, n);
    KernelMatrix k;
    k.n = n;
    std::vector<Statevector> states;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
        const auto x = input_from_index(i, n);
        if (!enc.encodable(x)) {
            k.fixed_zero.push_back(i);
            continue;
        }
        k.positions.push_back(i);
        k.labels.push_back(x);
        states.push_back(enc.encode(x).state);
    }
    const auto m = static_cast<Eigen::Index>(states.size());
    k.entries = Eigen::MatrixXd::Identity(m, m);
    parallel_chunks(states.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = i + 1; j < states.size(); ++j) {
                k.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    fidelity(states[i], states[j]);
            }
        }
    });
    k.entries.triangularView<Eigen::StrictlyLower>() = k.entries.transpose();
    return k;
}

inline void check_symmetric(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols()) throw MatrixError("kernel matrix must be square");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance) {
        throw MatrixError("kernel matrix is not symmetric (max |K - K^T| = " +
                          std::to_string(asym) + ")");
    }
}

/// Real spectrum in descending order.
inline Eigen::VectorXd kernel_eigenvalues(const KernelMatrix &k) {
    check_symmetric(k.entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.entries, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw MatrixError("kernel eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues().reverse();
    if (ev.size() > 0 && ev(ev.size() - 1) < -kPsdTolerance) {
        throw MatrixError("kernel matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(ev(ev.size() - 1)) + ")");
    }
    return ev;
}

struct GpSample {
    Eigen::VectorXd values;
    /// Bit i is 1 iff values_i < 0.
    std::vector<std::uint8_t> thresholded;
};

/// Zero-mean multivariate normal with covariance K, factored once as
/// V sqrt(max(lambda, 0)) with eigenvalues under the clip threshold dropped.
class GpSampler {
  public:
    explicit GpSampler(const KernelMatrix &k) : kernel_(&k) {
        check_symmetric(k.entries);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.entries);
        if (es.info() != Eigen::Success) throw MatrixError("kernel eigendecomposition failed");
        Eigen::VectorXd root = es.eigenvalues();
        if (root.size() > 0 && root.minCoeff() < -kPsdTolerance) {
            throw MatrixError("kernel matrix is not positive semidefinite");
        }
        for (Eigen::Index i = 0; i < root.size(); ++i) {
            root(i) = root(i) < kClipThreshold ? 0.0 : std::sqrt(root(i));
        }
        factor_ = es.eigenvectors() * root.asDiagonal();
    }

    GpSample sample(std::uint64_t seed) const {
        Rng rng(seed);
        std::normal_distribution<double> normal;
        Eigen::VectorXd z(factor_.cols());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
        GpSample s;
        s.values = factor_ * z;
        s.thresholded.resize(static_cast<std::size_t>(s.values.size()));
        for (Eigen::Index i = 0; i < s.values.size(); ++i) {
            s.thresholded[static_cast<std::size_t>(i)] = s.values(i) < 0.0 ? 1 : 0;
        }
        return s;
    }

    /// Full truth table: kernel rows at their positions, dropped inputs 0.
    BooleanFunction sample_function(std::uint64_t seed) const {
        const auto s = sample(seed);
        BooleanFunction f(std::size_t{1} << kernel_->n);
        for (std::size_t i = 0; i < s.thresholded.size(); ++i) {
            f.set(kernel_->positions[i], s.thresholded[i] != 0);
        }
        return f;
    }

  private:
    const KernelMatrix *kernel_;
    Eigen::MatrixXd factor_;
};

inline GpSample gp_sample(const KernelMatrix &k, std::uint64_t seed) {
    return GpSampler(k).sample(seed);
}

/// Sample k is drawn with derive_seed(seed, k).
inline prior::PriorStats kernel_prior(const KernelMatrix &k, std::uint64_t samples,
                                      std::uint64_t seed, std::size_t workers = 1) {
    if (samples < 1) throw SizeError("kernel_prior: samples must be >= 1");
    const GpSampler sampler(k);
    std::vector<prior::PriorStats> partial(std::max<std::size_t>(workers, 1));
    parallel_chunks(samples, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        for (std::size_t i = begin; i < end; ++i) {
            partial[w].add(sampler.sample_function(derive_seed(seed, i)));
        }
    });
    prior::PriorStats out;
    out.n = k.n;
    out.fixed_zero_label = !k.fixed_zero.empty();
    for (const auto &p : partial) out.merge(p);
    return out;
}

} // namespace qbias::kernel
