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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "qbias/kernel.hpp"
#include "qbias/prior.hpp"

namespace {

using namespace qbias;
using prior::PriorStats;

QnnModel boolqnn(EncodingMethod m, int n) {
    return QnnModel(m, AnsatzSpec::boolean_qnn(data_qubits(m, n)), n);
}

TEST(SampleFunction, IdentityAndSingleBlock) {
    const auto m = boolqnn(EncodingMethod::basis(), 3);
    std::vector<double> p;
    for (int u = 0; u < 8; ++u) p.insert(p.end(), {0.0, std::numbers::pi, std::numbers::pi});
    EXPECT_EQ(prior::sample_function(m, p).to_string(), "00000000");
    p[21] = std::numbers::pi;
    p[22] = 0.0;
    EXPECT_EQ(prior::sample_function(m, p).to_string(), "00000001");
}

// Per-input outputs (+, -, -, +) threshold to 0110.
TEST(SampleFunction, FourInputMapping) {
    const std::vector<double> e = {0.4, -0.2, -0.9, 0.0};
    std::string s;
    for (double v : e) s.push_back(threshold_label(v) ? '1' : '0');
    EXPECT_EQ(s, "0110");
}

TEST(Prior, SingleSample) {
    const auto s = prior::estimate_prior(boolqnn(EncodingMethod::basis(), 3), 1, 9);
    EXPECT_EQ(s.total_samples, 1u);
    ASSERT_EQ(s.counts.size(), 1u);
    const auto rows = prior::prob_vs_complexity(s);
    EXPECT_EQ(rows[0].probability, 1.0);
    EXPECT_EQ(prior::prob_of_complexity(s)[0].probability, 1.0);
}

TEST(Prior, BasisEncodingIsUniform) {
    const std::uint64_t samples = 100000;
    const auto s = prior::estimate_prior(boolqnn(EncodingMethod::basis(), 3), samples, 7);
    const double p = 1.0 / 256.0;
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(samples));
    EXPECT_EQ(s.counts.size(), 256u);
    for (const auto &[f, c] : s.counts) {
        EXPECT_LT(std::abs(static_cast<double>(c) / samples - p), 5 * se) << f.to_string();
    }
}

TEST(Prior, AmplitudeAllZerosFrequency) {
    const auto s = prior::estimate_prior(boolqnn(EncodingMethod::amplitude(), 5), 10000, 42);
    const double p0 = s.probability(BooleanFunction(32));
    EXPECT_GE(p0, 1e-3);
    EXPECT_LE(p0, 1e-1);
    EXPECT_TRUE(s.fixed_zero_label);
    EXPECT_LT(prior::simplicity_correlation(s), 0.0);
}

TEST(Prior, WorkerCountDoesNotChangeCounts) {
    const auto m = boolqnn(EncodingMethod::zz(), 4);
    const auto a = prior::estimate_prior(m, 3000, 5, {}, 1);
    const auto b = prior::estimate_prior(m, 3000, 5, {}, 3);
    EXPECT_EQ(a.counts, b.counts);
    const auto c = prior::mlp_prior_baseline(3, 8, 500, 2, 1);
    const auto d = prior::mlp_prior_baseline(3, 8, 500, 2, 4);
    EXPECT_EQ(c.counts, d.counts);
}

PriorStats synthetic(const std::vector<std::string> &fs, std::uint64_t each) {
    PriorStats s;
    s.n = 2;
    for (const auto &f : fs) s.add(BooleanFunction::from_string(f), each);
    return s;
}

TEST(Tables, UniformSynthetic) {
    const auto s = synthetic({"0000", "0110", "1010", "1111"}, 5);
    for (const auto &r : prior::prob_vs_complexity(s)) EXPECT_DOUBLE_EQ(r.probability, 0.25);
    const auto ranks = prior::rank_table(s);
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        EXPECT_EQ(ranks[i].rank, i + 1);
        EXPECT_DOUBLE_EQ(ranks[i].probability, 0.25);
    }
    double total = 0;
    for (const auto &r : prior::prob_of_complexity(s)) total += r.probability;
    EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(Tables, RankOrderAndZipf) {
    PriorStats s;
    s.n = 5;
    s.add(BooleanFunction::from_string(std::string(32, '1')), 3);
    s.add(BooleanFunction::from_string(std::string(32, '0')), 7);
    const auto r = prior::rank_table(s);
    EXPECT_EQ(r[0].function.to_string(), std::string(32, '0'));
    EXPECT_NEAR(prior::zipf_reference(5, 1), 1.0 / (32 * std::numbers::ln2), 1e-15);
    EXPECT_NEAR(r[0].zipf, 0.0451, 1e-4);
    EXPECT_THROW(prior::rank_table(PriorStats{}), SizeError);
}

TEST(Tables, EntropyHistogram) {
    const auto one = synthetic({"0110"}, 10);
    const auto cells = prior::entropy_complexity_histogram(one);
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_EQ(cells[0].max_count, 10u);
    EXPECT_DOUBLE_EQ(cells[0].entropy, 1.0);
}

TEST(Baselines, ZeroMlpIsConstant) {
    const auto f = prior::mlp_function(prior::MlpWeights::zeros(4, 16));
    EXPECT_TRUE(f.count_ones() == 0 || f.count_ones() == f.size());
    const auto s = prior::mlp_prior_baseline(5, 64, 2000, 3);
    std::uint64_t total = 0;
    for (const auto &[g, c] : s.counts) total += c;
    EXPECT_EQ(total, 2000u);
    EXPECT_LT(prior::simplicity_correlation(s), 0.0);
}

TEST(Baselines, RandomLearner) {
    const std::uint64_t samples = 20000;
    const auto s = prior::random_learner_baseline(5, samples, 4);
    std::vector<double> ones(32, 0.0);
    for (const auto &[f, c] : s.counts)
        for (std::size_t i = 0; i < 32; ++i) ones[i] += f[i] ? static_cast<double>(c) : 0.0;
    for (double o : ones) EXPECT_LT(std::abs(o / samples - 0.5), 5 / std::sqrt(double(samples)));
    std::uint64_t max_count = 0;
    for (const auto &[f, c] : s.counts) max_count = std::max(max_count, c);
    EXPECT_LE(max_count, 2u);
    // Mass concentrates at high complexity.
    double low = 0, high = 0;
    for (const auto &r : prior::prob_of_complexity(s)) (r.complexity < 30 ? low : high) += r.probability;
    EXPECT_GT(high, low);
}

// Kernel.

TEST(Kernel, BasisIsIdentity) {
    const auto k = kernel::kernel_matrix(EncodingMethod::basis(), 2);
    EXPECT_EQ(k.entries, Eigen::MatrixXd::Identity(4, 4));
    const auto ev = kernel::kernel_eigenvalues(k);
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-12);
    const auto k4 = kernel::kernel_matrix(EncodingMethod::basis(), 4);
    const auto ev4 = kernel::kernel_eigenvalues(k4);
    EXPECT_NEAR(ev4.maxCoeff() - ev4.minCoeff(), 0.0, 1e-12);
}

TEST(Kernel, AmplitudeFixture) {
    const auto k = kernel::kernel_matrix(EncodingMethod::amplitude(), 2);
    Eigen::Matrix3d want;
    want << 1, 0, 0.5, 0, 1, 0.5, 0.5, 0.5, 1;
    ASSERT_EQ(k.size(), 3u);
    EXPECT_LT((k.entries - want).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(k.fixed_zero, std::vector<std::size_t>{0});
}

TEST(Kernel, ZZFixture) {
    const auto k = kernel::kernel_matrix(EncodingMethod::zz(), 2);
    EXPECT_NEAR(k.entries(0, 1), 0.167, 1e-3);
    EXPECT_NEAR(k.entries(0, 3), 0.325, 1e-3);
    EXPECT_NEAR(k.entries(1, 2), 0.043, 1e-3);
    EXPECT_NEAR(k.entries(1, 3), 0.254, 1e-3);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(k.entries(i, i), 1.0, 1e-12);
}

// Closed-form eigenvalues of a symmetric 3x3 from its characteristic
// polynomial (trigonometric solution of the depressed cubic).
std::vector<double> cubic_eigenvalues(const Eigen::Matrix3d &a) {
    const double q = a.trace() / 3;
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2 * p1;
    const double p = std::sqrt(p2 / 6);
    const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
    const double r = std::clamp(b.determinant() / 2, -1.0, 1.0);
    const double phi = std::acos(r) / 3;
    const double e1 = q + 2 * p * std::cos(phi);
    const double e3 = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
    return {e1, 3 * q - e1 - e3, e3};
}

TEST(Kernel, EigenvaluesMatchCharacteristicPolynomial) {
    const auto k = kernel::kernel_matrix(EncodingMethod::amplitude(), 2);
    const auto ev = kernel::kernel_eigenvalues(k);
    const auto want = cubic_eigenvalues(k.entries);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), want[static_cast<std::size_t>(i)], 1e-12);
    EXPECT_NEAR(ev(0), 1 + std::sqrt(0.5), 1e-12);
}

TEST(Kernel, MatrixErrors) {
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
    asym(0, 1) = 0.3;
    EXPECT_THROW(kernel::kernel_eigenvalues(kernel::KernelMatrix::from_matrix(asym)), MatrixError);
    Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(2, 2);
    neg(1, 1) = -0.5;
    EXPECT_THROW(kernel::kernel_eigenvalues(kernel::KernelMatrix::from_matrix(neg)), MatrixError);
}

TEST(Kernel, WorkerCountDoesNotChangeMatrix) {
    const auto a = kernel::kernel_matrix(EncodingMethod::zz(), 4, 1);
    const auto b = kernel::kernel_matrix(EncodingMethod::zz(), 4, 3);
    EXPECT_EQ(a.entries, b.entries);
}

TEST(Gp, IdentityKernelGivesFairBits) {
    const auto k = kernel::KernelMatrix::from_matrix(Eigen::MatrixXd::Identity(8, 8));
    const kernel::GpSampler g(k);
    const int samples = 20000;
    std::vector<double> ones(8, 0);
    for (int s = 0; s < samples; ++s) {
        const auto x = g.sample(derive_seed(3, s));
        for (int i = 0; i < 8; ++i) ones[i] += x.thresholded[i];
    }
    for (double o : ones) EXPECT_LT(std::abs(o / samples - 0.5), 5 / std::sqrt(double(samples)));
}

TEST(Gp, RankOneKernelGivesConstantSamples) {
    const auto k = kernel::KernelMatrix::from_matrix(Eigen::MatrixXd::Ones(4, 4));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = kernel::gp_sample(k, seed);
        EXPECT_LT(x.values.maxCoeff() - x.values.minCoeff(), 1e-9);
        for (auto b : x.thresholded) EXPECT_EQ(b, x.thresholded[0]);
    }
}

TEST(Gp, KernelPriors) {
    const auto one = kernel::kernel_prior(kernel::kernel_matrix(EncodingMethod::basis(), 3), 1, 0);
    EXPECT_EQ(one.total_samples, 1u);
    const auto basis = kernel::kernel_prior(kernel::kernel_matrix(EncodingMethod::basis(), 5), 10000, 1);
    for (const auto &r : prior::rank_table(basis)) EXPECT_LE(r.probability, 2e-4);
    const auto amp = kernel::kernel_matrix(EncodingMethod::amplitude(), 5);
    const auto amp_prior = kernel::kernel_prior(amp, 10000, 2);
    EXPECT_LT(prior::simplicity_correlation(amp_prior), 0.0);
    for (const auto &[f, c] : amp_prior.counts) EXPECT_FALSE(f[0]);
    const auto zz = kernel::kernel_prior(kernel::kernel_matrix(EncodingMethod::zz(), 5), 10000, 3);
    EXPECT_EQ(zz.count(parity_function(5)), 0u);
    const auto zz3 = kernel::kernel_prior(kernel::kernel_matrix(EncodingMethod::zz(), 5), 10000, 3, 3);
    EXPECT_EQ(zz.counts, zz3.counts);
}

} // namespace
