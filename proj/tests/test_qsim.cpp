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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qbias/encode.hpp"
#include "qbias/qsim.hpp"

namespace {

using namespace qbias;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

Eigen::Matrix2cd mat(const Mat2 &m) {
    Eigen::Matrix2cd e;
    e << m[0], m[1], m[2], m[3];
    return e;
}

// Dense oracle: act on every basis state by reading bits directly, with
// qubit 0 as the most significant bit.
Eigen::MatrixXcd dense_controlled(int nq, const std::vector<int> &controls, int target,
                                  const Eigen::Matrix2cd &u) {
    const std::size_t d = std::size_t{1} << nq;
    auto bit = [&](std::size_t i, int q) { return (i >> (nq - 1 - q)) & 1U; };
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        bool on = true;
        for (int c : controls) on = on && bit(j, c);
        if (!on) {
            m(j, j) = 1;
            continue;
        }
        const std::size_t b = bit(j, target);
        const std::size_t flip = j ^ (std::size_t{1} << (nq - 1 - target));
        m(j, j) = u(b, b);
        m(flip, j) = u(1 - b, b);
    }
    return m;
}

Eigen::VectorXcd vec(const Statevector &s) {
    Eigen::VectorXcd v(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) v(i) = s[i];
    return v;
}

Statevector random_state(int nq, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cd> a(std::size_t{1} << nq);
    double norm = 0;
    for (auto &x : a) {
        x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        norm += std::norm(x);
    }
    for (auto &x : a) x /= std::sqrt(norm);
    return Statevector::from_amplitudes(a);
}

TEST(Statevector, ZeroState) {
    EXPECT_EQ(zero_state(1).dim(), 2u);
    EXPECT_EQ(zero_state(2)[0], cd(1, 0));
    EXPECT_EQ(zero_state(2)[3], cd(0, 0));
    EXPECT_NEAR(zero_state(3).norm_squared(), 1.0, 1e-15);
    EXPECT_THROW(zero_state(0), SizeError);
}

TEST(Gates, SingleQubitIdentities) {
    auto one = apply_gate(zero_state(1), Gate::x(0));
    EXPECT_NEAR(std::abs(one[1]), 1.0, 1e-15);
    const auto s = random_state(3, 5);
    const auto same = apply_gate(s, Gate::u3(1, 0, pi, pi));
    for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_NEAR(std::abs(same[i] - s[i]), 0, 1e-12);
    const auto flipped = apply_gate(zero_state(1), Gate::u3(0, pi, 0, pi));
    EXPECT_NEAR(std::abs(flipped[0]), 0, 1e-12);
    EXPECT_NEAR(std::abs(flipped[1]), 1, 1e-12);
}

TEST(Gates, ExpZZPhaseOnZeroState) {
    const double th = 0.37;
    const auto s = apply_gate(zero_state(2), Gate::exp_zz(th, 0, 1));
    EXPECT_NEAR(std::abs(s[0] - std::polar(1.0, th)), 0, 1e-12);
}

TEST(Gates, ControlledGatesMatchDenseOracle) {
    Rng rng(11);
    const int nq = 4;
    for (int trial = 0; trial < 40; ++trial) {
        const int target = static_cast<int>(rng.below(nq));
        std::vector<int> controls;
        for (int q = 0; q < nq; ++q)
            if (q != target && rng.below(2)) controls.push_back(q);
        const double t = rng.uniform(0, 2 * pi), p = rng.uniform(0, 2 * pi), l = rng.uniform(0, 2 * pi);
        const auto s = random_state(nq, 100 + trial);
        const auto got_u3 = apply_gate(s, Gate::controlled_u3(controls, target, t, p, l));
        const Eigen::VectorXcd want_u3 = dense_controlled(nq, controls, target, mat(gates::u3(t, p, l))) * vec(s);
        EXPECT_LT((vec(got_u3) - want_u3).cwiseAbs().maxCoeff(), 1e-12);
        const auto got_x = apply_gate(s, Gate::mcx(controls, target));
        const Eigen::VectorXcd want_x = dense_controlled(nq, controls, target, mat(gates::pauli_x())) * vec(s);
        EXPECT_LT((vec(got_x) - want_x).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Gates, TwoQubitExponentialsMatchMatrixExponential) {
    Eigen::Matrix4cd xx = Eigen::Matrix4cd::Zero(), zz = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) {
        xx(3 - i, i) = 1;
        zz(i, i) = (i == 0 || i == 3) ? 1 : -1;
    }
    const double th = 0.81;
    // exp(i th P) = cos th I + i sin th P for an involution P.
    const Eigen::Matrix4cd want_xx = std::cos(th) * Eigen::Matrix4cd::Identity() + cd(0, std::sin(th)) * xx;
    const Eigen::Matrix4cd want_zz = std::cos(th) * Eigen::Matrix4cd::Identity() + cd(0, std::sin(th)) * zz;
    Circuit cx(2), cz(2);
    cx.add(Gate::exp_xx(th, 0, 1));
    cz.add(Gate::exp_zz(th, 0, 1));
    EXPECT_LT((circuit_unitary(cx) - want_xx).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((circuit_unitary(cz) - want_zz).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gates, ValidationErrors) {
    Circuit c(2);
    EXPECT_THROW(c.add(Gate::x(2)), CircuitError);
    EXPECT_THROW(c.add(Gate::cnot(1, 1)), CircuitError);
}

TEST(Circuit, EmptyAndHadamard) {
    const auto s = random_state(2, 3);
    const auto t = run_circuit(Circuit(2), s);
    for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_EQ(t[i], s[i]);
    Circuit h(1);
    h.add(Gate::h(0));
    const auto plus = run_circuit(h, zero_state(1));
    EXPECT_NEAR(plus[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(plus[1].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(expectation_z(plus, 0), 0.0, 1e-15);
}

// Multi-controlled X network realizing 00101001: one MCX per 1-input, with
// X conjugation on the controls that must read 0.
TEST(Circuit, BooleanOracleNetwork) {
    const std::string f = "00101001";
    Circuit c(4);
    for (int u = 0; u < 8; ++u) {
        if (f[u] != '1') continue;
        for (int q = 0; q < 3; ++q)
            if (!((u >> (2 - q)) & 1)) c.add(Gate::x(q));
        c.add(Gate::mcx({0, 1, 2}, 3));
        for (int q = 0; q < 3; ++q)
            if (!((u >> (2 - q)) & 1)) c.add(Gate::x(q));
    }
    for (int x = 0; x < 8; ++x) {
        const auto out = run_circuit(c, Statevector::basis(4, static_cast<std::uint64_t>(x) << 1));
        EXPECT_EQ(threshold_label(expectation_z(out, 3)), f[x] == '1' ? 1 : 0) << x;
    }
}

TEST(Readout, ExpectationAndThreshold) {
    EXPECT_EQ(expectation_z(zero_state(1), 0), 1.0);
    EXPECT_EQ(expectation_z(Statevector::basis(1, 1), 0), -1.0);
    EXPECT_EQ(threshold_label(-0.3), 1);
    EXPECT_EQ(threshold_label(0.0), 0);
    EXPECT_EQ(threshold_label(1.0), 0);
}

TEST(Haar, UnitaryAndDeterministic) {
    const auto u1 = haar_unitary(1, 4);
    EXPECT_NEAR(std::abs(u1(0, 0)), 1.0, 1e-12);
    for (std::size_t d : {2u, 5u, 8u}) {
        const auto u = haar_unitary(d, 42);
        const Eigen::MatrixXcd err = u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d);
        EXPECT_LT(err.cwiseAbs().maxCoeff(), 1e-10);
        for (Eigen::Index j = 0; j < u.cols(); ++j) EXPECT_NEAR(u.col(j).norm(), 1.0, 1e-10);
    }
    EXPECT_EQ(haar_unitary(4, 9), haar_unitary(4, 9));
}

// Encoders.

BooleanInput in(const std::string &s) {
    BooleanInput x;
    for (char c : s) x.bits.push_back(c == '1');
    return x;
}

TEST(Encode, Basis) {
    const auto s = encode_basis(in("10"));
    EXPECT_EQ(s.state[2], cd(1, 0));
    EXPECT_EQ(encode_basis(in("00")).state[0], cd(1, 0));
    EXPECT_EQ(encode_basis(in("111")).state[7], cd(1, 0));
}

TEST(Encode, Amplitude) {
    const double r2 = 1 / std::sqrt(2.0), r3 = 1 / std::sqrt(3.0);
    const auto a = encode_amplitude(in("101")).state;
    ASSERT_EQ(a.dim(), 4u);
    EXPECT_NEAR(a[0].real(), r2, 1e-15);
    EXPECT_NEAR(a[2].real(), r2, 1e-15);
    EXPECT_NEAR(std::abs(a[1]) + std::abs(a[3]), 0, 1e-15);
    EXPECT_NEAR(encode_amplitude(in("001")).state[2].real(), 1, 1e-15);
    const auto b = encode_amplitude(in("111")).state;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(b[i].real(), r3, 1e-15);
    EXPECT_NEAR(encoded_state(EncodingMethod::amplitude(), in("010")).state[1].real(), 1, 1e-15);
    EXPECT_THROW(encode_amplitude(in("000")), UnencodableError);
}

TEST(Encode, ZZCircuitAngles) {
    const auto c = zz_feature_circuit(in("01"), 1);
    ASSERT_EQ(c.size(), 7u);
    const auto &g = c.gates();
    EXPECT_EQ(g[0].kind, Gate::Kind::H);
    EXPECT_EQ(g[1].kind, Gate::Kind::H);
    EXPECT_DOUBLE_EQ(g[2].angles[0], 0.0);
    EXPECT_DOUBLE_EQ(g[3].angles[0], 2.0);
    EXPECT_EQ(g[4].kind, Gate::Kind::CNOT);
    EXPECT_DOUBLE_EQ(g[5].angles[0], 2 * pi * (pi - 1));
    EXPECT_EQ(g[5].targets[0], 1);
    EXPECT_DOUBLE_EQ(zz_feature_circuit(in("00"), 1).gates()[5].angles[0], 2 * pi * pi);
    const auto c11 = zz_feature_circuit(in("11"), 1);
    EXPECT_DOUBLE_EQ(c11.gates()[2].angles[0], 2.0);
    EXPECT_DOUBLE_EQ(c11.gates()[3].angles[0], 2.0);
    EXPECT_EQ(zz_feature_circuit(in("01")).size(), 14u);
    EXPECT_THROW(zz_feature_circuit(in("1")), SizeError);
    const auto s = encoded_state(EncodingMethod::zz(), in("00")).state;
    EXPECT_NEAR(fidelity(s, s), 1.0, 1e-12);
}

TEST(Encode, ZCircuit) {
    const auto c = z_feature_circuit(in("10"));
    ASSERT_EQ(c.size(), 4u);
    EXPECT_DOUBLE_EQ(c.gates()[2].angles[0], 2.0);
    EXPECT_DOUBLE_EQ(c.gates()[3].angles[0], 0.0);
    EXPECT_DOUBLE_EQ(z_feature_circuit(in("1")).gates()[1].angles[0], 2.0);
    EXPECT_DOUBLE_EQ(z_feature_circuit(in("00")).gates()[3].angles[0], 0.0);
}

TEST(Encode, RandomRelu) {
    EXPECT_EQ(complex_relu({-0.3, -0.2}), cd(0, 0));
    EXPECT_EQ(complex_relu({0.5, -0.1}), cd(0.5, 0));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(8, 8);
    for (const char *x : {"000", "011", "110"}) {
        const auto r = encode_random_relu(in(x), id).state;
        const auto b = encode_basis(in(x)).state;
        for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(r[i], b[i]);
    }
    const auto s = encode_random_relu(in("101"), 17).state;
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        EXPECT_GE(s[i].real(), 0.0);
        EXPECT_GE(s[i].imag(), 0.0);
    }
}

TEST(Encode, AttachReadout) {
    const auto a = attach_readout(encode_amplitude(in("001")));
    ASSERT_EQ(a.dim(), 8u);
    EXPECT_NEAR(a[4].real(), 1.0, 1e-15);
    const auto b = attach_readout(encode_amplitude(in("011")));
    EXPECT_NEAR(b[2].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(b[4].real(), 1 / std::sqrt(2.0), 1e-15);
    const auto c = attach_readout(EncodedState{zero_state(1), 1});
    EXPECT_EQ(c.dim(), 4u);
    EXPECT_EQ(c[0], cd(1, 0));
}

} // namespace
