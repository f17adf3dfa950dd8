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

/// @file encode.hpp
/// Maps from Boolean inputs to data-qubit states.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qbias/boolfn.hpp"
#include "qbias/error.hpp"
#include "qbias/qsim.hpp"

namespace qbias {

struct EncodingMethod {
    enum class Kind { Basis, Amplitude, ZZFeatureMap, ZFeatureMap, RandomRelu };

    Kind kind = Kind::Basis;
    /// Fixes the random unitary of RandomRelu for the whole experiment.
    std::uint64_t seed = 0;
    /// Block repetitions of the ZZ feature map. Two reproduces the
    /// published two-input kernel matrix; one does not.
    int zz_reps = 2;

    static EncodingMethod basis() { return {Kind::Basis}; }
    static EncodingMethod amplitude() { return {Kind::Amplitude}; }
    static EncodingMethod zz(int reps = 2) { return {Kind::ZZFeatureMap, 0, reps}; }
    static EncodingMethod z() { return {Kind::ZFeatureMap}; }
    static EncodingMethod relu(std::uint64_t seed) { return {Kind::RandomRelu, seed}; }
};

/// CLI token: basis | amplitude | zz | z | relu.
inline std::string_view token(EncodingMethod::Kind k) {
    switch (k) {
    case EncodingMethod::Kind::Basis: return "basis";
    case EncodingMethod::Kind::Amplitude: return "amplitude";
    case EncodingMethod::Kind::ZZFeatureMap: return "zz";
    case EncodingMethod::Kind::ZFeatureMap: return "z";
    case EncodingMethod::Kind::RandomRelu: return "relu";
    }
    return "?";
}

inline EncodingMethod parse_encoding(std::string_view tok, std::uint64_t seed = 0) {
    if (tok == "basis") return EncodingMethod::basis();
    if (tok == "amplitude") return EncodingMethod::amplitude();
    if (tok == "zz") return EncodingMethod::zz();
    if (tok == "z") return EncodingMethod::z();
    if (tok == "relu") return EncodingMethod::relu(seed);
    throw UsageError("unknown encoder '" + std::string(tok) +
                     "' (expected basis|amplitude|zz|z|relu)");
}

/// Number of data qubits the encoder uses for n input bits.
inline int data_qubits(const EncodingMethod &m, int n) {
    if (m.kind == EncodingMethod::Kind::Amplitude) {
        int q = 0;
        while ((1 << q) < n) ++q;
        return q < 1 ? 1 : q;
    }
    return n;
}

struct EncodedState {
    Statevector state;
    int data_qubits = 0;
};

/// |b_0 b_1 ... b_{n-1}> with the input's leftmost bit on qubit 0.
inline EncodedState encode_basis(const BooleanInput &x) {
    std::uint64_t index = 0;
    for (auto b : x.bits) index = (index << 1) | b;
    const int n = static_cast<int>(x.size());
    return {Statevector::basis(n, index), n};
}

/// Element j of x becomes the amplitude of |j>, zero-padded and normalized.
inline EncodedState encode_amplitude(const BooleanInput &x) {
    const std::size_t ones = x.count_ones();
    if (ones == 0) {
        throw UnencodableError("amplitude encoding: the all-zeros input " + x.to_string() +
                               " has no normalized state");
    }
    const int q = data_qubits(EncodingMethod::amplitude(), static_cast<int>(x.size()));
    std::vector<cplx> amps(std::size_t{1} << q, cplx{0.0, 0.0});
    const double a = 1.0 / std::sqrt(static_cast<double>(ones));
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j]) amps[j] = a;
    }
    return {Statevector::from_amplitudes(std::move(amps)), q};
}

/// H on every qubit, U1(2 x_i) on qubit i, then for every pair i < j in
/// lexicographic order CNOT(i,j) U1(2(pi - x_i)(pi - x_j)) on j CNOT(i,j);
/// the block is repeated `reps` times.
inline Circuit zz_feature_circuit(const BooleanInput &x, int reps = 2) {
    const int n = static_cast<int>(x.size());
    if (n < 2) {
        throw SizeError("zz_feature_circuit: needs at least two inputs");
    }
    if (reps < 1) {
        throw SizeError("zz_feature_circuit: reps must be positive");
    }
    constexpr double pi = std::numbers::pi;
    Circuit c(n);
    for (int r = 0; r < reps; ++r) {
        for (int q = 0; q < n; ++q) c.add(Gate::h(q));
        for (int q = 0; q < n; ++q) c.add(Gate::u1(q, 2.0 * x[q]));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                c.add(Gate::cnot(i, j));
                c.add(Gate::u1(j, 2.0 * (pi - x[i]) * (pi - x[j])));
                c.add(Gate::cnot(i, j));
            }
        }
    }
    return c;
}

/// Single-qubit terms of the Pauli expansion: H then U1(2 x_i).
inline Circuit z_feature_circuit(const BooleanInput &x) {
    const int n = static_cast<int>(x.size());
    if (n < 1) {
        throw SizeError("z_feature_circuit: needs at least one input");
    }
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.add(Gate::h(q));
    for (int q = 0; q < n; ++q) c.add(Gate::u1(q, 2.0 * x[q]));
    return c;
}

/// Elementwise relu on real and imaginary parts.
inline cplx complex_relu(cplx z) {
    return {z.real() < 0.0 ? 0.0 : z.real(), z.imag() < 0.0 ? 0.0 : z.imag()};
}

/// Basis-encode, rotate by `u`, relu, renormalize.
inline EncodedState encode_random_relu(const BooleanInput &x, const Eigen::MatrixXcd &u) {
    const auto basis = encode_basis(x);
    const std::size_t d = basis.state.dim();
    if (static_cast<std::size_t>(u.rows()) != d || static_cast<std::size_t>(u.cols()) != d) {
        throw SizeError("encode_random_relu: unitary dimension mismatch");
    }
    std::uint64_t col = 0;
    for (auto b : x.bits) col = (col << 1) | b;
    std::vector<cplx> amps(d);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        amps[i] = complex_relu(u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)));
        norm2 += std::norm(amps[i]);
    }
    if (norm2 <= 1e-300) {
        throw DegenerateEncodingError("random relu: every component of input " +
                                      x.to_string() + " was clipped to zero");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &a : amps) a *= inv;
    return {Statevector::from_amplitudes(std::move(amps)), static_cast<int>(x.size())};
}

inline EncodedState encode_random_relu(const BooleanInput &x, std::uint64_t seed) {
    return encode_random_relu(x, haar_unitary(std::size_t{1} << x.size(), seed));
}

/// An encoding method bound to an input size; caches the relu unitary.
class Encoder {
  public:
    Encoder(EncodingMethod method, int n) : method_(method), n_(n) {
        if (n < 1 || n > 20) throw SizeError("Encoder: n must be in [1, 20]");
        if (method_.kind == EncodingMethod::Kind::RandomRelu) {
            relu_unitary_ = haar_unitary(std::size_t{1} << n, method_.seed);
        }
    }

    const EncodingMethod &method() const noexcept { return method_; }
    int n() const noexcept { return n_; }
    int data_qubits() const noexcept { return qbias::data_qubits(method_, n_); }

    /// Whether `x` has a state under this encoder.
    bool encodable(const BooleanInput &x) const {
        return method_.kind != EncodingMethod::Kind::Amplitude || !x.all_zero();
    }

    EncodedState encode(const BooleanInput &x) const {
        if (static_cast<int>(x.size()) != n_) {
            throw SizeError("Encoder: input has " + std::to_string(x.size()) +
                            " bits, expected " + std::to_string(n_));
        }
        using K = EncodingMethod::Kind;
        switch (method_.kind) {
        case K::Basis: return encode_basis(x);
        case K::Amplitude: return encode_amplitude(x);
        case K::ZZFeatureMap:
            return {run_circuit(zz_feature_circuit(x, method_.zz_reps), zero_state(n_)), n_};
        case K::ZFeatureMap:
            return {run_circuit(z_feature_circuit(x), zero_state(n_)), n_};
        case K::RandomRelu: return encode_random_relu(x, *relu_unitary_);
        }
        throw UsageError("Encoder: unknown method");
    }

  private:
    EncodingMethod method_;
    int n_;
    std::optional<Eigen::MatrixXcd> relu_unitary_;
};

inline EncodedState encoded_state(const EncodingMethod &method, const BooleanInput &x) {
    return Encoder(method, static_cast<int>(x.size())).encode(x);
}

/// Appends |0> as a new last qubit: amplitude i moves to index 2i.
inline Statevector attach_readout(const EncodedState &s) {
    std::vector<cplx> amps(2 * s.state.dim(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < s.state.dim(); ++i) amps[2 * i] = s.state[i];
    return Statevector::from_amplitudes(std::move(amps));
}

} // namespace qbias
