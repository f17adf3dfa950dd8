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

/// @file model.hpp
/// Encoder + ansatz classifier evaluated over the whole Boolean dataset.
///
/// The Boolean QNN acts on data basis state |z> as |z> (x) V_z where V_z is
/// the ordered product of the U3 blocks whose control mask is a subset of
/// z. Its readout expectation on an encoded state sum_z a_z |z>|0> is
/// therefore sum_z |a_z|^2 e_z with e_z = <0|V_z^dag Z V_z|0>, which the
/// fast path evaluates without touching a statevector. Every other ansatz
/// goes through the dense simulator.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbias/ansatz.hpp"
#include "qbias/boolfn.hpp"
#include "qbias/encode.hpp"
#include "qbias/error.hpp"
#include "qbias/qsim.hpp"
#include "qbias/rng.hpp"

namespace qbias {

/// Builds the encoder; a degenerate random relu draw is resampled once with
/// a derived seed and reported to `log`.
inline Encoder make_encoder(EncodingMethod method, int n, std::ostream *log = nullptr) {
    auto all_encode = [n](const Encoder &e) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
            const auto x = input_from_index(i, n);
            if (e.encodable(x)) (void)e.encode(x);
        }
    };
    Encoder enc(method, n);
    if (method.kind != EncodingMethod::Kind::RandomRelu) return enc;
    try {
        all_encode(enc);
        return enc;
    } catch (const DegenerateEncodingError &err) {
        method.seed = derive_seed(method.seed, 1);
        if (log != nullptr) {
            *log << "warning: " << err.what() << "; resampling relu unitary with seed "
                 << method.seed << "\n";
        }
    }
    Encoder retry(method, n);
    all_encode(retry);
    return retry;
}

class QnnModel {
  public:
    /// Readout expectation reported for inputs the encoder cannot represent
    /// (amplitude encoding of all zeros): pinned to label 0.
    static constexpr double kUnencodableExpectation = 1.0;

    QnnModel(EncodingMethod method, AnsatzSpec ansatz, int n, std::ostream *log = nullptr)
        : encoder_(make_encoder(method, n, log)), ansatz_(std::move(ansatz)) {
        const int dq = encoder_.data_qubits();
        if (ansatz_.data_qubits != dq) {
            throw UsageError("ansatz has " + std::to_string(ansatz_.data_qubits) +
                             " data qubits but encoder '" + std::string(token(method.kind)) +
                             "' at n=" + std::to_string(n) + " produces " + std::to_string(dq));
        }
        if (ansatz_.kind == AnsatzSpec::Kind::GeneralTwoQubit) {
            throw UsageError("the bare two-qubit gate is not a classifier ansatz");
        }
        const std::size_t m = std::size_t{1} << n;
        fast_ = ansatz_.kind == AnsatzSpec::Kind::BooleanQNN;
        if (fast_) {
            weights_.resize(m);
        } else {
            states_.resize(m);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto x = input_from_index(i, n);
            if (!encoder_.encodable(x)) {
                fixed_zero_.push_back(i);
                continue;
            }
            auto enc = encoder_.encode(x);
            if (fast_) {
                for (std::size_t z = 0; z < enc.state.dim(); ++z) {
                    const double w = std::norm(enc.state[z]);
                    if (w > 0.0) weights_[i].emplace_back(static_cast<std::uint32_t>(z), w);
                }
            } else if (appends_readout(ansatz_)) {
                states_[i] = attach_readout(enc);
            } else {
                states_[i] = std::move(enc.state);
            }
        }
    }

    int n() const noexcept { return encoder_.n(); }
    std::size_t num_inputs() const noexcept { return std::size_t{1} << n(); }
    const Encoder &encoder() const noexcept { return encoder_; }
    const AnsatzSpec &ansatz() const noexcept { return ansatz_; }
    std::size_t parameter_count() const { return qbias::parameter_count(ansatz_); }
    bool uses_fast_path() const noexcept { return fast_; }

    /// Input indices whose label is fixed to 0 because they cannot be encoded.
    const std::vector<std::size_t> &fixed_zero_inputs() const noexcept { return fixed_zero_; }

    /// A parameter vector bound to the model; per-input expectations are
    /// computed on demand and cached.
    class Bound {
      public:
        double expectation(std::size_t i) {
            if (model_->fast_) {
                if (model_->weights_[i].empty()) return kUnencodableExpectation;
                double acc = 0.0;
                for (const auto &[z, w] : model_->weights_[i]) acc += w * readout_z(z);
                return acc;
            }
            if (!model_->states_[i]) return kUnencodableExpectation;
            if (!circuit_) circuit_ = build_circuit(model_->ansatz_, params_);
            Statevector s = *model_->states_[i];
            run_circuit_inplace(*circuit_, s);
            return expectation_z(s, readout_qubit(model_->ansatz_));
        }

        std::uint8_t label(std::size_t i) { return threshold_label(expectation(i)); }

      private:
        friend class QnnModel;
        Bound(const QnnModel &m, std::span<const double> params)
            : model_(&m), params_(params) {
            if (params.size() != m.parameter_count()) {
                throw CircuitError("QnnModel: expected " + std::to_string(m.parameter_count()) +
                                   " parameters, got " + std::to_string(params.size()));
            }
            if (m.fast_) {
                const std::size_t blocks = std::size_t{1} << m.ansatz_.data_qubits;
                e_.assign(blocks, std::numeric_limits<double>::quiet_NaN());
                u3_.resize(blocks);
                have_u3_.assign(blocks, 0);
            }
        }

        const Mat2 &block(std::size_t u) {
            if (!have_u3_[u]) {
                u3_[u] = gates::u3(params_[3 * u], params_[3 * u + 1], params_[3 * u + 2]);
                have_u3_[u] = 1;
            }
            return u3_[u];
        }

        double readout_z(std::size_t z) {
            if (std::isnan(e_[z])) {
                cplx a{1.0, 0.0}, b{0.0, 0.0};
                for (std::size_t u = 0; u <= z; ++u) {
                    if ((u & ~z) != 0) continue;
                    const Mat2 &m = block(u);
                    const cplx a2 = m[0] * a + m[1] * b;
                    b = m[2] * a + m[3] * b;
                    a = a2;
                }
                e_[z] = std::norm(a) - std::norm(b);
            }
            return e_[z];
        }

        const QnnModel *model_;
        std::span<const double> params_;
        std::vector<double> e_;
        std::vector<Mat2> u3_;
        std::vector<std::uint8_t> have_u3_;
        std::optional<Circuit> circuit_;
    };

    Bound bind(std::span<const double> params) const { return Bound(*this, params); }

    void expectations(std::span<const double> params, std::span<double> out) const {
        auto b = bind(params);
        for (std::size_t i = 0; i < num_inputs(); ++i) out[i] = b.expectation(i);
    }

    /// Labels of every input in ascending order.
    BooleanFunction sample_function(std::span<const double> params) const {
        auto b = bind(params);
        BooleanFunction f(num_inputs());
        for (std::size_t i = 0; i < num_inputs(); ++i) f.set(i, b.label(i) != 0);
        return f;
    }

  private:
    Encoder encoder_;
    AnsatzSpec ansatz_;
    bool fast_ = false;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> weights_;
    std::vector<std::optional<Statevector>> states_;
    std::vector<std::size_t> fixed_zero_;
};

} // namespace qbias
