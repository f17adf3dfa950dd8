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

/// @file ansatz.hpp
/// Variational circuits: the Boolean QNN built from multi-controlled U3
/// blocks, the XX/ZZ readout-coupling circuit, the 15-parameter two-qubit
/// gate and the QCNN built from it.

#pragma once

#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbias/error.hpp"
#include "qbias/qsim.hpp"
#include "qbias/rng.hpp"

namespace qbias {

using ParamVector = std::vector<double>;

enum class PauliCoupling { XX, ZZ };
enum class QcnnVariant { Full15, Restricted };

struct AnsatzSpec {
    enum class Kind {
        BooleanQNN,
        Farhi,
        GeneralTwoQubit,
        QCNN,
        /// Dense Haar unitary on data + readout; used for witness search.
        Haar
    };

    Kind kind = Kind::BooleanQNN;
    int data_qubits = 1;
    /// Farhi layer stack; default is one XX layer then one ZZ layer.
    std::vector<PauliCoupling> layers{PauliCoupling::XX, PauliCoupling::ZZ};
    QcnnVariant variant = QcnnVariant::Full15;

    static AnsatzSpec boolean_qnn(int d) { return {Kind::BooleanQNN, d}; }
    static AnsatzSpec farhi(int d, std::vector<PauliCoupling> layers = {PauliCoupling::XX,
                                                                        PauliCoupling::ZZ}) {
        return {Kind::Farhi, d, std::move(layers)};
    }
    static AnsatzSpec general_two_qubit() { return {Kind::GeneralTwoQubit, 2}; }
    static AnsatzSpec qcnn(int d, QcnnVariant v) { return {Kind::QCNN, d, {}, v}; }
    static AnsatzSpec haar(int d) { return {Kind::Haar, d}; }
};

/// CLI token: boolqnn | farhi | qcnn-full | qcnn-restricted | haar.
inline std::string ansatz_token(const AnsatzSpec &s) {
    switch (s.kind) {
    case AnsatzSpec::Kind::BooleanQNN: return "boolqnn";
    case AnsatzSpec::Kind::Farhi: return "farhi";
    case AnsatzSpec::Kind::GeneralTwoQubit: return "u2";
    case AnsatzSpec::Kind::QCNN:
        return s.variant == QcnnVariant::Full15 ? "qcnn-full" : "qcnn-restricted";
    case AnsatzSpec::Kind::Haar: return "haar";
    }
    return "?";
}

inline AnsatzSpec parse_ansatz(std::string_view tok, int data_qubits) {
    if (tok == "boolqnn") return AnsatzSpec::boolean_qnn(data_qubits);
    if (tok == "farhi") return AnsatzSpec::farhi(data_qubits);
    if (tok == "qcnn-full") return AnsatzSpec::qcnn(data_qubits, QcnnVariant::Full15);
    if (tok == "qcnn-restricted") return AnsatzSpec::qcnn(data_qubits, QcnnVariant::Restricted);
    if (tok == "haar") return AnsatzSpec::haar(data_qubits);
    throw UsageError("unknown ansatz '" + std::string(tok) +
                     "' (expected boolqnn|farhi|qcnn-full|qcnn-restricted|haar)");
}

/// A two-qubit block placement (a, b) inside a QCNN.
using QubitPair = std::pair<int, int>;

struct QcnnLayout {
    std::vector<QubitPair> blocks;
    /// Index into `blocks` where each layer starts, with a tag for pooling.
    std::vector<std::pair<std::size_t, bool>> layer_starts;
    int readout = 0;
};

/// Conv layers act on even neighbour pairs then odd pairs (ring closure
/// when more than two qubits are active). Pooling pairs active[i] with
/// active[i + m/2] and keeps the second half, so the last qubit survives.
inline QcnnLayout qcnn_layout(int d) {
    if (d < 2 || (d & (d - 1)) != 0) {
        throw SizeError("qcnn: data qubit count must be a power of two >= 2, got " +
                        std::to_string(d));
    }
    QcnnLayout out;
    std::vector<int> active(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) active[static_cast<std::size_t>(i)] = i;
    while (active.size() > 1) {
        const std::size_t m = active.size();
        out.layer_starts.emplace_back(out.blocks.size(), false);
        for (std::size_t i = 0; i + 1 < m; i += 2) out.blocks.emplace_back(active[i], active[i + 1]);
        if (m > 2) {
            for (std::size_t i = 1; i < m; i += 2) {
                out.blocks.emplace_back(active[i], active[(i + 1) % m]);
            }
        }
        out.layer_starts.emplace_back(out.blocks.size(), true);
        for (std::size_t i = 0; i < m / 2; ++i) out.blocks.emplace_back(active[i], active[i + m / 2]);
        active.erase(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(m / 2));
    }
    out.readout = active.front();
    return out;
}

inline std::size_t parameter_count(const AnsatzSpec &s) {
    const auto d = static_cast<std::size_t>(s.data_qubits);
    switch (s.kind) {
    case AnsatzSpec::Kind::BooleanQNN: return 3 * (std::size_t{1} << d);
    case AnsatzSpec::Kind::Farhi: return d * s.layers.size();
    case AnsatzSpec::Kind::GeneralTwoQubit: return 15;
    case AnsatzSpec::Kind::QCNN:
        return (s.variant == QcnnVariant::Full15 ? 15 : 3) * qcnn_layout(s.data_qubits).blocks.size();
    case AnsatzSpec::Kind::Haar: {
        const std::size_t dim = std::size_t{1} << (d + 1);
        return 2 * dim * dim;
    }
    }
    return 0;
}

/// Register size of the circuit the ansatz builds.
inline int total_qubits(const AnsatzSpec &s) {
    switch (s.kind) {
    case AnsatzSpec::Kind::GeneralTwoQubit: return 2;
    case AnsatzSpec::Kind::QCNN: return s.data_qubits;
    default: return s.data_qubits + 1;
    }
}

/// Whether a readout qubit is appended after the data qubits.
inline bool appends_readout(const AnsatzSpec &s) {
    return s.kind != AnsatzSpec::Kind::QCNN && s.kind != AnsatzSpec::Kind::GeneralTwoQubit;
}

inline int readout_qubit(const AnsatzSpec &s) { return total_qubits(s) - 1; }

namespace detail {
inline void check_params(std::size_t got, std::size_t want, const char *who) {
    if (got != want) {
        throw CircuitError(std::string(who) + ": expected " + std::to_string(want) +
                           " parameters, got " + std::to_string(got));
    }
}
} // namespace detail

/// For each mask u in ascending order, a U3 on the readout (qubit d)
/// controlled on the data qubits set in u; qubit 0 is u's top bit.
/// Parameters for block u are (theta, phi, lambda) at 3u .. 3u+2.
inline Circuit boolean_qnn_circuit(int d, std::span<const double> params) {
    if (d < 1 || d > kMaxQubits - 1) throw SizeError("boolean_qnn_circuit: bad data qubit count");
    const std::size_t blocks = std::size_t{1} << d;
    detail::check_params(params.size(), 3 * blocks, "boolean_qnn_circuit");
    Circuit c(d + 1);
    for (std::size_t u = 0; u < blocks; ++u) {
        std::vector<int> controls;
        for (int q = 0; q < d; ++q) {
            if ((u >> (d - 1 - q)) & 1U) controls.push_back(q);
        }
        c.add(Gate::controlled_u3(std::move(controls), d, params[3 * u], params[3 * u + 1],
                                  params[3 * u + 2]));
    }
    return c;
}

/// exp(i theta Sigma) between the readout (qubit d) and each data qubit,
/// layer by layer.
inline Circuit farhi_circuit(int d, std::span<const PauliCoupling> layers,
                             std::span<const double> params) {
    if (d < 1 || d > kMaxQubits - 1) throw SizeError("farhi_circuit: bad data qubit count");
    detail::check_params(params.size(), static_cast<std::size_t>(d) * layers.size(),
                         "farhi_circuit");
    Circuit c(d + 1);
    std::size_t k = 0;
    for (auto layer : layers) {
        for (int i = 0; i < d; ++i, ++k) {
            c.add(layer == PauliCoupling::XX ? Gate::exp_xx(params[k], d, i)
                                             : Gate::exp_zz(params[k], d, i));
        }
    }
    return c;
}

/// Appends the 15-parameter two-qubit gate on (a, b) to `c`.
inline void add_general_two_qubit(Circuit &c, std::span<const double> p, int a, int b) {
    detail::check_params(p.size(), 15, "general_two_qubit");
    c.add(Gate::u3(a, p[0], p[1], p[2]));
    c.add(Gate::u3(b, p[3], p[4], p[5]));
    c.add(Gate::cnot(b, a));
    c.add(Gate::rz(a, p[6]));
    c.add(Gate::ry(b, p[7]));
    c.add(Gate::cnot(a, b));
    c.add(Gate::ry(b, p[8]));
    c.add(Gate::cnot(b, a));
    c.add(Gate::u3(a, p[9], p[10], p[11]));
    c.add(Gate::u3(b, p[12], p[13], p[14]));
}

/// Three-parameter restriction used by the reference QCNN tutorial.
inline void add_restricted_two_qubit(Circuit &c, std::span<const double> p, int a, int b) {
    detail::check_params(p.size(), 3, "restricted_two_qubit");
    constexpr double half_pi = std::numbers::pi / 2;
    c.add(Gate::rz(b, -half_pi));
    c.add(Gate::cnot(b, a));
    c.add(Gate::rz(a, p[0]));
    c.add(Gate::ry(b, p[1]));
    c.add(Gate::cnot(a, b));
    c.add(Gate::ry(b, p[2]));
    c.add(Gate::cnot(b, a));
    c.add(Gate::rz(a, half_pi));
}

inline Circuit general_two_qubit_circuit(std::span<const double> params, int a = 0, int b = 1) {
    Circuit c(std::max(a, b) + 1);
    add_general_two_qubit(c, params, a, b);
    return c;
}

inline Circuit qcnn_circuit(int d, QcnnVariant variant, std::span<const double> params) {
    const auto layout = qcnn_layout(d);
    const std::size_t per = variant == QcnnVariant::Full15 ? 15 : 3;
    detail::check_params(params.size(), per * layout.blocks.size(), "qcnn_circuit");
    Circuit c(d);
    for (std::size_t k = 0; k < layout.blocks.size(); ++k) {
        const auto [a, b] = layout.blocks[k];
        const auto p = params.subspan(k * per, per);
        if (variant == QcnnVariant::Full15) {
            add_general_two_qubit(c, p, a, b);
        } else {
            add_restricted_two_qubit(c, p, a, b);
        }
    }
    return c;
}

inline Circuit haar_circuit(int d, std::span<const double> params) {
    const std::size_t dim = std::size_t{1} << (d + 1);
    detail::check_params(params.size(), 2 * dim * dim, "haar_circuit");
    const Eigen::MatrixXcd u = haar_from_gaussians(dim, params);
    std::vector<cplx> m(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t col = 0; col < dim; ++col)
            m[r * dim + col] = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col));
    std::vector<int> qs(static_cast<std::size_t>(d + 1));
    for (int q = 0; q <= d; ++q) qs[static_cast<std::size_t>(q)] = q;
    Circuit c(d + 1);
    c.add(Gate::unitary(std::move(m), std::move(qs)));
    return c;
}

inline Circuit build_circuit(const AnsatzSpec &s, std::span<const double> params) {
    switch (s.kind) {
    case AnsatzSpec::Kind::BooleanQNN: return boolean_qnn_circuit(s.data_qubits, params);
    case AnsatzSpec::Kind::Farhi: return farhi_circuit(s.data_qubits, s.layers, params);
    case AnsatzSpec::Kind::GeneralTwoQubit: return general_two_qubit_circuit(params);
    case AnsatzSpec::Kind::QCNN: return qcnn_circuit(s.data_qubits, s.variant, params);
    case AnsatzSpec::Kind::Haar: return haar_circuit(s.data_qubits, params);
    }
    throw CircuitError("build_circuit: unknown ansatz");
}

/// Half-open interval parameters are drawn from.
struct ParamRange {
    double lo = 0.0;
    double hi = 2.0 * std::numbers::pi;

    static ParamRange full_turn() { return {}; }
    static ParamRange unit() { return {0.0, 1.0}; }
    std::string label() const {
        if (lo == 0.0 && hi == 1.0) return "0,1";
        if (lo == 0.0 && hi == 2.0 * std::numbers::pi) return "0,2pi";
        return std::to_string(lo) + "," + std::to_string(hi);
    }
};

/// Uniform angles in `range`; the Haar ansatz draws standard normals.
inline ParamVector sample_parameters(const AnsatzSpec &s, Rng &rng, ParamRange range = {}) {
    ParamVector p(parameter_count(s));
    if (s.kind == AnsatzSpec::Kind::Haar) {
        std::normal_distribution<double> normal;
        for (auto &v : p) v = normal(rng);
    } else {
        for (auto &v : p) v = rng.uniform(range.lo, range.hi);
    }
    return p;
}

} // namespace qbias
