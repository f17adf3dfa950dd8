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

/// @file qsim.hpp
/// Dense statevector simulator.
///
/// Bit order: qubit 0 is the most significant bit of the amplitude index,
/// so on three qubits |q0 q1 q2> lives at index 4*q0 + 2*q1 + q2. The
/// readout qubit of every classifier is the last (least significant) one.

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbias/error.hpp"
#include "qbias/rng.hpp"

namespace qbias {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>; // row-major

inline constexpr int kMaxQubits = 24;

class Statevector {
  public:
    Statevector() = default;

    /// |0...0> on `num_qubits` qubits.
    static Statevector zero(int num_qubits) {
        check_qubits(num_qubits);
        Statevector s;
        s.num_qubits_ = num_qubits;
        s.amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
        s.amps_[0] = 1.0;
        return s;
    }

    /// Computational basis state |index>.
    static Statevector basis(int num_qubits, std::uint64_t index) {
        Statevector s = zero(num_qubits);
        if (index >= s.amps_.size()) {
            throw SizeError("Statevector::basis: index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    /// Takes ownership of `amps`; length must be a power of two and the
    /// vector must be normalized to within 1e-10.
    static Statevector from_amplitudes(std::vector<cplx> amps) {
        const std::size_t len = amps.size();
        if (len < 2 || (len & (len - 1)) != 0) {
            throw SizeError("Statevector: length must be 2^q with q >= 1");
        }
        Statevector s;
        s.num_qubits_ = std::countr_zero(len);
        check_qubits(s.num_qubits_);
        s.amps_ = std::move(amps);
        if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
            throw SizeError("Statevector: amplitudes are not normalized");
        }
        return s;
    }

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::span<cplx> amplitudes() noexcept { return amps_; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const noexcept {
        double acc = 0.0;
        for (const auto &a : amps_) acc += std::norm(a);
        return acc;
    }

  private:
    static void check_qubits(int q) {
        if (q < 1 || q > kMaxQubits) {
            throw SizeError("Statevector: qubit count must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " + std::to_string(q));
        }
    }

    int num_qubits_ = 0;
    std::vector<cplx> amps_;
};

inline Statevector zero_state(int num_qubits) { return Statevector::zero(num_qubits); }

/// |<a|b>|^2.
inline double fidelity(const Statevector &a, const Statevector &b) {
    if (a.dim() != b.dim()) {
        throw SizeError("fidelity: dimension mismatch");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return std::norm(acc);
}

namespace gates {

inline Mat2 u3(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {cplx{c, 0.0}, -std::polar(s, lambda), std::polar(s, phi),
            std::polar(c, phi + lambda)};
}
inline Mat2 u1(double lambda) { return {1.0, 0.0, 0.0, std::polar(1.0, lambda)}; }
inline Mat2 rz(double theta) {
    return {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)};
}
inline Mat2 ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, -s, s, c};
}
inline Mat2 hadamard() {
    const double r = std::numbers::sqrt2 / 2;
    return {r, r, r, -r};
}
inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }

inline Mat2 mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

} // namespace gates

/// One gate application. Angles are radians; qubit indices are stored as
/// `controls` (all must be |1>) plus `targets`.
struct Gate {
    enum class Kind {
        U3,
        U1,
        H,
        X,
        Ry,
        Rz,
        CNOT,
        MCX,
        ControlledU3,
        ExpXX,
        ExpZZ,
        Unitary
    };

    Kind kind = Kind::X;
    std::vector<int> controls;
    std::vector<int> targets;
    std::array<double, 3> angles{};
    /// Dense row-major 2^k x 2^k matrix for Kind::Unitary.
    std::vector<cplx> matrix;

    static Gate u3(int q, double theta, double phi, double lambda) {
        return {Kind::U3, {}, {q}, {theta, phi, lambda}, {}};
    }
    static Gate u1(int q, double lambda) { return {Kind::U1, {}, {q}, {lambda, 0, 0}, {}}; }
    static Gate h(int q) { return {Kind::H, {}, {q}, {}, {}}; }
    static Gate x(int q) { return {Kind::X, {}, {q}, {}, {}}; }
    static Gate ry(int q, double theta) { return {Kind::Ry, {}, {q}, {theta, 0, 0}, {}}; }
    static Gate rz(int q, double theta) { return {Kind::Rz, {}, {q}, {theta, 0, 0}, {}}; }
    static Gate cnot(int control, int target) {
        return {Kind::CNOT, {control}, {target}, {}, {}};
    }
    /// Multi-controlled X; zero controls is a plain X.
    static Gate mcx(std::vector<int> controls, int target) {
        return {Kind::MCX, std::move(controls), {target}, {}, {}};
    }
    static Gate controlled_u3(std::vector<int> controls, int target, double theta,
                              double phi, double lambda) {
        return {Kind::ControlledU3, std::move(controls), {target}, {theta, phi, lambda}, {}};
    }
    /// exp(i theta X_a X_b).
    static Gate exp_xx(double theta, int a, int b) {
        return {Kind::ExpXX, {}, {a, b}, {theta, 0, 0}, {}};
    }
    /// exp(i theta Z_a Z_b).
    static Gate exp_zz(double theta, int a, int b) {
        return {Kind::ExpZZ, {}, {a, b}, {theta, 0, 0}, {}};
    }
    /// Arbitrary unitary on `qubits`; qubits[0] is the most significant
    /// index bit of the matrix.
    static Gate unitary(std::vector<cplx> m, std::vector<int> qubits) {
        return {Kind::Unitary, {}, std::move(qubits), {}, std::move(m)};
    }

    /// The inverse gate (angle negation or self-inverse).
    Gate inverse() const {
        Gate g = *this;
        switch (kind) {
        case Kind::U3:
        case Kind::ControlledU3:
            g.angles = {-angles[0], -angles[2], -angles[1]};
            break;
        case Kind::U1:
        case Kind::Ry:
        case Kind::Rz:
        case Kind::ExpXX:
        case Kind::ExpZZ:
            g.angles[0] = -angles[0];
            break;
        case Kind::Unitary: {
            const std::size_t d = std::size_t{1} << targets.size();
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    g.matrix[r * d + c] = std::conj(matrix[c * d + r]);
            break;
        }
        default:
            break;
        }
        return g;
    }

    /// Every qubit this gate touches, controls first.
    std::vector<int> qubits() const {
        std::vector<int> q = controls;
        q.insert(q.end(), targets.begin(), targets.end());
        return q;
    }
};

namespace detail {

inline std::uint64_t bit_of(int num_qubits, int q) {
    return std::uint64_t{1} << (num_qubits - 1 - q);
}

inline void validate(const Gate &g, int num_qubits) {
    const auto qs = g.qubits();
    if (g.targets.empty()) {
        throw CircuitError("gate has no target");
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (qs[i] < 0 || qs[i] >= num_qubits) {
            throw CircuitError("gate qubit index " + std::to_string(qs[i]) +
                               " out of range for " + std::to_string(num_qubits) +
                               " qubits");
        }
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            if (qs[i] == qs[j]) {
                throw CircuitError("gate qubit indices must be distinct");
            }
        }
    }
    if (g.kind == Gate::Kind::Unitary) {
        const std::size_t d = std::size_t{1} << g.targets.size();
        if (g.matrix.size() != d * d) {
            throw CircuitError("unitary gate matrix has the wrong size");
        }
    }
}

inline void apply_1q(std::span<cplx> amps, int num_qubits, int target,
                     std::uint64_t control_mask, const Mat2 &m) {
    const std::uint64_t tb = bit_of(num_qubits, target);
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tb) || (i & control_mask) != control_mask) continue;
        const cplx a0 = amps[i], a1 = amps[i | tb];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | tb] = m[2] * a0 + m[3] * a1;
    }
}

inline void apply_dense(std::span<cplx> amps, int num_qubits,
                        const std::vector<int> &targets, std::span<const cplx> m) {
    const std::size_t k = targets.size();
    const std::size_t d = std::size_t{1} << k;
    std::vector<std::uint64_t> offsets(d, 0);
    std::uint64_t tmask = 0;
    for (std::size_t s = 0; s < d; ++s) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((s >> (k - 1 - j)) & 1U) offsets[s] |= bit_of(num_qubits, targets[j]);
        }
    }
    for (auto t : targets) tmask |= bit_of(num_qubits, t);
    std::vector<cplx> in(d);
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if (base & tmask) continue;
        for (std::size_t s = 0; s < d; ++s) in[s] = amps[base | offsets[s]];
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t c = 0; c < d; ++c) acc += m[r * d + c] * in[c];
            amps[base | offsets[r]] = acc;
        }
    }
}

inline void apply_exp_pauli2(std::span<cplx> amps, int num_qubits, int a, int b,
                             double theta, bool xx) {
    const std::uint64_t ba = bit_of(num_qubits, a), bb = bit_of(num_qubits, b);
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (xx) {
            // pairs (i, i ^ ba ^ bb); visit each pair once from its lower member
            if (i & ba) continue;
            const std::uint64_t j = i ^ ba ^ bb;
            const cplx x0 = amps[i], x1 = amps[j];
            amps[i] = c * x0 + cplx{0.0, s} * x1;
            amps[j] = c * x1 + cplx{0.0, s} * x0;
        } else {
            const bool odd = (((i & ba) != 0) != ((i & bb) != 0));
            amps[i] *= std::polar(1.0, odd ? -theta : theta);
        }
    }
}

inline std::uint64_t mask_of(const std::vector<int> &qs, int num_qubits) {
    std::uint64_t m = 0;
    for (auto q : qs) m |= bit_of(num_qubits, q);
    return m;
}

} // namespace detail

/// In-place gate application on an owned state.
inline void apply_gate_inplace(Statevector &state, const Gate &g) {
    const int n = state.num_qubits();
    detail::validate(g, n);
    auto amps = state.amplitudes();
    const std::uint64_t cmask = detail::mask_of(g.controls, n);
    using K = Gate::Kind;
    switch (g.kind) {
    case K::U3:
    case K::ControlledU3:
        detail::apply_1q(amps, n, g.targets[0], cmask,
                         gates::u3(g.angles[0], g.angles[1], g.angles[2]));
        break;
    case K::U1:
        detail::apply_1q(amps, n, g.targets[0], cmask, gates::u1(g.angles[0]));
        break;
    case K::H:
        detail::apply_1q(amps, n, g.targets[0], cmask, gates::hadamard());
        break;
    case K::X:
    case K::CNOT:
    case K::MCX:
        detail::apply_1q(amps, n, g.targets[0], cmask, gates::pauli_x());
        break;
    case K::Ry:
        detail::apply_1q(amps, n, g.targets[0], cmask, gates::ry(g.angles[0]));
        break;
    case K::Rz:
        detail::apply_1q(amps, n, g.targets[0], cmask, gates::rz(g.angles[0]));
        break;
    case K::ExpXX:
    case K::ExpZZ:
        if (g.targets.size() != 2) throw CircuitError("two-qubit gate needs two targets");
        detail::apply_exp_pauli2(amps, n, g.targets[0], g.targets[1], g.angles[0],
                                 g.kind == K::ExpXX);
        break;
    case K::Unitary:
        detail::apply_dense(amps, n, g.targets, g.matrix);
        break;
    }
}

/// Unitary image of `state` under `g`.
inline Statevector apply_gate(Statevector state, const Gate &g) {
    apply_gate_inplace(state, g);
    return state;
}

/// Ordered gate list on a fixed register.
class Circuit {
  public:
    explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw SizeError("Circuit: qubit count out of range");
        }
    }

    Circuit &add(Gate g) {
        detail::validate(g, num_qubits_);
        gates_.push_back(std::move(g));
        return *this;
    }

    Circuit &append(const Circuit &other) {
        if (other.num_qubits_ != num_qubits_) {
            throw CircuitError("Circuit::append: register size mismatch");
        }
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    int num_qubits() const noexcept { return num_qubits_; }
    const std::vector<Gate> &gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }

    Circuit inverse() const {
        Circuit inv(num_qubits_);
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) inv.add(it->inverse());
        return inv;
    }

  private:
    int num_qubits_;
    std::vector<Gate> gates_;
};

inline void run_circuit_inplace(const Circuit &c, Statevector &state) {
    if (c.num_qubits() != state.num_qubits()) {
        throw CircuitError("run_circuit: circuit has " + std::to_string(c.num_qubits()) +
                           " qubits, state has " + std::to_string(state.num_qubits()));
    }
    for (const auto &g : c.gates()) apply_gate_inplace(state, g);
}

inline Statevector run_circuit(const Circuit &c, Statevector initial) {
    run_circuit_inplace(c, initial);
    return initial;
}

/// <Z_qubit>: sum of |amp|^2 signed by the qubit's bit (0 -> +, 1 -> -).
inline double expectation_z(const Statevector &state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw CircuitError("expectation_z: qubit out of range");
    }
    const std::uint64_t b = detail::bit_of(state.num_qubits(), qubit);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        acc += (i & b) ? -std::norm(state[i]) : std::norm(state[i]);
    }
    return acc;
}

/// Negative expectation classifies as 1; zero and above as 0.
constexpr std::uint8_t threshold_label(double expval) noexcept {
    return expval < 0.0 ? 1 : 0;
}

/// Full unitary of a circuit, column j = image of |j>.
inline Eigen::MatrixXcd circuit_unitary(const Circuit &c) {
    const std::size_t d = std::size_t{1} << c.num_qubits();
    Eigen::MatrixXcd u(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const auto s = run_circuit(c, Statevector::basis(c.num_qubits(), j));
        for (std::size_t i = 0; i < d; ++i) u(i, j) = s[i];
    }
    return u;
}

/// Haar unitary from 2*dim*dim standard-normal draws (real parts first):
/// QR of the complex Gaussian matrix with R's diagonal phases moved into Q.
inline Eigen::MatrixXcd haar_from_gaussians(std::size_t dim,
                                            std::span<const double> normals) {
    if (normals.size() != 2 * dim * dim) {
        throw SizeError("haar_from_gaussians: need 2*dim^2 normals");
    }
    Eigen::MatrixXcd z(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            z(i, j) = cplx{normals[i * dim + j], normals[dim * dim + i * dim + j]};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= mag > 0 ? d / mag : cplx{1.0, 0.0};
    }
    return q;
}

/// Haar-distributed dim x dim unitary, deterministic in `seed`.
inline Eigen::MatrixXcd haar_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim < 1) throw SizeError("haar_unitary: dim must be >= 1");
    Rng rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> draws(2 * dim * dim);
    for (auto &v : draws) v = normal(rng);
    return haar_from_gaussians(dim, draws);
}

} // namespace qbias
