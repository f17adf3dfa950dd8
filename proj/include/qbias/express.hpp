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

/// @file express.hpp
/// Boolean expressivity.
///
/// For amplitude encoding every encoded state |psi_i> is real with support
/// on the readout-|0> indices 2j, so <psi_i| U^dag Z_r U |psi_i> is a
/// linear form in the diagonal entries and real off-diagonal parts of the
/// Hermitian H = U^dag Z_r U restricted to that support. A labelling is
/// refuted when the system {form_i < 0 for label 1, form_i >= 0 for label 0}
/// has no solution; this is decided exactly as max t s.t. strict forms
/// <= -t. The relaxation ignores the spectrum of H, so a feasible verdict is
/// confirmed separately by random search for a witness circuit.

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qbias/ansatz.hpp"
#include "qbias/boolfn.hpp"
#include "qbias/error.hpp"
#include "qbias/model.hpp"
#include "qbias/parallel.hpp"
#include "qbias/qsim.hpp"
#include "qbias/rational_lp.hpp"
#include "qbias/rng.hpp"

namespace qbias::express {

using lp::Rational;

struct LinearForm {
    enum class Kind { Strict, NonStrict };
    /// Truth-table position of the input this row constrains.
    std::size_t input = 0;
    std::vector<Rational> coeffs;
    /// Strict: form < 0 (label 1). NonStrict: form >= 0 (label 0).
    Kind kind = Kind::NonStrict;
};

struct ConstraintSystem {
    std::vector<std::string> variables;
    std::vector<std::uint8_t> is_diagonal;
    std::vector<LinearForm> constraints;
    /// Adds -1 <= H_kk <= 1 to the feasibility problem.
    bool bound_diagonal = false;
};

/// Labels of inputs 1 .. 2^n - 1 (the all-zeros input is not encodable).
inline std::string restrict_labels(const BooleanFunction &f) {
    return f.to_string().substr(1);
}

inline BooleanFunction unrestrict_labels(std::string_view restricted) {
    return BooleanFunction::from_string("0" + std::string(restricted));
}

/// One row per encodable input in ascending order. Variables are H_kk and
/// ReH_kl (k < l) over readout-|0> indices 2j, named 1-based.
inline ConstraintSystem build_amplitude_constraints(int n, std::string_view restricted,
                                                    bool bound_diagonal = false) {
    if (n < 2 || n > 4) throw SizeError("build_amplitude_constraints: n must be in [2, 4]");
    const std::size_t len = (std::size_t{1} << n) - 1;
    if (restricted.size() != len) {
        throw SizeError("build_amplitude_constraints: expected " + std::to_string(len) + " labels");
    }
    const auto un = static_cast<std::size_t>(n);
    ConstraintSystem sys;
    sys.bound_diagonal = bound_diagonal;
    // var_of[k][l] for support positions k <= l (bit positions).
    std::vector<std::vector<std::size_t>> var_of(un, std::vector<std::size_t>(un, 0));
    for (std::size_t k = 0; k < un; ++k) {
        var_of[k][k] = sys.variables.size();
        sys.variables.push_back("H_" + std::to_string(2 * k + 1) + std::to_string(2 * k + 1));
        sys.is_diagonal.push_back(1);
    }
    for (std::size_t k = 0; k < un; ++k) {
        for (std::size_t l = k + 1; l < un; ++l) {
            var_of[k][l] = sys.variables.size();
            sys.variables.push_back("ReH_" + std::to_string(2 * k + 1) + std::to_string(2 * l + 1));
            sys.is_diagonal.push_back(0);
        }
    }
    for (std::size_t i = 1; i <= len; ++i) {
        const char c = restricted[i - 1];
        if (c != '0' && c != '1') throw UsageError("build_amplitude_constraints: labels must be 0/1");
        const auto x = input_from_index(i, n);
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < un; ++j) {
            if (x[j]) support.push_back(j);
        }
        const Rational inv(1, static_cast<unsigned long>(support.size()));
        LinearForm row;
        row.input = i;
        row.kind = c == '1' ? LinearForm::Kind::Strict : LinearForm::Kind::NonStrict;
        row.coeffs.assign(sys.variables.size(), 0);
        for (std::size_t a = 0; a < support.size(); ++a) {
            row.coeffs[var_of[support[a]][support[a]]] = inv;
            for (std::size_t b = a + 1; b < support.size(); ++b) {
                row.coeffs[var_of[support[a]][support[b]]] = 2 * inv;
            }
        }
        sys.constraints.push_back(std::move(row));
    }
    return sys;
}

inline ConstraintSystem build_amplitude_constraints(int n, const BooleanFunction &f,
                                                    bool bound_diagonal = false) {
    if (f.size() != (std::size_t{1} << n)) {
        throw SizeError("build_amplitude_constraints: function length must be 2^n");
    }
    return build_amplitude_constraints(n, restrict_labels(f), bound_diagonal);
}

struct FeasibilityVerdict {
    enum class Status { Infeasible, FeasibleRelaxation };
    Status status = Status::Infeasible;
    /// Optimal margin t* (0 when infeasible).
    Rational margin = 0;
    /// Variable assignment attaining the margin (feasible case only).
    std::vector<Rational> witness;
};

inline std::string_view status_token(FeasibilityVerdict::Status s) {
    return s == FeasibilityVerdict::Status::Infeasible ? "infeasible" : "feasible";
}

/// Each free variable h is split as h+ - h-. Variables: h+ (v), h- (v), t.
inline FeasibilityVerdict check_feasibility(const ConstraintSystem &sys) {
    const std::size_t v = sys.variables.size();
    lp::Problem p;
    p.num_vars = 2 * v + 1;
    p.objective.assign(p.num_vars, 0);
    p.objective[2 * v] = 1;
    auto row = [&](const std::vector<Rational> &a, Rational sign) {
        lp::Constraint c;
        c.coeffs.assign(p.num_vars, 0);
        for (std::size_t j = 0; j < v; ++j) {
            c.coeffs[j] = sign * a[j];
            c.coeffs[v + j] = -sign * a[j];
        }
        return c;
    };
    for (const auto &f : sys.constraints) {
        if (f.coeffs.size() != v) throw SizeError("check_feasibility: row length mismatch");
        if (f.kind == LinearForm::Kind::Strict) {
            auto c = row(f.coeffs, 1); // a.h + t <= 0
            c.coeffs[2 * v] = 1;
            p.constraints.push_back(std::move(c));
        } else {
            p.constraints.push_back(row(f.coeffs, -1)); // -a.h <= 0
        }
    }
    {
        lp::Constraint cap;
        cap.coeffs.assign(p.num_vars, 0);
        cap.coeffs[2 * v] = 1;
        cap.rhs = 1;
        p.constraints.push_back(std::move(cap));
    }
    if (sys.bound_diagonal) {
        for (std::size_t j = 0; j < v; ++j) {
            if (!sys.is_diagonal[j]) continue;
            lp::Constraint hi;
            hi.coeffs.assign(p.num_vars, 0);
            hi.coeffs[j] = 1;
            hi.coeffs[v + j] = -1;
            hi.rhs = 1;
            lp::Constraint lo = hi;
            lo.rel = lp::Relation::GreaterEq;
            lo.rhs = -1;
            p.constraints.push_back(std::move(hi));
            p.constraints.push_back(std::move(lo));
        }
    }
    const auto sol = lp::solve(p);
    FeasibilityVerdict out;
    if (sol.status != lp::Status::Optimal || sol.value <= 0) return out;
    out.status = FeasibilityVerdict::Status::FeasibleRelaxation;
    out.margin = sol.value;
    out.witness.resize(v);
    for (std::size_t j = 0; j < v; ++j) out.witness[j] = sol.x[j] - sol.x[v + j];
    return out;
}

struct CensusEntry {
    std::uint64_t index = 0;
    /// Labels of inputs 1 .. 2^n - 1.
    std::string function;
    FeasibilityVerdict::Status status = FeasibilityVerdict::Status::Infeasible;
};

struct CensusResult {
    int n = 0;
    std::size_t feasible_count = 0;
    std::vector<std::string> infeasible;
    std::vector<CensusEntry> entries;
};

struct CensusOptions {
    std::size_t workers = 1;
    bool bound_diagonal = false;
    /// Resumable progress file; empty disables checkpointing.
    std::filesystem::path checkpoint;
    std::size_t block = 512;
};

/// Restricted labelling number `index`: the first label is the top bit.
inline std::string census_function(int n, std::uint64_t index) {
    const std::size_t len = (std::size_t{1} << n) - 1;
    std::string s(len, '0');
    for (std::size_t i = 0; i < len; ++i) {
        if ((index >> (len - 1 - i)) & 1U) s[i] = '1';
    }
    return s;
}

/// Decides every labelling of the encodable inputs. With a checkpoint the
/// file holds "index,status" lines and finished blocks are skipped on
/// restart.
inline CensusResult amplitude_expressivity_census(int n, const CensusOptions &opt = {}) {
    if (n < 2 || n > 4) throw SizeError("census: n must be in [2, 4]");
    const std::uint64_t total = std::uint64_t{1} << ((std::size_t{1} << n) - 1);
    std::vector<std::int8_t> status(total, -1);
    if (!opt.checkpoint.empty() && std::filesystem::exists(opt.checkpoint)) {
        std::ifstream in(opt.checkpoint);
        std::string line;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            const auto idx = std::stoull(line.substr(0, comma));
            if (idx >= total) throw UsageError("census checkpoint does not match n");
            status[idx] = line.substr(comma + 1) == "feasible" ? 1 : 0;
        }
    }
    std::ofstream out;
    if (!opt.checkpoint.empty()) {
        out.open(opt.checkpoint, std::ios::app);
        if (!out) throw Error("cannot open census checkpoint " + opt.checkpoint.string());
    }
    const std::size_t block = std::max<std::size_t>(opt.block, 1);
    for (std::uint64_t start = 0; start < total; start += block) {
        const std::uint64_t stop = std::min<std::uint64_t>(total, start + block);
        std::vector<std::uint64_t> todo;
        for (auto i = start; i < stop; ++i) {
            if (status[i] < 0) todo.push_back(i);
        }
        if (todo.empty()) continue;
        parallel_chunks(todo.size(), opt.workers, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t k = b; k < e; ++k) {
                const auto sys = build_amplitude_constraints(n, census_function(n, todo[k]),
                                                             opt.bound_diagonal);
                status[todo[k]] =
                    check_feasibility(sys).status == FeasibilityVerdict::Status::FeasibleRelaxation;
            }
        });
        if (out) {
            for (auto i : todo) out << i << ',' << (status[i] ? "feasible" : "infeasible") << '\n';
            out.flush();
        }
    }
    CensusResult r;
    r.n = n;
    r.entries.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        CensusEntry e{i, census_function(n, i),
                      status[i] ? FeasibilityVerdict::Status::FeasibleRelaxation
                                : FeasibilityVerdict::Status::Infeasible};
        if (status[i]) {
            ++r.feasible_count;
        } else {
            r.infeasible.push_back(e.function);
        }
        r.entries.push_back(std::move(e));
    }
    return r;
}

/// First parameter vector (sample k from stream k of `seed`) whose function
/// equals `f`; inputs the model pins to 0 must be 0 in `f`.
inline std::optional<ParamVector> witness_search(const QnnModel &model, const BooleanFunction &f,
                                                 std::size_t budget, std::uint64_t seed,
                                                 ParamRange range = {}) {
    if (budget < 1) throw SizeError("witness_search: budget must be >= 1");
    for (std::size_t k = 0; k < budget; ++k) {
        Rng rng(seed, k);
        auto params = sample_parameters(model.ansatz(), rng, range);
        if (model.sample_function(params) == f) return params;
    }
    return std::nullopt;
}

struct WitnessRun {
    /// Per wanted function, the first sample index that produced it.
    std::vector<std::optional<std::uint64_t>> first_hit;
    std::uint64_t samples_used = 0;
    std::size_t found = 0;
};

/// One shared random search for many functions. Samples are evaluated in
/// batches and hits recorded in index order, so the outcome does not depend
/// on the worker count; the run stops after the batch in which the last
/// wanted function appears.
inline WitnessRun witness_run(const QnnModel &model, const std::vector<BooleanFunction> &wanted,
                              std::uint64_t budget, std::uint64_t seed, std::size_t workers = 1,
                              ParamRange range = {}, std::size_t batch = 4096) {
    std::map<BooleanFunction, std::size_t> where;
    for (std::size_t i = 0; i < wanted.size(); ++i) where.emplace(wanted[i], i);
    WitnessRun run;
    run.first_hit.assign(wanted.size(), std::nullopt);
    std::vector<BooleanFunction> got(batch);
    for (std::uint64_t start = 0; start < budget && run.found < where.size(); start += batch) {
        const std::uint64_t count = std::min<std::uint64_t>(batch, budget - start);
        parallel_chunks(count, workers, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t k = b; k < e; ++k) {
                Rng rng(seed, start + k);
                got[k] = model.sample_function(sample_parameters(model.ansatz(), rng, range));
            }
        });
        for (std::size_t k = 0; k < count; ++k) {
            const auto it = where.find(got[k]);
            if (it != where.end() && !run.first_hit[it->second]) {
                run.first_hit[it->second] = start + k;
                ++run.found;
            }
        }
        run.samples_used = start + count;
    }
    return run;
}

struct TwirlBlock {
    enum class Kind { U3, GeneralTwoQubit, BooleanQNN };
    Kind kind = Kind::U3;
    /// Data qubits of the Boolean QNN block.
    int data_qubits = 0;

    static TwirlBlock u3() { return {Kind::U3, 0}; }
    static TwirlBlock general_two_qubit() { return {Kind::GeneralTwoQubit, 0}; }
    static TwirlBlock boolean_qnn(int d) { return {Kind::BooleanQNN, d}; }

    int qubits() const {
        switch (kind) {
        case Kind::U3: return 1;
        case Kind::GeneralTwoQubit: return 2;
        case Kind::BooleanQNN: return data_qubits + 1;
        }
        return 0;
    }
};

struct TwirlReport {
    int qubits = 0;
    std::uint64_t samples = 0;
    double max_abs_deviation = 0.0;
    /// True when the deviation refers to the readout's reduced state
    /// rather than the full register.
    bool readout_marginal = false;
};

/// Monte Carlo mean of U|a><a|U^dag over uniform [0, 2pi) parameters,
/// compared entrywise with the maximally mixed state. The Boolean QNN keeps
/// the data register in its basis state, so for it the readout's 2x2
/// reduced state is compared with I/2.
inline TwirlReport twirl_check(const TwirlBlock &block, std::uint64_t initial_basis_state,
                               std::uint64_t samples, std::uint64_t seed,
                               std::size_t workers = 1) {
    if (samples < 100) throw SizeError("twirl_check: samples must be >= 100");
    const int q = block.qubits();
    if (initial_basis_state >= (std::uint64_t{1} << q)) {
        throw SizeError("twirl_check: initial basis state out of range");
    }
    const bool marginal = block.kind == TwirlBlock::Kind::BooleanQNN;
    const std::size_t dim = marginal ? 2 : std::size_t{1} << q;
    const AnsatzSpec spec = block.kind == TwirlBlock::Kind::BooleanQNN
                                ? AnsatzSpec::boolean_qnn(block.data_qubits)
                                : AnsatzSpec::general_two_qubit();
    const Statevector start = Statevector::basis(q, initial_basis_state);

    auto accumulate = [&](std::uint64_t k, std::vector<cplx> &acc) {
        Rng rng(seed, k);
        Statevector s = start;
        if (block.kind == TwirlBlock::Kind::U3) {
            const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double la = rng.uniform(0.0, 2.0 * std::numbers::pi);
            apply_gate_inplace(s, Gate::u3(0, th, ph, la));
        } else {
            run_circuit_inplace(build_circuit(spec, sample_parameters(spec, rng)), s);
        }
        if (marginal) {
            // trace out data qubits: readout is the least significant bit
            for (std::size_t z = 0; z < s.dim(); z += 2) {
                const cplx a0 = s[z], a1 = s[z + 1];
                acc[0] += a0 * std::conj(a0);
                acc[1] += a0 * std::conj(a1);
                acc[2] += a1 * std::conj(a0);
                acc[3] += a1 * std::conj(a1);
            }
        } else {
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c) acc[r * dim + c] += s[r] * std::conj(s[c]);
        }
    };

    // Fixed-size blocks summed in index order keep the result independent
    // of the worker count.
    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t nblocks = (samples + kBlock - 1) / kBlock;
    std::vector<std::vector<cplx>> partial(nblocks, std::vector<cplx>(dim * dim, cplx{0.0, 0.0}));
    parallel_chunks(nblocks, workers, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t blk = b; blk < e; ++blk) {
            const std::uint64_t lo = blk * kBlock, hi = std::min(samples, lo + kBlock);
            for (std::uint64_t k = lo; k < hi; ++k) accumulate(k, partial[blk]);
        }
    });
    std::vector<cplx> mean(dim * dim, cplx{0.0, 0.0});
    for (const auto &p : partial)
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += p[i];
    TwirlReport rep;
    rep.qubits = q;
    rep.samples = samples;
    rep.readout_marginal = marginal;
    const double inv = 1.0 / static_cast<double>(samples);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const cplx target = r == c ? cplx{1.0 / static_cast<double>(dim), 0.0} : cplx{0.0, 0.0};
            rep.max_abs_deviation =
                std::max(rep.max_abs_deviation, std::abs(mean[r * dim + c] * inv - target));
        }
    }
    return rep;
}

} // namespace qbias::express
