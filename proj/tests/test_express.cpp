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

#include <filesystem>
#include <fstream>
#include <vector>

#include "qbias/express.hpp"
#include "qbias/rational_lp.hpp"

namespace {

using namespace qbias;
using lp::Rational;
using Verdict = express::FeasibilityVerdict::Status;

lp::Constraint row(std::vector<Rational> a, lp::Relation rel, Rational rhs) {
    return {std::move(a), rel, rhs};
}

TEST(Lp, SmallOptimum) {
    // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
    lp::Problem p{2, {3, 2}, {}};
    p.constraints.push_back(row({1, 1}, lp::Relation::LessEq, 4));
    p.constraints.push_back(row({1, 3}, lp::Relation::LessEq, 6));
    p.constraints.push_back(row({1, 0}, lp::Relation::LessEq, 3));
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_EQ(s.value, Rational(11));
    EXPECT_EQ(s.x[0], Rational(3));
    EXPECT_EQ(s.x[1], Rational(1));
}

TEST(Lp, PhaseOneDetectsInfeasibility) {
    lp::Problem p{1, {1}, {}};
    p.constraints.push_back(row({1}, lp::Relation::GreaterEq, 2));
    p.constraints.push_back(row({1}, lp::Relation::LessEq, 1));
    EXPECT_EQ(lp::solve(p).status, lp::Status::Infeasible);
}

TEST(Lp, EqualityAndExactFractions) {
    // max x + y, 3x + y = 1, x - y >= -1/3
    lp::Problem p{2, {1, 1}, {}};
    p.constraints.push_back(row({3, 1}, lp::Relation::Equal, 1));
    p.constraints.push_back(row({1, -1}, lp::Relation::GreaterEq, Rational(-1, 3)));
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_EQ(s.value, Rational(2, 3));
    EXPECT_EQ(s.x[0], Rational(1, 6));
    EXPECT_EQ(s.x[1], Rational(1, 2));
}

TEST(Lp, Unbounded) {
    lp::Problem p{2, {1, 0}, {}};
    p.constraints.push_back(row({1, -1}, lp::Relation::LessEq, 1));
    EXPECT_EQ(lp::solve(p).status, lp::Status::Unbounded);
}

TEST(Lp, RedundantEqualityRows) {
    lp::Problem p{2, {1, 2}, {}};
    p.constraints.push_back(row({1, 1}, lp::Relation::Equal, 2));
    p.constraints.push_back(row({2, 2}, lp::Relation::Equal, 4));
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_EQ(s.value, Rational(4));
}

std::size_t var(const express::ConstraintSystem &sys, const std::string &name) {
    for (std::size_t i = 0; i < sys.variables.size(); ++i)
        if (sys.variables[i] == name) return i;
    ADD_FAILURE() << "no variable " << name;
    return 0;
}

TEST(Constraints, RowsForThreeInputs) {
    const auto sys = express::build_amplitude_constraints(3, parity_function(3));
    ASSERT_EQ(sys.constraints.size(), 7u);
    const auto &r001 = sys.constraints[0];
    EXPECT_EQ(r001.coeffs[var(sys, "H_55")], Rational(1));
    int nonzero = 0;
    for (const auto &c : r001.coeffs) nonzero += c != 0;
    EXPECT_EQ(nonzero, 1);
    const auto &r011 = sys.constraints[2];
    EXPECT_EQ(r011.coeffs[var(sys, "H_33")], Rational(1, 2));
    EXPECT_EQ(r011.coeffs[var(sys, "H_55")], Rational(1, 2));
    EXPECT_EQ(r011.coeffs[var(sys, "ReH_35")], Rational(1));
    EXPECT_EQ(r011.coeffs[var(sys, "H_11")], Rational(0));
    const auto &r111 = sys.constraints[6];
    EXPECT_EQ(r111.coeffs[var(sys, "H_11")], Rational(1, 3));
    EXPECT_EQ(r111.coeffs[var(sys, "ReH_13")], Rational(2, 3));
    using K = express::LinearForm::Kind;
    const std::vector<K> want = {K::Strict, K::Strict, K::NonStrict, K::Strict,
                                 K::NonStrict, K::NonStrict, K::Strict};
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(sys.constraints[i].kind, want[i]) << i;
    EXPECT_THROW(express::build_amplitude_constraints(5, std::string(31, '0')), SizeError);
}

TEST(Feasibility, Basics) {
    express::ConstraintSystem empty;
    const auto v = express::check_feasibility(empty);
    EXPECT_EQ(v.status, Verdict::FeasibleRelaxation);
    EXPECT_EQ(v.margin, Rational(1));

    express::ConstraintSystem one;
    one.variables = {"H_55"};
    one.is_diagonal = {1};
    one.constraints.push_back({1, {Rational(1)}, express::LinearForm::Kind::Strict});
    one.bound_diagonal = true;
    const auto w = express::check_feasibility(one);
    ASSERT_EQ(w.status, Verdict::FeasibleRelaxation);
    EXPECT_LT(w.witness[0], 0);
    EXPECT_GE(w.witness[0], -1);

    EXPECT_EQ(express::check_feasibility(express::build_amplitude_constraints(3, parity_function(3))).status,
              Verdict::Infeasible);
    EXPECT_EQ(express::check_feasibility(express::build_amplitude_constraints(3, BooleanFunction(8))).status,
              Verdict::FeasibleRelaxation);
}

TEST(Census, ThreeInputs) {
    const auto c = express::amplitude_expressivity_census(3);
    EXPECT_EQ(c.feasible_count, 126u);
    EXPECT_EQ(c.infeasible, (std::vector<std::string>{"0010110", "1101001"}));
    EXPECT_EQ(c.entries[0].status, Verdict::FeasibleRelaxation);
    express::CensusOptions opt;
    opt.workers = 3;
    opt.bound_diagonal = true;
    const auto d = express::amplitude_expressivity_census(3, opt);
    EXPECT_EQ(d.infeasible, c.infeasible);
}

TEST(Census, CheckpointResume) {
    const auto path = std::filesystem::temp_directory_path() / "qbias_census_ckpt.txt";
    std::filesystem::remove(path);
    {
        // A partial file with one wrong-looking but trusted entry proves
        // that finished indices are not recomputed.
        std::ofstream f(path);
        f << "0,infeasible\n";
    }
    express::CensusOptions opt;
    opt.checkpoint = path;
    opt.block = 16;
    const auto c = express::amplitude_expressivity_census(3, opt);
    EXPECT_EQ(c.feasible_count, 125u);
    std::ifstream in(path);
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 128u);
    const auto again = express::amplitude_expressivity_census(3, opt);
    EXPECT_EQ(again.feasible_count, 125u);
    std::filesystem::remove(path);
}

QnnModel boolqnn(EncodingMethod m, int n) {
    return QnnModel(m, AnsatzSpec::boolean_qnn(data_qubits(m, n)), n);
}

std::vector<BooleanFunction> all_functions(int n) {
    std::vector<BooleanFunction> out;
    const std::size_t len = std::size_t{1} << n;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
        BooleanFunction f(len);
        for (std::size_t i = 0; i < len; ++i) f.set(i, (v >> (len - 1 - i)) & 1U);
        out.push_back(f);
    }
    return out;
}

TEST(Witness, SearchAndRuns) {
    const auto basis = boolqnn(EncodingMethod::basis(), 3);
    EXPECT_TRUE(express::witness_search(basis, BooleanFunction(8), 1000, 1).has_value());
    const auto amp = boolqnn(EncodingMethod::amplitude(), 3);
    EXPECT_FALSE(express::witness_search(amp, parity_function(3), 20000, 1).has_value());
    const auto fns = all_functions(3);
    const auto a = express::witness_run(basis, fns, 200000, 5, 1);
    const auto b = express::witness_run(basis, fns, 200000, 5, 3);
    EXPECT_EQ(a.found, 256u);
    EXPECT_EQ(a.first_hit, b.first_hit);
    EXPECT_EQ(a.samples_used, b.samples_used);
}

TEST(Witness, ZZFullExpressivity) {
    const auto zz = boolqnn(EncodingMethod::zz(), 3);
    const auto run = express::witness_run(zz, all_functions(3), 10000000, 7);
    EXPECT_EQ(run.found, 256u);
}

TEST(Twirl, SingleQubit) {
    const auto a = express::twirl_check(express::TwirlBlock::u3(), 0, 1000000, 1);
    EXPECT_LT(a.max_abs_deviation, 5e-3);
    const auto b = express::twirl_check(express::TwirlBlock::u3(), 1, 1000000, 1);
    EXPECT_LT(b.max_abs_deviation, 5e-3);
    EXPECT_LT(std::max(a.max_abs_deviation, b.max_abs_deviation),
              2 * std::min(a.max_abs_deviation, b.max_abs_deviation) + 1e-3);
}

TEST(Twirl, TwoQubitAndBooleanQnn) {
    for (std::uint64_t init : {0u, 2u, 3u}) {
        const auto r = express::twirl_check(express::TwirlBlock::general_two_qubit(), init, 100000, 2);
        EXPECT_EQ(r.qubits, 2);
        EXPECT_LT(r.max_abs_deviation, 2e-2);
    }
    const auto q = express::twirl_check(express::TwirlBlock::boolean_qnn(3), 0b1010, 100000, 3);
    EXPECT_TRUE(q.readout_marginal);
    EXPECT_LT(q.max_abs_deviation, 1e-2);
    const auto w1 = express::twirl_check(express::TwirlBlock::u3(), 0, 5000, 4, 1);
    const auto w3 = express::twirl_check(express::TwirlBlock::u3(), 0, 5000, 4, 3);
    EXPECT_EQ(w1.max_abs_deviation, w3.max_abs_deviation);
    EXPECT_THROW(express::twirl_check(express::TwirlBlock::u3(), 2, 1000, 0), SizeError);
}

} // namespace
