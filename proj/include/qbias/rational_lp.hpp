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

/// @file rational_lp.hpp
/// Dense two-phase simplex over GMP rationals with Bland's rule. Small
/// problems only; every operation is exact.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "qbias/error.hpp"

namespace qbias::lp {

using Rational = mpq_class;

enum class Relation { LessEq, GreaterEq, Equal };

struct Constraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::LessEq;
    Rational rhs = 0;
};

/// maximize objective . x subject to constraints and x >= 0.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Rational> objective;
    std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    Rational value = 0;
    std::vector<Rational> x;
};

namespace detail {

/// Tableau with an explicit reduced-profit row. Row i of `rows` holds the
/// coefficients of basic variable basis[i]; `profit[j]` is c_j - c_B B^-1 A_j
/// and `value` the current objective.
struct Tableau {
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<std::size_t> basis;
    std::vector<Rational> profit;
    Rational value = 0;

    std::size_t cols() const { return profit.size(); }

    void pivot(std::size_t r, std::size_t c) {
        const Rational p = rows[r][c];
        for (auto &v : rows[r]) v /= p;
        rhs[r] /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = 0; j < cols(); ++j) {
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
            }
            rhs[i] -= f * rhs[r];
        }
        if (profit[c] != 0) {
            const Rational f = profit[c];
            for (std::size_t j = 0; j < cols(); ++j) {
                if (rows[r][j] != 0) profit[j] -= f * rows[r][j];
            }
            value += f * rhs[r];
        }
        basis[r] = c;
    }

    /// Recomputes profit/value for objective `c` under the current basis.
    void set_objective(const std::vector<Rational> &c) {
        profit = c;
        value = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Rational cb = c[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < cols(); ++j) {
                if (rows[i][j] != 0) profit[j] -= cb * rows[i][j];
            }
            value += cb * rhs[i];
        }
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic
    /// variable among tied ratios. Returns false when unbounded.
    bool optimize(std::size_t usable_cols) {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < usable_cols; ++j) {
                if (profit[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][*enter] <= 0) continue;
                const Rational ratio = rhs[i] / rows[i][*enter];
                if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }
};

} // namespace detail

/// Phase 1 finds a basic feasible point using artificial variables on the
/// >= and = rows; phase 2 optimizes the real objective from there.
inline Solution solve(const Problem &p) {
    const std::size_t n = p.num_vars;
    if (p.objective.size() != n) throw SizeError("lp: objective length mismatch");
    const std::size_t m = p.constraints.size();

    // Flip rows so every right-hand side is nonnegative.
    std::vector<Constraint> rows = p.constraints;
    std::size_t slack_cols = 0, art_cols = 0;
    for (auto &row : rows) {
        if (row.coeffs.size() != n) throw SizeError("lp: constraint length mismatch");
        if (row.rhs < 0) {
            for (auto &v : row.coeffs) v = -v;
            row.rhs = -row.rhs;
            if (row.rel == Relation::LessEq) {
                row.rel = Relation::GreaterEq;
            } else if (row.rel == Relation::GreaterEq) {
                row.rel = Relation::LessEq;
            }
        }
        if (row.rel != Relation::Equal) ++slack_cols;
        if (row.rel != Relation::LessEq) ++art_cols;
    }
    const std::size_t art_begin = n + slack_cols;
    const std::size_t total = art_begin + art_cols;

    detail::Tableau t;
    t.rows.assign(m, std::vector<Rational>(total, 0));
    t.rhs.resize(m);
    t.basis.resize(m);
    std::size_t s = n, a = art_begin;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = rows[i].coeffs[j];
        t.rhs[i] = rows[i].rhs;
        switch (rows[i].rel) {
        case Relation::LessEq:
            t.rows[i][s] = 1;
            t.basis[i] = s++;
            break;
        case Relation::GreaterEq:
            t.rows[i][s++] = -1;
            t.rows[i][a] = 1;
            t.basis[i] = a++;
            break;
        case Relation::Equal:
            t.rows[i][a] = 1;
            t.basis[i] = a++;
            break;
        }
    }

    Solution sol;
    if (art_cols > 0) {
        std::vector<Rational> phase1(total, 0);
        for (std::size_t j = art_begin; j < total; ++j) phase1[j] = -1;
        t.set_objective(phase1);
        t.optimize(total);
        if (t.value < 0) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < t.rows.size();) {
            if (t.basis[i] < art_begin) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < art_begin; ++j) {
                if (t.rows[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col) {
                t.pivot(i, *col);
                ++i;
            } else {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.rhs.erase(t.rhs.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    std::vector<Rational> phase2(total, 0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = p.objective[j];
    t.set_objective(phase2);
    if (!t.optimize(art_begin)) {
        sol.status = Status::Unbounded;
        return sol;
    }
    sol.status = Status::Optimal;
    sol.value = t.value;
    sol.x.assign(n, 0);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
    }
    return sol;
}

} // namespace qbias::lp
