// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "rinv/bigrational.hpp"

namespace rinv::lp {

/// Feasibility of lo_i <= sum_j a_ij c_j <= hi_i over free real c, decided
/// in exact rational arithmetic by a bounded-variable simplex with Bland's
/// rule. Rows and bounds can be added and tightened between checks; the
/// previous basis is kept as a warm start.
class Solver {
 public:
  explicit Solver(std::size_t num_vars);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_rows() const { return row_var_bounds_.size(); }

  /// Adds lo <= a . c <= hi and returns its row id.
  std::size_t add_row(const std::vector<mpq_class>& a, const mpq_class& lo, const mpq_class& hi);
  void set_bounds(std::size_t row, const mpq_class& lo, const mpq_class& hi);
  const mpq_class& lower(std::size_t row) const { return lower_[num_vars_ + row]; }
  const mpq_class& upper(std::size_t row) const { return upper_[num_vars_ + row]; }

  /// True when the current system is feasible; the solution is then
  /// available from solution().
  bool check();
  std::vector<mpq_class> solution() const;

  std::size_t pivots() const { return pivots_; }

 private:
  bool bounded(std::size_t v) const { return v >= num_vars_; }
  void update_nonbasic(std::size_t v, const mpq_class& value);
  void pivot(std::size_t row, std::size_t col);

  std::size_t num_vars_;
  // Variables 0..n-1 are the free unknowns, n+i is the slack of row i.
  std::vector<mpq_class> value_;
  std::vector<mpq_class> lower_;
  std::vector<mpq_class> upper_;
  std::vector<bool> basic_;
  std::vector<std::size_t> pos_;  // tableau row if basic, column otherwise
  std::vector<std::size_t> row_basic_;
  std::vector<std::size_t> col_var_;
  std::vector<std::vector<mpq_class>> tableau_;  // basic = sum_col t[row][col] * col_var
  std::vector<std::size_t> row_var_bounds_;
  std::size_t pivots_ = 0;
};

struct Row {
  std::vector<BigRational> coefficients;
  BigRational lo;
  BigRational hi;
};

struct Problem {
  std::size_t num_vars;
  std::vector<Row> rows;
};

/// A feasible point, or nullopt when the system is infeasible.
std::optional<std::vector<BigRational>> solve(const Problem& p);

}  // namespace rinv::lp
