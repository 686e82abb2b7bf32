// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/lp.hpp"

#include <stdexcept>

namespace rinv::lp {

Solver::Solver(std::size_t num_vars)
    : num_vars_(num_vars),
      value_(num_vars),
      lower_(num_vars),
      upper_(num_vars),
      basic_(num_vars, false),
      pos_(num_vars) {
  for (std::size_t j = 0; j < num_vars; ++j) {
    pos_[j] = j;
    col_var_.push_back(j);
  }
}

std::size_t Solver::add_row(const std::vector<mpq_class>& a, const mpq_class& lo, const mpq_class& hi) {
  if (a.size() != num_vars_) throw std::invalid_argument("lp: row width mismatch");
  std::vector<mpq_class> row(num_vars_);
  mpq_class v = 0;
  for (std::size_t j = 0; j < num_vars_; ++j) {
    if (sgn(a[j]) == 0) continue;
    v += a[j] * value_[j];
    if (!basic_[j]) {
      row[pos_[j]] += a[j];
    } else {
      const auto& src = tableau_[pos_[j]];
      for (std::size_t c = 0; c < num_vars_; ++c) {
        if (sgn(src[c]) != 0) row[c] += a[j] * src[c];
      }
    }
  }
  const std::size_t var = value_.size();
  value_.push_back(v);
  lower_.push_back(lo);
  upper_.push_back(hi);
  basic_.push_back(true);
  pos_.push_back(tableau_.size());
  row_basic_.push_back(var);
  tableau_.push_back(std::move(row));
  row_var_bounds_.push_back(var);
  return row_var_bounds_.size() - 1;
}

void Solver::set_bounds(std::size_t row, const mpq_class& lo, const mpq_class& hi) {
  const std::size_t v = num_vars_ + row;
  lower_[v] = lo;
  upper_[v] = hi;
  if (!basic_[v]) {
    if (value_[v] < lo) update_nonbasic(v, lo);
    else if (value_[v] > hi) update_nonbasic(v, hi);
  }
}

void Solver::update_nonbasic(std::size_t v, const mpq_class& value) {
  const mpq_class delta = value - value_[v];
  const std::size_t col = pos_[v];
  for (std::size_t r = 0; r < tableau_.size(); ++r) {
    const mpq_class& a = tableau_[r][col];
    if (sgn(a) != 0) value_[row_basic_[r]] += a * delta;
  }
  value_[v] = value;
}

void Solver::pivot(std::size_t row, std::size_t col) {
  ++pivots_;
  const std::size_t xb = row_basic_[row];
  const std::size_t xn = col_var_[col];
  auto& pr = tableau_[row];
  // xb = sum a_k x_k  =>  xn = (xb - sum_{k != col} a_k x_k) / a_col
  const mpq_class inv = 1 / pr[col];
  for (std::size_t c = 0; c < num_vars_; ++c) {
    if (c == col) pr[c] = inv;
    else if (sgn(pr[c]) != 0) pr[c] = -pr[c] * inv;
  }
  for (std::size_t r = 0; r < tableau_.size(); ++r) {
    if (r == row) continue;
    auto& tr = tableau_[r];
    const mpq_class f = tr[col];
    if (sgn(f) == 0) continue;
    for (std::size_t c = 0; c < num_vars_; ++c) {
      if (c == col) tr[c] = f * pr[c];
      else if (sgn(pr[c]) != 0) tr[c] += f * pr[c];
    }
  }
  row_basic_[row] = xn;
  col_var_[col] = xb;
  basic_[xn] = true;
  basic_[xb] = false;
  pos_[xn] = row;
  pos_[xb] = col;
}

bool Solver::check() {
  for (std::size_t v = num_vars_; v < value_.size(); ++v) {
    if (lower_[v] > upper_[v]) return false;
  }
  for (;;) {
    // Smallest-index basic variable out of bounds.
    std::size_t bad_var = value_.size();
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      const std::size_t v = row_basic_[r];
      if (v < bad_var && bounded(v) && (value_[v] < lower_[v] || value_[v] > upper_[v])) bad_var = v;
    }
    if (bad_var == value_.size()) return true;
    const std::size_t row = pos_[bad_var];
    const bool raise = value_[bad_var] < lower_[bad_var];
    const mpq_class target = raise ? lower_[bad_var] : upper_[bad_var];

    // Smallest-index nonbasic variable with room in the needed direction.
    std::size_t best_col = num_vars_;
    std::size_t best_var = value_.size();
    for (std::size_t c = 0; c < num_vars_; ++c) {
      const mpq_class& a = tableau_[row][c];
      const int s = sgn(a);
      if (s == 0) continue;
      const std::size_t v = col_var_[c];
      const bool increase = (s > 0) == raise;
      bool room = true;
      if (bounded(v)) room = increase ? value_[v] < upper_[v] : value_[v] > lower_[v];
      if (room && v < best_var) {
        best_var = v;
        best_col = c;
      }
    }
    if (best_col == num_vars_) return false;

    const mpq_class theta = (target - value_[bad_var]) / tableau_[row][best_col];
    value_[bad_var] = target;
    value_[best_var] += theta;
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      if (r == row) continue;
      const mpq_class& a = tableau_[r][best_col];
      if (sgn(a) != 0) value_[row_basic_[r]] += a * theta;
    }
    pivot(row, best_col);
  }
}

std::vector<mpq_class> Solver::solution() const {
  return {value_.begin(), value_.begin() + static_cast<std::ptrdiff_t>(num_vars_)};
}

std::optional<std::vector<BigRational>> solve(const Problem& p) {
  Solver s(p.num_vars);
  for (const Row& r : p.rows) {
    if (r.lo > r.hi) return std::nullopt;
    std::vector<mpq_class> a;
    a.reserve(r.coefficients.size());
    for (const auto& c : r.coefficients) a.push_back(c.raw());
    s.add_row(a, r.lo.raw(), r.hi.raw());
  }
  if (!s.check()) return std::nullopt;
  std::vector<BigRational> out;
  for (const auto& q : s.solution()) out.emplace_back(q);
  return out;
}

}  // namespace rinv::lp
