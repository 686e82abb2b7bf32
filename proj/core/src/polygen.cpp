// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/polygen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>

#include "rinv/lp.hpp"
#include "rinv/parallel.hpp"

namespace rinv {

namespace {

constexpr std::size_t kMaxRoundsPerDegree = 4000;

mpq_class exact(double d) { return BigRational::from_double(d).raw(); }

double from_key(std::int64_t key) {
  if (key >= 0) return std::bit_cast<double>(static_cast<std::uint64_t>(key));
  return std::bit_cast<double>(eft::kSignBit | static_cast<std::uint64_t>(-(key + 1)));
}

double to_binary64(const mpq_class& q) {
  if (sgn(q) == 0) return 0.0;
  return round64(BigRational(q), Rounding::RN);
}

}  // namespace

bool operator==(const CandidatePoly& a, const CandidatePoly& b) {
  if (a.basis != b.basis || a.coefficients.size() != b.coefficients.size()) return false;
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.coefficients[i]) != std::bit_cast<std::uint64_t>(b.coefficients[i])) {
      return false;
    }
  }
  return true;
}

int default_start_degree(FloatFormat format) { return (format.precision() + 2 + 1) / 2 - 1; }

BoundedValue poly_image(const ExprProgram& p, double x, Flavor flavor) {
  switch (flavor) {
    case Flavor::RIIB: return eval_bounds(p, x, x);
    case Flavor::RIO: return BoundedValue::point(eval_rz(p, x));
    case Flavor::RnOnly: return BoundedValue::point(eval_soft(p, x, Rounding::RN));
  }
  return {};
}

std::vector<std::size_t> violated_constraints(const ExprProgram& p, std::span<const ReducedConstraint> cs,
                                              Flavor flavor, unsigned workers) {
  std::vector<std::uint8_t> bad(cs.size(), 0);
  parallel_shards(cs.size(), workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const BoundedValue img = poly_image(p, cs[i].x_prime, flavor);
        if (fp_less(img.lo, cs[i].l_prime)) bad[i] |= 1;
        if (fp_less(cs[i].h_prime, img.hi)) bad[i] |= 2;
      } catch (const BoundsOverflow&) {
        bad[i] = 3;
      }
    }
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (bad[i]) out.push_back(i);
  }
  return out;
}

GenerationResult generate(std::span<const ReducedConstraint> cs, Flavor flavor, const DegreePolicy& policy,
                          unsigned workers) {
  if (cs.empty()) throw std::invalid_argument("generate: no constraints");
  const int start = std::max(0, policy.start_degree);
  const PolyBasis basis = policy.basis.value_or(PolyBasis::Dense);
  std::vector<std::uint64_t> last_violators;

  for (int degree = start; degree <= policy.max_degree; ++degree) {
    const std::size_t n = static_cast<std::size_t>(degree) + 1;
    const std::vector<int> exps = basis_exponents(basis, n);
    lp::Solver solver(n);
    std::map<std::size_t, std::size_t> row_of;  // constraint -> LP row
    std::vector<double> lcur(cs.size()), hcur(cs.size());
    std::vector<std::int64_t> lstep(cs.size(), 1), hstep(cs.size(), 1);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      lcur[i] = cs[i].l_prime;
      hcur[i] = cs[i].h_prime;
    }
    auto add = [&](std::size_t i) {
      std::vector<mpq_class> a(n);
      const mpq_class x = exact(cs[i].x_prime);
      for (std::size_t j = 0; j < n; ++j) {
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(exps[j]));
        mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(exps[j]));
        a[j] = mpq_class(num, den);
        a[j].canonicalize();
      }
      row_of[i] = solver.add_row(a, exact(lcur[i]), exact(hcur[i]));
    };

    const std::size_t k = std::min(cs.size(), std::max<std::size_t>(2 * n, 64));
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t i = s * cs.size() / k;
      if (!row_of.count(i)) add(i);
    }

    GenerationStats stats{degree, 0, 0, 0};
    while (stats.rounds < kMaxRoundsPerDegree) {
      ++stats.rounds;
      if (!solver.check()) {
        if (stats.rounds == 1) {  // infeasible before any rounding: blame the sampled rows
          last_violators.clear();
          for (const auto& [i, row] : row_of) last_violators.push_back(cs[i].input);
        }
        break;
      }
      CandidatePoly poly{basis, {}};
      for (const auto& q : solver.solution()) poly.coefficients.push_back(to_binary64(q));
      const ExprProgram prog = poly.program();
      std::vector<std::size_t> bad = violated_constraints(prog, cs, flavor, workers);
      if (bad.empty()) {
        stats.lp_rows = solver.num_rows();
        stats.pivots = solver.pivots();
        return {std::move(poly), stats};
      }
      last_violators.clear();
      for (std::size_t i : bad) last_violators.push_back(cs[i].input);
      // Hardest (narrowest) constraints first.
      std::stable_sort(bad.begin(), bad.end(), [&](std::size_t a, std::size_t b) {
        const auto wa = fp_key(cs[a].h_prime) - fp_key(cs[a].l_prime);
        const auto wb = fp_key(cs[b].h_prime) - fp_key(cs[b].l_prime);
        return wa < wb;
      });
      std::size_t budget = std::max<std::size_t>(solver.num_rows(), 2 * n);
      for (std::size_t i : bad) {
        auto it = row_of.find(i);
        if (it == row_of.end()) {
          if (budget == 0) continue;
          --budget;
          add(i);
          continue;
        }
        // Already in the LP: pull the violated side in and grow the step
        // for repeat offenders.
        const BoundedValue img = [&] {
          try {
            return poly_image(prog, cs[i].x_prime, flavor);
          } catch (const BoundsOverflow&) {
            return BoundedValue{-INFINITY, INFINITY};
          }
        }();
        if (fp_less(img.lo, cs[i].l_prime)) {
          lcur[i] = from_key(fp_key(lcur[i]) + lstep[i]);
          lstep[i] *= 2;
        }
        if (fp_less(cs[i].h_prime, img.hi)) {
          hcur[i] = from_key(fp_key(hcur[i]) - hstep[i]);
          hstep[i] *= 2;
        }
        solver.set_bounds(it->second, exact(lcur[i]), exact(hcur[i]));
      }
    }
  }
  throw Ungeneratable("no polynomial up to degree " + std::to_string(policy.max_degree) +
                          " satisfies all reduced constraints",
                      last_violators);
}

}  // namespace rinv
