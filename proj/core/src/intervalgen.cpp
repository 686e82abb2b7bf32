// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/intervalgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "rinv/parallel.hpp"

namespace rinv {

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::RIO: return "rio";
    case Flavor::RIIB: return "riib";
    case Flavor::RnOnly: return "rn-only";
  }
  return "?";
}

Flavor parse_flavor(std::string_view text) {
  for (Flavor f : {Flavor::RIO, Flavor::RIIB, Flavor::RnOnly}) {
    if (text == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown flavor: " + std::string(text));
}

namespace {

constexpr std::int64_t kMaxKey = 0x7fefffffffffffffLL;

double from_key(std::int64_t key) {
  if (key >= 0) return std::bit_cast<double>(static_cast<std::uint64_t>(key));
  return std::bit_cast<double>(eft::kSignBit | static_cast<std::uint64_t>(-(key + 1)));
}

double as_double(std::uint64_t bits) { return std::bit_cast<double>(bits); }
std::uint64_t as_bits(double d) { return std::bit_cast<std::uint64_t>(d); }

bool within(const BoundedValue& img, double l, double h) {
  return fp_less_equal(l, img.lo) && fp_less_equal(img.hi, h);
}

double seed_for(const ExprProgram& oc, std::span<const double> params, double l, double h) {
  if (oc.ops().size() != 1 || oc.ops()[0].lhs.kind != Operand::Kind::Input ||
      oc.ops()[0].rhs.kind != Operand::Kind::Param) {
    throw std::invalid_argument("reduce_interval: output compensation must be y' op param");
  }
  const BigRational mid = (BigRational::from_double(l) + BigRational::from_double(h)) / 2;
  const BigRational p = BigRational::from_double(params[oc.ops()[0].rhs.index]);
  const BigRational inv = oc.ops()[0].kind == OpKind::Mul ? mid / p : mid - p;
  if (inv.is_zero()) return 0.0;
  return round64(inv, Rounding::RZ);
}

std::string hex64(double d) { return to_hex(as_bits(d), 16); }

}  // namespace

BoundedValue oc_image(const ExprProgram& oc, double y, std::span<const double> params, Flavor flavor) {
  switch (flavor) {
    case Flavor::RIIB: return eval_bounds(oc, y, y, params);
    case Flavor::RIO: return BoundedValue::point(eval_rz(oc, y, params));
    case Flavor::RnOnly: return BoundedValue::point(eval_soft(oc, y, Rounding::RN, params));
  }
  return {};
}

ReducedConstraint reduce_interval(std::uint64_t input, double x_prime, const RoundingInterval& target,
                                  const ExprProgram& oc, std::span<const double> params, Flavor flavor) {
  const double l = target.lo_value();
  const double h = target.hi_value();
  auto ok = [&](std::int64_t key) {
    try {
      return within(oc_image(oc, from_key(key), params, flavor), l, h);
    } catch (const BoundsOverflow&) {
      return false;
    }
  };

  std::int64_t seed = fp_key(seed_for(oc, params, l, h));
  if (!ok(seed)) {
    std::optional<std::int64_t> found;
    for (std::int64_t d = 1; d <= 64 && !found; ++d) {
      if (seed + d <= kMaxKey && ok(seed + d)) found = seed + d;
      else if (seed - d >= -kMaxKey - 1 && ok(seed - d)) found = seed - d;
    }
    if (!found) {
      throw InfeasibleInput("no reduced output maps into [" + hex64(l) + ", " + hex64(h) +
                            "] for input " + to_hex(input, 16));
    }
    seed = *found;
  }

  // Gallop away from the seed until the check fails, then bisect.
  auto extend = [&](int dir) {
    std::int64_t good = seed;
    std::int64_t bad = 0;
    bool have_bad = false;
    const std::int64_t limit = dir > 0 ? kMaxKey : -kMaxKey - 1;
    for (std::uint64_t step = 1;; step *= 2) {
      // Distances span up to 2^64 - 1, so measure them unsigned.
      const std::uint64_t room = dir > 0 ? static_cast<std::uint64_t>(limit) - static_cast<std::uint64_t>(good)
                                         : static_cast<std::uint64_t>(good) - static_cast<std::uint64_t>(limit);
      if (room == 0) break;
      const std::uint64_t move = std::min(step, room);
      const std::int64_t cand = static_cast<std::int64_t>(
          dir > 0 ? static_cast<std::uint64_t>(good) + move : static_cast<std::uint64_t>(good) - move);
      if (ok(cand)) {
        good = cand;
      } else {
        bad = cand;
        have_bad = true;
        break;
      }
    }
    if (!have_bad) return good;
    while ((dir > 0 ? static_cast<std::uint64_t>(bad) - static_cast<std::uint64_t>(good)
                    : static_cast<std::uint64_t>(good) - static_cast<std::uint64_t>(bad)) > 1) {
      const std::int64_t mid = std::midpoint(good, bad);
      if (ok(mid)) good = mid;
      else bad = mid;
    }
    return good;
  };
  const std::int64_t hi_key = extend(+1);
  const std::int64_t lo_key = extend(-1);

  ReducedConstraint rc{x_prime, from_key(lo_key), from_key(hi_key), input};
  const BoundedValue a = oc_image(oc, rc.l_prime, params, flavor);
  const BoundedValue m = oc_image(oc, from_key(std::midpoint(lo_key, hi_key)), params, flavor);
  const BoundedValue b = oc_image(oc, rc.h_prime, params, flavor);
  if (!fp_less_equal(a.lo, m.lo) || !fp_less_equal(m.lo, b.lo) || !fp_less_equal(a.hi, m.hi) ||
      !fp_less_equal(m.hi, b.hi)) {
    throw NonMonotoneCompensation("output compensation is not monotone around input " + to_hex(input, 16));
  }
  const BoundedValue whole = flavor == Flavor::RIIB ? eval_bounds(oc, rc.l_prime, rc.h_prime, params)
                                                    : BoundedValue{a.lo, b.hi};
  if (!within(whole, l, h)) {
    throw NonMonotoneCompensation("reduced interval re-check failed for input " + to_hex(input, 16));
  }
  return rc;
}

ConstraintFile generate_constraints(const IntervalFile& oracle, Flavor flavor, unsigned workers) {
  return generate_constraints(oracle, flavor, default_reduction(oracle.fn), workers);
}

ConstraintFile generate_constraints(const IntervalFile& oracle, Flavor flavor, ReductionKind reduction,
                                    unsigned workers) {
  ConstraintFile out{oracle.fn, oracle.format, reduction, flavor, {}, {}, {}};

  struct Entry {
    std::uint64_t input;
    double x;
    std::int64_t key;
    double l;
    double h;
  };
  std::vector<Entry> entries;
  for (const IntervalRecord& r : oracle.records) {
    const SoftValue x(oracle.format, r.input);
    if (oracle::special_value(oracle.fn, x)) continue;
    const double xd = to_double(x);
    entries.push_back({r.input, xd, fp_key(xd), as_double(r.lo), as_double(r.hi)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });

  // Constant regions: greedy maximal runs whose intervals share a point.
  std::vector<const Entry*> rest;
  for (std::size_t i = 0; i < entries.size();) {
    double lo = entries[i].l;
    double hi = entries[i].h;
    std::size_t j = i + 1;
    while (j < entries.size()) {
      const double nlo = fp_max(lo, entries[j].l);
      const double nhi = fp_min(hi, entries[j].h);
      if (fp_less(nhi, nlo)) break;
      lo = nlo;
      hi = nhi;
      ++j;
    }
    if (j - i >= kMinRegionRun) {
      out.regions.push_back({entries[i].input, entries[j - 1].input, entries[i].key, entries[j - 1].key, as_bits(lo)});
    } else {
      for (std::size_t k = i; k < j; ++k) rest.push_back(&entries[k]);
    }
    i = j;
  }

  // Reduced intervals for the polynomial domain.
  const ExprProgram oc = oc_program(reduction);
  std::vector<std::optional<ReducedConstraint>> reduced(rest.size());
  parallel_shards(rest.size(), workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      const Entry& e = *rest[i];
      if (!reduction_applies(reduction, e.x)) continue;
      const Reduced r = range_reduce(reduction, e.x);
      const double params[1] = {r.param};
      try {
        reduced[i] = reduce_interval(e.input, r.x_prime, {as_bits(e.l), as_bits(e.h)}, oc, params, flavor);
      } catch (const InfeasibleInput&) {
      }
    }
  });

  // One constraint per x': intersect, narrowest first; inputs that would
  // empty the intersection become special cases.
  std::map<std::int64_t, std::vector<ReducedConstraint>> groups;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (reduced[i]) {
      groups[fp_key(reduced[i]->x_prime)].push_back(*reduced[i]);
    } else {
      out.specials.push_back({rest[i]->input, as_bits(rest[i]->l)});
    }
  }
  const std::map<std::uint64_t, double> low_of = [&] {
    std::map<std::uint64_t, double> m;
    for (const Entry* e : rest) m[e->input] = e->l;
    return m;
  }();
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(), [](const ReducedConstraint& a, const ReducedConstraint& b) {
      const auto wa = fp_key(a.h_prime) - fp_key(a.l_prime);
      const auto wb = fp_key(b.h_prime) - fp_key(b.l_prime);
      return wa != wb ? wa < wb : a.input < b.input;
    });
    ReducedConstraint merged = group.front();
    for (std::size_t i = 1; i < group.size(); ++i) {
      const double nlo = fp_max(merged.l_prime, group[i].l_prime);
      const double nhi = fp_min(merged.h_prime, group[i].h_prime);
      if (fp_less(nhi, nlo)) {
        out.specials.push_back({group[i].input, as_bits(low_of.at(group[i].input))});
        continue;
      }
      merged.l_prime = nlo;
      merged.h_prime = nhi;
    }
    out.constraints.push_back(merged);
  }
  std::sort(out.specials.begin(), out.specials.end(),
            [](const SpecialCase& a, const SpecialCase& b) { return a.input < b.input; });
  return out;
}

void write_constraint_file(std::ostream& os, const ConstraintFile& file) {
  const int w = file.format.hex_width();
  os << "fn " << to_string(file.fn) << " format " << file.format.to_string() << " oc "
     << to_string(file.reduction) << " flavor " << to_string(file.flavor) << '\n';
  for (const auto& r : file.regions) {
    os << "region " << to_hex(r.first, w) << ' ' << to_hex(r.last, w) << ' ' << to_hex(r.output, 16) << '\n';
  }
  for (const auto& s : file.specials) {
    os << "special " << to_hex(s.input, w) << ' ' << to_hex(s.output, 16) << '\n';
  }
  for (const auto& c : file.constraints) {
    os << hex64(c.x_prime) << ' ' << hex64(c.l_prime) << ' ' << hex64(c.h_prime) << ' ' << to_hex(c.input, w)
       << '\n';
  }
}

ConstraintFile read_constraint_file(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("constraint file: missing header");
  std::istringstream hs(line);
  std::string k1, fn, k2, e, m, k3, oc, k4, flavor;
  if (!(hs >> k1 >> fn >> k2 >> e >> m >> k3 >> oc >> k4 >> flavor) || k1 != "fn" || k2 != "format" ||
      k3 != "oc" || k4 != "flavor") {
    throw std::runtime_error("constraint file: malformed header: " + line);
  }
  ConstraintFile file{parse_function(fn), FloatFormat::parse(e + " " + m), parse_reduction(oc),
                      parse_flavor(flavor), {}, {}, {}};
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "region" && tok.size() == 4) {
      const std::uint64_t first = parse_hex(tok[1]);
      const std::uint64_t last = parse_hex(tok[2]);
      file.regions.push_back({first, last, fp_key(to_double(SoftValue(file.format, first))),
                              fp_key(to_double(SoftValue(file.format, last))), parse_hex(tok[3])});
    } else if (tok[0] == "special" && tok.size() == 3) {
      file.specials.push_back({parse_hex(tok[1]), parse_hex(tok[2])});
    } else if (tok.size() == 4) {
      file.constraints.push_back({as_double(parse_hex(tok[0])), as_double(parse_hex(tok[1])),
                                  as_double(parse_hex(tok[2])), parse_hex(tok[3])});
    } else {
      throw std::runtime_error("constraint file: malformed line: " + line);
    }
  }
  return file;
}

}  // namespace rinv
