// Copyright 2026 The rinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "rinv/runtime.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace rinv {

namespace {

using json = nlohmann::ordered_json;

std::string hex64(std::uint64_t b) { return to_hex(b, 16); }
std::string hex64(double d) { return to_hex(std::bit_cast<std::uint64_t>(d), 16); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical(const KernelArtifact& k) {
  const int w = k.format.hex_width();
  std::ostringstream os;
  os << "fn=" << to_string(k.fn) << ";format=" << k.format.to_string() << ";ro_bits=" << k.ro_bits
     << ";flavor=" << to_string(k.flavor) << ";reduction=" << to_string(k.reduction)
     << ";basis=" << to_string(k.poly.basis) << ";coefficients=";
  for (double c : k.poly.coefficients) os << hex64(c) << ',';
  os << ";specials=";
  for (const auto& s : k.specials) os << to_hex(s.input, w) << ':' << hex64(s.output) << ',';
  os << ";regions=";
  for (const auto& r : k.regions) {
    os << to_hex(r.first, w) << '-' << to_hex(r.last, w) << ':' << hex64(r.output) << ',';
  }
  return os.str();
}

}  // namespace

std::string KernelArtifact::digest() const { return "fnv1a64:" + hex64(fnv1a(canonical(*this))); }

bool operator==(const KernelArtifact& a, const KernelArtifact& b) { return canonical(a) == canonical(b); }

std::string to_json(const KernelArtifact& k) {
  const int w = k.format.hex_width();
  json j;
  j["kind"] = "rinv-kernel";
  j["version"] = 1;
  j["fn"] = to_string(k.fn);
  j["format"] = k.format.to_string();
  j["ro_bits"] = k.ro_bits;
  j["flavor"] = to_string(k.flavor);
  j["range_reduction"] = to_string(k.reduction);
  j["output_compensation"] = {{"id", to_string(k.reduction)},
                              {"op", k.reduction == ReductionKind::Exp2Split ? "mul" : "add"}};
  json coeffs = json::array();
  for (double c : k.poly.coefficients) coeffs.push_back(hex64(c));
  j["polynomial"] = {{"scheme", "horner"},
                     {"basis", to_string(k.poly.basis)},
                     {"exponents", k.poly.exponents()},
                     {"coefficients", coeffs}};
  json specials = json::array();
  for (const auto& s : k.specials) specials.push_back({to_hex(s.input, w), hex64(s.output)});
  j["special_cases"] = specials;
  json regions = json::array();
  for (const auto& r : k.regions) regions.push_back({to_hex(r.first, w), to_hex(r.last, w), hex64(r.output)});
  j["constant_regions"] = regions;
  j["digest"] = k.digest();
  return j.dump(2) + "\n";
}

KernelArtifact artifact_from_json(const std::string& text) {
  KernelArtifact k;
  std::string stored;
  try {
    const json j = json::parse(text);
    if (j.at("kind").get<std::string>() != "rinv-kernel") throw std::runtime_error("not a kernel artifact");
    k.fn = parse_function(j.at("fn").get<std::string>());
    k.format = FloatFormat::parse(j.at("format").get<std::string>());
    k.ro_bits = j.at("ro_bits").get<int>();
    k.flavor = parse_flavor(j.at("flavor").get<std::string>());
    k.reduction = parse_reduction(j.at("range_reduction").get<std::string>());
    const json& p = j.at("polynomial");
    k.poly.basis = parse_basis(p.at("basis").get<std::string>());
    for (const auto& c : p.at("coefficients")) {
      k.poly.coefficients.push_back(std::bit_cast<double>(parse_hex(c.get<std::string>())));
    }
    for (const auto& s : j.at("special_cases")) {
      k.specials.push_back({parse_hex(s.at(0).get<std::string>()), parse_hex(s.at(1).get<std::string>())});
    }
    for (const auto& r : j.at("constant_regions")) {
      const std::uint64_t first = parse_hex(r.at(0).get<std::string>());
      const std::uint64_t last = parse_hex(r.at(1).get<std::string>());
      k.regions.push_back({first, last, fp_key(to_double(SoftValue(k.format, first))),
                           fp_key(to_double(SoftValue(k.format, last))), parse_hex(r.at(2).get<std::string>())});
    }
    stored = j.at("digest").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("kernel artifact: ") + e.what());
  }
  if (stored != k.digest()) {
    throw DigestMismatch("kernel artifact digest mismatch: stored " + stored + ", contents hash to " + k.digest());
  }
  return k;
}

void save_artifact(const std::filesystem::path& path, const KernelArtifact& k) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << to_json(k);
}

KernelArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return artifact_from_json(ss.str());
}

KernelArtifact assemble(const ConstraintFile& cf, const CandidatePoly& poly) {
  KernelArtifact k;
  k.fn = cf.fn;
  k.format = cf.format;
  k.ro_bits = cf.format.total_bits() + 2;
  k.flavor = cf.flavor;
  k.reduction = cf.reduction;
  k.poly = poly;
  k.specials = cf.specials;
  k.regions = cf.regions;
  return k;
}

Kernel::Kernel(const KernelArtifact& a)
    : format_(a.format),
      fn_(a.fn),
      flavor_(a.flavor),
      reduction_(a.reduction),
      basis_(a.poly.basis),
      regions_(a.regions),
      frac_bits_(a.format.fraction_bits()),
      exp_field_max_(a.format.exponent_field_max()),
      bias_(a.format.bias()),
      subnormal_scale_(std::ldexp(1.0, a.format.e_min() - a.format.fraction_bits())) {
  if (!a.format.embeds_in_binary64()) throw std::invalid_argument("Kernel: format does not embed in binary64");
  if (a.poly.coefficients.empty() || a.poly.coefficients.size() > kMaxCoefficients) {
    throw std::invalid_argument("Kernel: unsupported coefficient count");
  }
  count_ = a.poly.coefficients.size();
  std::copy(a.poly.coefficients.begin(), a.poly.coefficients.end(), c_.begin());
  std::vector<std::pair<std::int64_t, double>> sp;
  for (const auto& s : a.specials) {
    sp.emplace_back(fp_key(to_double(SoftValue(a.format, s.input))), std::bit_cast<double>(s.output));
  }
  std::sort(sp.begin(), sp.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [key, v] : sp) {
    special_keys_.push_back(key);
    special_values_.push_back(v);
  }
  std::sort(regions_.begin(), regions_.end(),
            [](const ConstantRegion& x, const ConstantRegion& y) { return x.key_lo < y.key_lo; });
}

double Kernel::decode(std::uint64_t bits) const {
  const bool neg = (bits >> (frac_bits_ + format_.exponent_bits())) & 1;
  const std::uint64_t e = (bits >> frac_bits_) & exp_field_max_;
  const std::uint64_t f = bits & ((std::uint64_t{1} << frac_bits_) - 1);
  double mag;
  if (e == exp_field_max_) {
    mag = f ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
  } else if (e == 0) {
    mag = static_cast<double>(f) * subnormal_scale_;  // exact
  } else {
    const std::uint64_t be = static_cast<std::uint64_t>(static_cast<std::int64_t>(e) - bias_ + 1023);
    mag = std::bit_cast<double>((be << 52) | (f << (52 - frac_bits_)));
  }
  return neg ? -mag : mag;
}

namespace {

template <bool RZ>
inline double op_add(double a, double b) {
  if constexpr (RZ) return eft::rza(a, b);
  else return a + b;
}

template <bool RZ>
inline double op_mul(double a, double b) {
  if constexpr (RZ) return eft::rzm(a, b);
  else return a * b;
}

template <bool RZ>
inline double horner_eval(const double* c, std::size_t n, PolyBasis basis, double x) {
  const double v = (basis == PolyBasis::Even || basis == PolyBasis::Odd) ? op_mul<RZ>(x, x) : x;
  double r = c[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) r = op_add<RZ>(op_mul<RZ>(r, v), c[i]);
  if (basis == PolyBasis::Odd || basis == PolyBasis::NoConstant) r = op_mul<RZ>(r, x);
  return r;
}

}  // namespace

double Kernel::eval_poly(double x_prime) const {
  return flavor_ == Flavor::RIO ? horner_eval<true>(c_.data(), count_, basis_, x_prime)
                                : horner_eval<false>(c_.data(), count_, basis_, x_prime);
}

double Kernel::domain_special(double x, bool& hit) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  hit = true;
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (fn_ == Function::Exp2) {
    if (std::isinf(x)) return x > 0 ? inf : 0.0;
  } else {
    if (x == 0) return -inf;
    if (std::signbit(x)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(x)) return inf;
  }
  hit = false;
  return 0.0;
}

double Kernel::eval(double x) const {
  bool hit;
  const double s = domain_special(x, hit);
  if (hit) return s;
  const std::int64_t key = fp_key(x);
  if (!regions_.empty()) {
    auto it = std::upper_bound(regions_.begin(), regions_.end(), key,
                               [](std::int64_t k, const ConstantRegion& r) { return k < r.key_lo; });
    if (it != regions_.begin() && std::prev(it)->key_hi >= key) {
      return std::bit_cast<double>(std::prev(it)->output);
    }
  }
  if (!special_keys_.empty()) {
    auto it = std::lower_bound(special_keys_.begin(), special_keys_.end(), key);
    if (it != special_keys_.end() && *it == key) return special_values_[it - special_keys_.begin()];
  }
  const Reduced r = range_reduce(reduction_, x);
  const bool mul = reduction_ == ReductionKind::Exp2Split;
  if (flavor_ == Flavor::RIO) {
    const double y = horner_eval<true>(c_.data(), count_, basis_, r.x_prime);
    return mul ? eft::rzm(y, r.param) : eft::rza(y, r.param);
  }
  const double y = horner_eval<false>(c_.data(), count_, basis_, r.x_prime);
  return mul ? y * r.param : y + r.param;
}

}  // namespace rinv
