#include "lps/bounds.hpp"

#include <cmath>
#include <map>

#include "lps/families.hpp"

namespace lps {

namespace {

void require_tolerance(double tol) {
  if (!(tol > 0 && tol < 1)) throw std::invalid_argument("tolerance must lie in (0, 1)");
}

// Smallest K >= first with (K + 2) / 2^(K + shift) <= tol.
unsigned truncation_point(double tol, unsigned first, int shift) {
  unsigned k = first;
  while (std::ldexp(static_cast<double>(k + 2), -static_cast<int>(k) - shift) > tol) ++k;
  return k;
}

double tail_at(unsigned k, int shift) {
  return std::ldexp(static_cast<double>(k + 2), -static_cast<int>(k) - shift);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

double log2_big(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log2_big: argument must be positive");
  const unsigned top = static_cast<unsigned>(boost::multiprecision::msb(v));
  if (top < 63) return std::log2(v.convert_to<double>());
  const unsigned shift = top - 62;
  const BigInt head = v >> shift;
  return std::log2(head.convert_to<double>()) + shift;
}

ExponentReport naive_exponent(double tol) {
  require_tolerance(tol);
  ExponentReport r;
  r.truncation_k = truncation_point(tol, 2, 0);
  for (unsigned k = 2; k <= r.truncation_k; ++k) r.value += std::log2(k) / std::ldexp(1.0, static_cast<int>(k));
  r.tail_bound = tail_at(r.truncation_k, 0);
  r.base = std::exp2(r.value);
  return r;
}

std::vector<BandWeight> band_weights(unsigned max_dyadic_k) {
  std::map<unsigned, Rational> by_blue;
  for (const BandSpec& b : kBandTable) {
    if (b.blue == 0) continue;
    const Rational lo(b.lo.num, b.lo.den);
    const Rational hi(b.hi.num, b.hi.den);
    // Odd roots fill half of the band.
    by_blue[b.blue] += (hi - lo) / 2;
  }
  for (unsigned k = kFirstDyadicBand; k <= max_dyadic_k; ++k) {
    const Rational lo(1, BigInt(1) << (k + 1));
    const Rational hi(1, BigInt(1) << k);
    by_blue[k] += (hi - lo) / 2;
  }
  std::vector<BandWeight> out;
  for (const auto& [blue, density] : by_blue) out.push_back({blue, density});
  return out;
}

Rational improved_rational_part_from_bands() {
  Rational total = 0;
  for (const BandWeight& w : band_weights(kFirstDyadicBand)) {
    if (w.blue == 2) total += w.density;
    if (w.blue == 4) total += 2 * w.density;
  }
  return total;
}

ExponentReport improved_exponent(double tol) {
  require_tolerance(tol);
  ExponentReport r;
  r.truncation_k = truncation_point(tol, 5, 2);

  r.value = to_double(Rational(233, 720)) + to_double(Rational(599, 10080)) * std::log2(3.0) +
            to_double(Rational(121, 3360));
  for (unsigned k = 5; k <= r.truncation_k; ++k)
    r.value += std::log2(k) / std::ldexp(1.0, static_cast<int>(k) + 2);
  r.tail_bound = tail_at(r.truncation_k, 2);
  r.base = std::exp2(r.value);

  double from_bands = 0;
  for (const BandWeight& w : band_weights(r.truncation_k)) from_bands += to_double(w.density) * std::log2(w.blue);
  r.cross_check = from_bands;
  if (std::fabs(from_bands - r.value) > tol)
    throw InternalError("band densities give " + std::to_string(from_bands) + ", closed form gives " +
                        std::to_string(r.value));
  return r;
}

std::pair<ExponentReport, ExponentReport> lower_exponents() {
  ExponentReport simple;
  simple.value = 1.0 / 3.0;
  simple.base = std::cbrt(2.0);
  simple.cross_check = std::exp2(simple.value);

  ExponentReport quad;
  quad.value = 0.25 + std::log2(3.0) / 12.0;
  quad.base = std::pow(2.0, 0.25) * std::pow(3.0, 1.0 / 12.0);
  quad.cross_check = std::exp2(quad.value);
  return {simple, quad};
}

BigInt finite_upper(const Coloring& c) {
  const GroundSet& gs = c.ground();
  BigInt product = 1;
  for (Value q = 1; q < gs.size(); q += 2) {
    unsigned alive = 0;
    for (Value x = q; x <= gs.size(); x <<= 1)
      if (c.color(x) != Color::red) ++alive;
    if (alive == 0) throw InternalError("chain " + std::to_string(q) + " has no non-red element");
    product *= alive;
  }
  return product;
}

BigInt naive_upper(const GroundSet& gs) { return finite_upper(uniform_blue(gs)); }

BigInt floor_formula_product(const GroundSet& gs) {
  BigInt product = 1;
  for (unsigned k = 2; k < 64 && (gs.n() >> k) > 0; ++k) {
    const Value count = gs.n() >> k;
    for (Value i = 0; i < count; ++i) product *= k;
  }
  return product;
}

SandwichReport sandwich_report(const GroundSet& gs, const std::optional<BigInt>& exact) {
  SandwichReport r;
  r.n = gs.n();
  r.lower_simple = simple_family_count(gs);
  r.lower_quadruple = quadruple_family_count(gs);
  r.exact = exact;
  r.upper_blue = finite_upper(propagate_coloring(gs));
  r.upper_naive = naive_upper(gs);
  r.floor_formula = floor_formula_product(gs);

  auto require = [](const BigInt& lo, const char* lo_name, const BigInt& hi, const char* hi_name) {
    if (lo > hi)
      throw OrderingViolation(std::string(lo_name) + " = " + lo.str() + " exceeds " + hi_name + " = " + hi.str());
  };
  if (exact) {
    require(r.lower_simple, "lower_simple", *exact, "exact");
    require(r.lower_quadruple, "lower_quadruple", *exact, "exact");
    require(*exact, "exact", r.upper_blue, "upper_blue");
  }
  require(r.lower_simple, "lower_simple", r.upper_blue, "upper_blue");
  require(r.lower_quadruple, "lower_quadruple", r.upper_blue, "upper_blue");
  require(r.upper_blue, "upper_blue", r.upper_naive, "upper_naive");
  return r;
}

}  // namespace lps
