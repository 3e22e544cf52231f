#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lps/coloring.hpp"
#include "lps/groundset.hpp"

namespace lps {

// A growth exponent in bits per element: log2(count) / n tends to at most
// (or at least) `value`, so the base of the exponential is 2^value.
struct ExponentReport {
  double value = 0;
  unsigned truncation_k = 0;  // last series term summed (0 for closed forms)
  double tail_bound = 0;      // rigorous bound on the omitted tail
  double base = 0;
  // Same quantity from an independent route, when one exists.
  std::optional<double> cross_check;
};

// sum_{k>=2} log2(k) / 2^k, truncated once the tail bound
// sum_{k>K} k / 2^k = (K + 2) / 2^K drops to tol. Requires 0 < tol < 1.
ExponentReport naive_exponent(double tol);

// 233/720 + (599/10080) log2 3 + 121/3360 + sum_{k>=5} log2(k) / 2^(k+2),
// with cross_check recomputed from the band table densities. Throws
// InternalError if the two disagree by more than tol.
ExponentReport improved_exponent(double tol);

// Per-blue-count rational weights of the band table: for each blue count b,
// the density of odd roots (per unit n) whose chain has b blue elements.
// Dyadic bands k = 4 .. max_k are included.
struct BandWeight {
  unsigned blue = 0;
  Rational density;
};
std::vector<BandWeight> band_weights(unsigned max_dyadic_k);

// Exact rational part of the improved exponent contributed by the J bands
// and the k = 4 dyadic band (log2 2 = 1 and log2 4 = 2 terms).
Rational improved_rational_part_from_bands();

// {1/3} and {1/4 + log2(3) / 12}, as (simple, quadruple).
std::pair<ExponentReport, ExponentReport> lower_exponents();

// Product over chains of the number of non-red elements. An upper bound on
// D(n) for any sound coloring. Throws InternalError on an all-red chain.
BigInt finite_upper(const Coloring& c);

// Product of the chain lengths: finite_upper of the all-blue coloring.
BigInt naive_upper(const GroundSet& gs);

// prod_{k>=2} k^floor(n / 2^k), the floor-formula product. Informational
// only: it is not a bound for every n (n = 1 gives 1 < D(1) = 2).
BigInt floor_formula_product(const GroundSet& gs);

struct SandwichReport {
  Value n = 0;
  BigInt lower_simple;
  BigInt lower_quadruple;
  std::optional<BigInt> exact;
  BigInt upper_blue;
  BigInt upper_naive;
  BigInt floor_formula;
};

// Raised by sandwich_report when an inequality of the chain fails.
class OrderingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Fills the report from the families, propagate_coloring and the chain
// lengths, then asserts max(lower) <= exact <= upper_blue <= upper_naive
// (exact only when supplied) and lower <= upper_blue.
SandwichReport sandwich_report(const GroundSet& gs, const std::optional<BigInt>& exact = std::nullopt);

// log2 of a positive big integer, as a double.
double log2_big(const BigInt& v);

}  // namespace lps
