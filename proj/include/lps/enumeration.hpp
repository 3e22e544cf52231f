#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lps/coloring.hpp"
#include "lps/groundset.hpp"

namespace lps {

class ResultCache;

enum class Method : std::uint8_t { bruteforce, chain_backtracking, cache };

const char* to_string(Method m) noexcept;

// Order in which the chains of a component are fixed during search.
enum class ChainOrder : std::uint8_t { decreasing_root, increasing_root };

struct CountOptions {
  // Drop propagate_coloring's red elements before searching.
  bool prune_red = true;
  // Compute always_present / sometimes_present.
  bool membership = true;
  ChainOrder order = ChainOrder::decreasing_root;
  unsigned threads = 1;
  std::optional<std::chrono::milliseconds> timeout;
};

struct CountResult {
  Value n = 0;
  BigInt count;
  bool has_membership = false;
  std::vector<Value> always_present;     // in every LPS
  std::vector<Value> sometimes_present;  // in at least one LPS
  std::chrono::nanoseconds elapsed{0};
  Method method = Method::chain_backtracking;
};

// Chains (by odd root) linked when their admissible elements contain a
// cross-chain divisor pair.
struct ConflictGraph {
  std::vector<Value> roots;                    // increasing
  std::vector<std::vector<Value>> candidates;  // admissible elements per root
  std::vector<std::pair<Value, Value>> edges;  // (r, r') with r | r', r < r'
  std::vector<std::vector<Value>> components;  // roots, increasing; ordered by smallest root
};

// Graph over the non-red elements of c.
ConflictGraph conflict_graph(const Coloring& c);

class CountRefused : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised when CountOptions::timeout expires. Carries the product of the
// components that finished.
class CountTimeout : public std::runtime_error {
 public:
  CountTimeout(std::size_t done, std::size_t total, BigInt partial);

  std::size_t components_done() const noexcept { return done_; }
  std::size_t components_total() const noexcept { return total_; }
  const BigInt& partial_product() const noexcept { return partial_; }

 private:
  std::size_t done_;
  std::size_t total_;
  BigInt partial_;
};

inline constexpr Value kBruteforceLimit = 14;

// Tests every n-element subset of [1, 2n] for primitivity. Refuses n above
// max_n (itself capped at 31).
CountResult count_bruteforce(const GroundSet& gs, Value max_n = kBruteforceLimit);

// Exact D(n): prune red elements, split the conflict graph into components,
// count one-per-chain selections in each, multiply. Within a component the
// chains are decided in order and selections that leave the later chains
// with the same admissible candidates are merged, so work scales with the
// number of distinct such states rather than with D(n).
CountResult count_lps(const GroundSet& gs, const CountOptions& options = {});

// Calls visit(members) for every LPS, members sorted increasingly; stops
// early when visit returns false. Returns the number of sets visited.
std::uint64_t enumerate_lps(const GroundSet& gs, const std::function<bool(std::span<const Value>)>& visit,
                            bool prune_red = true);

// (intersection, union) of all LPS.
std::pair<std::vector<Value>, std::vector<Value>> membership_summary(const GroundSet& gs,
                                                                     CountOptions options = {});

struct GrowthRow {
  Value n = 0;
  BigInt count;
  double nth_root = 0;
  Method method = Method::chain_backtracking;
};

// D(n) and D(n)^(1/n) for n in [lo, hi]. Reads and extends `cache` when
// given.
std::vector<GrowthRow> growth_table(Value lo, Value hi, CountOptions options = {}, ResultCache* cache = nullptr);

}  // namespace lps
