#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lps/types.hpp"

namespace lps {

// The instance {1, ..., 2n}. Only n is stored.
class GroundSet {
 public:
  // Keeps every scaled interval test (c * q <= d * n) inside 64 bits.
  static constexpr Value kMaxN = Value{1} << 40;

  // Throws std::invalid_argument for n == 0 or n > kMaxN.
  explicit GroundSet(Value n);

  Value n() const noexcept { return n_; }
  Value size() const noexcept { return 2 * n_; }
  bool contains(Value x) const noexcept { return x >= 1 && x <= 2 * n_; }

  // Throws std::domain_error if x is outside [1, 2n].
  void require(Value x) const;

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  Value n_;
};

constexpr Value odd_part(Value x) noexcept {
  while (x != 0 && (x & 1) == 0) x >>= 1;
  return x;
}

// Exponent of 2 in x (x > 0).
constexpr unsigned two_adic(Value x) noexcept {
  unsigned e = 0;
  while (x != 0 && (x & 1) == 0) {
    x >>= 1;
    ++e;
  }
  return e;
}

// {q, 2q, 4q, ...} intersected with [1, 2n] for an odd root q.
struct Chain {
  Value root = 0;
  std::vector<Value> elements;

  std::size_t size() const noexcept { return elements.size(); }
  bool contains(Value x) const noexcept;
};

// Builds the chain rooted at the odd value `root` <= 2n.
Chain make_chain(const GroundSet& gs, Value root);

// All n chains, in increasing root order.
std::vector<Chain> chains(const GroundSet& gs);

// The chain whose root is the odd part of x.
Chain chain_of(const GroundSet& gs, Value x);

// One row of the chain-length histogram: the exact number of chains of a
// given length next to the floor estimate floor(n / 2^size).
struct ChainSizeClass {
  unsigned size = 0;
  Value exact = 0;
  Value floor_estimate = 0;
  std::int64_t deviation = 0;  // exact - floor_estimate
};

// Rows for sizes 1 .. longest chain, counted from the chains themselves.
std::vector<ChainSizeClass> chain_size_histogram(const GroundSet& gs);

// All (u, v) with 1 <= u < v <= 2n and u | v, ordered by u then v.
std::vector<std::pair<Value, Value>> divisor_pairs(const GroundSet& gs);

// First (u, v) among `members` with u | v and u != v, if any.
// Throws std::domain_error on out-of-range members.
std::optional<std::pair<Value, Value>> find_divisor_pair(const GroundSet& gs,
                                                         std::span<const Value> members);

bool is_primitive(const GroundSet& gs, std::span<const Value> members);

}  // namespace lps
