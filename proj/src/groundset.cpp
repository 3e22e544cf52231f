#include "lps/groundset.hpp"

#include <algorithm>
#include <string>

namespace lps {

GroundSet::GroundSet(Value n) : n_(n) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (n > kMaxN)
    throw std::invalid_argument("n is too large: " + std::to_string(n));
}

void GroundSet::require(Value x) const {
  if (!contains(x))
    throw std::domain_error(std::to_string(x) + " is outside [1, " + std::to_string(size()) + "]");
}

bool Chain::contains(Value x) const noexcept {
  return std::binary_search(elements.begin(), elements.end(), x);
}

Chain make_chain(const GroundSet& gs, Value root) {
  gs.require(root);
  if ((root & 1) == 0) throw std::domain_error("chain root must be odd: " + std::to_string(root));
  Chain c{root, {}};
  for (Value x = root; x <= gs.size(); x <<= 1) c.elements.push_back(x);
  return c;
}

std::vector<Chain> chains(const GroundSet& gs) {
  std::vector<Chain> out;
  out.reserve(gs.n());
  for (Value q = 1; q < gs.size(); q += 2) out.push_back(make_chain(gs, q));
  return out;
}

Chain chain_of(const GroundSet& gs, Value x) {
  gs.require(x);
  return make_chain(gs, odd_part(x));
}

std::vector<ChainSizeClass> chain_size_histogram(const GroundSet& gs) {
  std::vector<Value> exact;
  for (Value q = 1; q < gs.size(); q += 2) {
    std::size_t len = 0;
    for (Value x = q; x <= gs.size(); x <<= 1) ++len;
    if (exact.size() < len) exact.resize(len, 0);
    ++exact[len - 1];
  }
  std::vector<ChainSizeClass> rows;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    ChainSizeClass row;
    row.size = static_cast<unsigned>(i + 1);
    row.exact = exact[i];
    row.floor_estimate = row.size < 64 ? gs.n() >> row.size : 0;
    row.deviation = static_cast<std::int64_t>(row.exact) - static_cast<std::int64_t>(row.floor_estimate);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<Value, Value>> divisor_pairs(const GroundSet& gs) {
  std::vector<std::pair<Value, Value>> out;
  const Value top = gs.size();
  for (Value u = 1; u <= top / 2; ++u)
    for (Value v = 2 * u; v <= top; v += u) out.emplace_back(u, v);
  return out;
}

std::optional<std::pair<Value, Value>> find_divisor_pair(const GroundSet& gs,
                                                         std::span<const Value> members) {
  const Value top = gs.size();
  std::vector<bool> present(top + 1, false);
  for (Value x : members) {
    gs.require(x);
    present[x] = true;
  }
  std::vector<Value> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (Value u : sorted)
    for (Value v = 2 * u; v <= top; v += u)
      if (present[v]) return std::pair{u, v};
  return std::nullopt;
}

bool is_primitive(const GroundSet& gs, std::span<const Value> members) {
  return !find_divisor_pair(gs, members).has_value();
}

}  // namespace lps
