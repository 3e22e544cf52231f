#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "lps/groundset.hpp"

using namespace lps;

namespace {

std::vector<std::vector<Value>> elements_of(const std::vector<Chain>& cs) {
  std::vector<std::vector<Value>> out;
  for (const Chain& c : cs) out.push_back(c.elements);
  return out;
}

}  // namespace

TEST_CASE("ground set rejects n = 0") {
  CHECK_THROWS_AS(GroundSet(0), std::invalid_argument);
  CHECK_THROWS_AS(GroundSet(GroundSet::kMaxN + 1), std::invalid_argument);
  const GroundSet gs(5);
  CHECK(gs.size() == 10);
  CHECK(gs.contains(10));
  CHECK_FALSE(gs.contains(11));
  CHECK_FALSE(gs.contains(0));
}

TEST_CASE("chains of small instances") {
  using V = std::vector<std::vector<Value>>;
  CHECK(elements_of(chains(GroundSet(4))) == V{{1, 2, 4, 8}, {3, 6}, {5}, {7}});
  CHECK(elements_of(chains(GroundSet(1))) == V{{1, 2}});
  CHECK(elements_of(chains(GroundSet(3))) == V{{1, 2, 4}, {3, 6}, {5}});
}

TEST_CASE("chains partition [1, 2n] for n <= 2000") {
  for (Value n = 1; n <= 2000; ++n) {
    const GroundSet gs(n);
    const auto cs = chains(gs);
    REQUIRE(cs.size() == n);
    std::vector<int> hits(gs.size() + 1, 0);
    Value prev_root = 0;
    for (const Chain& c : cs) {
      REQUIRE(c.root % 2 == 1);
      REQUIRE(c.root > prev_root);
      prev_root = c.root;
      for (std::size_t i = 0; i < c.size(); ++i) {
        REQUIRE(odd_part(c.elements[i]) == c.root);
        if (i) REQUIRE(c.elements[i] == 2 * c.elements[i - 1]);
        ++hits[c.elements[i]];
      }
      REQUIRE(c.elements.back() * 2 > gs.size());
    }
    REQUIRE(std::count(hits.begin() + 1, hits.end(), 1) == static_cast<long>(gs.size()));
  }
}

TEST_CASE("chain_of finds the odd-part chain") {
  CHECK(chain_of(GroundSet(4), 6).root == 3);
  CHECK(chain_of(GroundSet(4), 8).root == 1);
  CHECK(chain_of(GroundSet(10), 20).root == 5);
  CHECK(chain_of(GroundSet(10), 20).elements == std::vector<Value>{5, 10, 20});
  CHECK_THROWS_AS(chain_of(GroundSet(4), 9), std::domain_error);
  CHECK_THROWS_AS(chain_of(GroundSet(4), 0), std::domain_error);
  CHECK_THROWS_AS(make_chain(GroundSet(4), 2), std::domain_error);
}

TEST_CASE("chain size histogram") {
  auto as_map = [](const std::vector<ChainSizeClass>& rows) {
    std::vector<std::pair<unsigned, Value>> out;
    for (const auto& r : rows)
      if (r.exact) out.emplace_back(r.size, r.exact);
    return out;
  };
  using P = std::vector<std::pair<unsigned, Value>>;
  CHECK(as_map(chain_size_histogram(GroundSet(4))) == P{{1, 2}, {2, 1}, {4, 1}});
  CHECK(as_map(chain_size_histogram(GroundSet(2))) == P{{1, 1}, {3, 1}});

  SUBCASE("n = 16 against direct enumeration") {
    const GroundSet gs(16);
    // Oracle: length of each chain = how many y in [1, 32] share its odd part.
    std::vector<Value> oracle(7, 0);
    for (Value q = 1; q < 32; q += 2) {
      unsigned len = 0;
      for (Value y = 1; y <= 32; ++y) {
        Value m = y;
        while (m % 2 == 0) m /= 2;
        if (m == q) ++len;
      }
      ++oracle[len];
    }
    const auto rows = chain_size_histogram(gs);
    REQUIRE(rows.size() == 6);
    const Value frozen_exact[] = {8, 4, 2, 1, 0, 1};
    const Value frozen_floor[] = {8, 4, 2, 1, 0, 0};
    for (const auto& r : rows) {
      CHECK(r.exact == oracle[r.size]);
      CHECK(r.exact == frozen_exact[r.size - 1]);
      CHECK(r.floor_estimate == frozen_floor[r.size - 1]);
    }
    CHECK(rows[5].deviation == 1);
  }
}

TEST_CASE("histogram deviates from the floor estimate by at most one") {
  for (Value n = 1; n <= 2000; ++n) {
    Value total = 0;
    for (const auto& r : chain_size_histogram(GroundSet(n))) {
      REQUIRE(std::llabs(r.deviation) <= 1);
      total += r.exact;
    }
    REQUIRE(total == n);
  }
}

TEST_CASE("divisor pairs") {
  using P = std::vector<std::pair<Value, Value>>;
  CHECK(divisor_pairs(GroundSet(1)) == P{{1, 2}});
  CHECK(divisor_pairs(GroundSet(2)) == P{{1, 2}, {1, 3}, {1, 4}, {2, 4}});
  CHECK(divisor_pairs(GroundSet(3)) == P{{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {2, 4}, {2, 6}, {3, 6}});

  for (Value n = 1; n <= 60; ++n) {
    P pairwise;
    for (Value u = 1; u <= 2 * n; ++u)
      for (Value v = u + 1; v <= 2 * n; ++v)
        if (v % u == 0) pairwise.emplace_back(u, v);
    REQUIRE(divisor_pairs(GroundSet(n)) == pairwise);
  }
}

TEST_CASE("is_primitive") {
  const std::vector<Value> a{4, 5, 6};
  const std::vector<Value> b{2, 3, 6};
  const std::vector<Value> c{6, 7, 8, 9, 10};
  CHECK(is_primitive(GroundSet(3), a));
  CHECK_FALSE(is_primitive(GroundSet(3), b));
  const auto pair = find_divisor_pair(GroundSet(3), b);
  REQUIRE(pair.has_value());
  CHECK(pair->second % pair->first == 0);
  CHECK(pair->first != pair->second);
  CHECK(is_primitive(GroundSet(5), c));
  const std::vector<Value> outside{4, 7};
  CHECK_THROWS_AS(is_primitive(GroundSet(3), outside), std::domain_error);
  CHECK(is_primitive(GroundSet(3), std::vector<Value>{}));
}

TEST_CASE("no n+1 subset of [1, 2n] is primitive") {
  SUBCASE("exhaustive for n <= 6") {
    for (Value n = 1; n <= 6; ++n) {
      const GroundSet gs(n);
      const unsigned bits = static_cast<unsigned>(2 * n);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        if (std::popcount(mask) != static_cast<int>(n + 1)) continue;
        std::vector<Value> s;
        for (unsigned i = 0; i < bits; ++i)
          if (mask >> i & 1) s.push_back(i + 1);
        REQUIRE_FALSE(is_primitive(gs, s));
      }
    }
  }
  SUBCASE("sampled for n <= 12") {
    std::mt19937_64 rng(7);
    for (Value n = 7; n <= 12; ++n) {
      const GroundSet gs(n);
      std::vector<Value> all(gs.size());
      std::iota(all.begin(), all.end(), Value{1});
      for (int t = 0; t < 2000; ++t) {
        std::shuffle(all.begin(), all.end(), rng);
        const std::vector<Value> s(all.begin(), all.begin() + static_cast<long>(n + 1));
        REQUIRE_FALSE(is_primitive(gs, s));
      }
    }
  }
}
