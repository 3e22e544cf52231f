#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "lps/acceptance.hpp"
#include "lps/cache.hpp"
#include "lps/enumeration.hpp"

using namespace lps;

TEST_CASE("brute force reproduces the first terms") {
  CHECK(count_bruteforce(GroundSet(1)).count == 2);
  CHECK(count_bruteforce(GroundSet(5)).count == 4);
  CHECK(count_bruteforce(GroundSet(10)).count == 26);
  CHECK(count_bruteforce(GroundSet(10)).method == Method::bruteforce);
  CHECK_THROWS_WITH_AS(count_bruteforce(GroundSet(15)), doctest::Contains("limit 14"), CountRefused);
  CHECK_THROWS_AS(count_bruteforce(GroundSet(12), 11), CountRefused);
}

TEST_CASE("golden sequence") {
  for (Value n = 1; n <= 10; ++n) CHECK(count_lps(GroundSet(n)).count == kGoldenCounts[n - 1]);
}

TEST_CASE("count_lps examples") {
  CHECK(count_lps(GroundSet(7)).count == 12);
  CHECK(count_lps(GroundSet(8)).count == 10);

  const CountResult three = count_lps(GroundSet(3));
  CHECK(three.count == 3);
  CHECK(three.always_present == std::vector<Value>{5});
  CHECK(three.sometimes_present == std::vector<Value>{2, 3, 4, 5, 6});
  CHECK(three.method == Method::chain_backtracking);
}

TEST_CASE("membership summaries") {
  using V = std::vector<Value>;
  CHECK(membership_summary(GroundSet(3)) == std::pair<V, V>{{5}, {2, 3, 4, 5, 6}});
  CHECK(membership_summary(GroundSet(1)) == std::pair<V, V>{{}, {1, 2}});

  // Oracle for n = 2: every 2-subset of {1, 2, 3, 4}.
  std::vector<V> lps;
  for (Value a = 1; a <= 4; ++a)
    for (Value b = a + 1; b <= 4; ++b)
      if (b % a != 0) lps.push_back({a, b});
  REQUIRE(lps == std::vector<V>{{2, 3}, {3, 4}});
  CHECK(membership_summary(GroundSet(2)) == std::pair<V, V>{{3}, {2, 3, 4}});
}

TEST_CASE("count_lps matches brute force with membership for n <= 12") {
  for (Value n = 1; n <= 12; ++n) {
    const GroundSet gs(n);
    const CountResult fast = count_lps(gs);
    const CountResult slow = count_bruteforce(gs);
    REQUIRE(fast.count == slow.count);
    REQUIRE(fast.always_present == slow.always_present);
    REQUIRE(fast.sometimes_present == slow.sometimes_present);
  }
}

TEST_CASE("red pruning never changes the count") {
  CountOptions unpruned;
  unpruned.prune_red = false;
  for (Value n = 1; n <= 14; ++n) {
    const GroundSet gs(n);
    const CountResult a = count_lps(gs);
    const CountResult b = count_lps(gs, unpruned);
    REQUIRE(a.count == b.count);
    REQUIRE(a.always_present == b.always_present);
    REQUIRE(a.sometimes_present == b.sometimes_present);
  }
}

TEST_CASE("counts do not depend on threads or chain order") {
  for (Value n : {5, 13, 20, 24, 31}) {
    const GroundSet gs(n);
    const CountResult base = count_lps(gs);
    for (unsigned threads : {1u, 2u, 3u, 8u}) {
      for (ChainOrder order : {ChainOrder::decreasing_root, ChainOrder::increasing_root}) {
        for (bool prune : {true, false}) {
          if (!prune && n > 20) continue;
          CountOptions o;
          o.threads = threads;
          o.order = order;
          o.prune_red = prune;
          const CountResult r = count_lps(gs, o);
          REQUIRE(r.count == base.count);
          REQUIRE(r.always_present == base.always_present);
          REQUIRE(r.sometimes_present == base.sometimes_present);
        }
      }
    }
  }
}

TEST_CASE("enumerated LPS take one element per chain") {
  for (Value n = 1; n <= 12; ++n) {
    const GroundSet gs(n);
    std::set<std::vector<Value>> seen;
    const std::uint64_t visited = enumerate_lps(gs, [&](std::span<const Value> s) {
      REQUIRE(s.size() == n);
      REQUIRE(is_primitive(gs, s));
      std::set<Value> roots;
      for (Value x : s) roots.insert(odd_part(x));
      REQUIRE(roots.size() == n);
      seen.emplace(s.begin(), s.end());
      return true;
    });
    REQUIRE(seen.size() == visited);
    REQUIRE(BigInt(visited) == count_bruteforce(gs).count);
    REQUIRE(enumerate_lps(gs, [](auto) { return true; }, false) == visited);
  }
  std::uint64_t calls = 0;
  CHECK(enumerate_lps(GroundSet(10), [&](auto) { return ++calls < 3; }) == 3);
}

TEST_CASE("layered count agrees with leaf enumeration up to n = 40") {
  for (Value n = 13; n <= 40; ++n) {
    const GroundSet gs(n);
    const std::uint64_t leaves = enumerate_lps(gs, [](auto) { return true; });
    REQUIRE(count_lps(gs).count == leaves);
    CountOptions rising;
    rising.order = ChainOrder::increasing_root;
    rising.membership = false;
    REQUIRE(count_lps(gs, rising).count == leaves);
  }
}

TEST_CASE("known values beyond brute force") {
  // Cross-checked against a counter that visits every LPS one at a time.
  CHECK(count_lps(GroundSet(40)).count == 112320);
  CHECK(count_lps(GroundSet(60)).count == 16883712);
  CHECK(count_lps(GroundSet(100)).count == BigInt("1482251304960"));
}

TEST_CASE("conflict graph links chains by odd multiples") {
  for (Value n : {10, 40, 100}) {
    const GroundSet gs(n);
    for (const Coloring& c : {propagate_coloring(gs), uniform_blue(gs)}) {
      const ConflictGraph g = conflict_graph(c);
      std::size_t covered = 0;
      for (const auto& comp : g.components) covered += comp.size();
      CHECK(covered == n);
      for (const auto& [r, r2] : g.edges) {
        REQUIRE(r < r2);
        REQUIRE(r2 % r == 0);
        REQUIRE((r2 / r) % 2 == 1);
      }
    }
  }
  // Without pruning the root-1 chain touches every other chain.
  CHECK(conflict_graph(uniform_blue(GroundSet(10))).components.size() == 1);
  CHECK(conflict_graph(propagate_coloring(GroundSet(10))).components.size() > 1);
}

TEST_CASE("growth table") {
  const auto rows = growth_table(1, 10);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].count == 2);
  CHECK(rows[0].nth_root == doctest::Approx(2.0));
  CHECK(rows[6].count == 12);
  CHECK(rows[6].nth_root == doctest::Approx(std::pow(12.0, 1.0 / 7)));
  CHECK(rows[6].nth_root == doctest::Approx(1.4262).epsilon(1e-4));
  CHECK(rows[9].count == 26);
  CHECK(rows[9].nth_root == doctest::Approx(std::pow(26.0, 0.1)));
  CHECK(rows[9].nth_root == doctest::Approx(1.385152).epsilon(1e-6));
  CHECK_THROWS_AS(growth_table(5, 4), std::invalid_argument);
}

TEST_CASE("growth table reuses the cache") {
  const auto path = std::filesystem::temp_directory_path() / "lps_growth_cache_test.tsv";
  std::filesystem::remove(path);
  ResultCache cache(path);
  const auto first = growth_table(5, 9, {}, &cache);
  for (const auto& r : first) CHECK(r.method == Method::chain_backtracking);
  const auto second = growth_table(5, 9, {}, &cache);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(second[i].method == Method::cache);
    CHECK(second[i].count == first[i].count);
  }
  CHECK(cache.records().size() == 5);
  std::filesystem::remove(path);
}

TEST_CASE("timeouts surface partial progress") {
  CountOptions o;
  o.timeout = std::chrono::milliseconds(1);
  o.prune_red = false;
  o.membership = false;
  try {
    count_lps(GroundSet(300), o);
    FAIL("expected a timeout");
  } catch (const CountTimeout& e) {
    CHECK(e.components_total() >= 1);
    CHECK(e.components_done() < e.components_total());
    CHECK(e.partial_product() >= 1);
  }
}
