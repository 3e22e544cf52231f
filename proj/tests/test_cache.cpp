#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "lps/cache.hpp"

using namespace lps;

namespace {

std::filesystem::path scratch(const char* name) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("cache lines round-trip") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    CacheRecord r;
    r.n = rng() % 100000 + 1;
    r.count = BigInt(rng()) * BigInt(rng()) + 1;
    r.method = t % 2 ? "chain_backtracking" : "bruteforce";
    r.version = "0." + std::to_string(rng() % 10) + ".1";
    const auto back = parse_cache_line(format_cache_line(r));
    REQUIRE(back.has_value());
    REQUIRE(back->n == r.n);
    REQUIRE(back->count == r.count);
    REQUIRE(back->method == r.method);
    REQUIRE(back->version == r.version);
  }
}

TEST_CASE("malformed cache lines are rejected") {
  CHECK_FALSE(parse_cache_line("").has_value());
  CHECK_FALSE(parse_cache_line("10\t26\tchain_backtracking").has_value());
  CHECK_FALSE(parse_cache_line("x\t26\tchain_backtracking\t0.1.0").has_value());
  CHECK_FALSE(parse_cache_line("10\t2a6\tchain_backtracking\t0.1.0").has_value());
  CHECK_FALSE(parse_cache_line("0\t26\tchain_backtracking\t0.1.0").has_value());
  CHECK(parse_cache_line("10\t26\tchain_backtracking\t0.1.0").has_value());
}

TEST_CASE("lookup ignores other versions and garbage") {
  const auto path = scratch("lps_cache_versions.tsv");
  {
    std::ofstream f(path);
    f << "10\t26\tchain_backtracking\t9.9.9\n"
      << "garbage line\n"
      << "7\t12\tchain_backtracking\t1.0.0\n";
  }
  const ResultCache mine(path, "1.0.0");
  CHECK_FALSE(mine.lookup(10).has_value());
  CHECK(mine.lookup(7) == BigInt(12));
  CHECK(mine.records().size() == 2);

  mine.append(10, BigInt(26), "chain_backtracking");
  CHECK(mine.lookup(10) == BigInt(26));
  CHECK(ResultCache(path, "9.9.9").lookup(10) == BigInt(26));
  std::filesystem::remove(path);
}

TEST_CASE("missing cache file reads as empty") {
  const ResultCache c(scratch("lps_cache_missing.tsv"));
  CHECK(c.records().empty());
  CHECK_FALSE(c.lookup(3).has_value());
}

TEST_CASE("unwritable cache path") {
  const ResultCache c("/nonexistent-dir/sub/counts.tsv");
  CHECK_THROWS_AS(c.require_writable(), CacheError);
  CHECK_THROWS_AS(c.append(3, BigInt(3), "chain_backtracking"), CacheError);
}
