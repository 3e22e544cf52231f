#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "lps/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lps::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const char* name) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("count emits stable json") {
  const Outcome o = run({"count", "--n", "7", "--format", "json", "--no-cache"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j["n"] == 7);
  CHECK(j["count"] == "12");
  CHECK(j["method"] == "chain_backtracking");
  CHECK(j.contains("elapsed_ms"));
  CHECK(j["always_present"].is_array());
  CHECK(j["sometimes_present"].is_array());
}

TEST_CASE("global options may follow the subcommand") {
  const Outcome o = run({"--format", "json", "--no-cache", "count", "--n", "3", "--threads", "auto"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j["count"] == "3");
  CHECK(j["always_present"] == json::array({5}));
}

TEST_CASE("count reuses the cache") {
  const auto path = scratch("lps_cli_cache.tsv");
  const Outcome first = run({"count", "--n", "9", "--format", "json", "--cache", path.string()});
  REQUIRE(first.code == 0);
  const Outcome second = run({"count", "--n", "9", "--format", "json", "--cache", path.string()});
  REQUIRE(second.code == 0);
  const json a = json::parse(first.out);
  const json b = json::parse(second.out);
  CHECK(a["method"] == "chain_backtracking");
  CHECK(b["method"] == "cache");
  CHECK(a["count"] == b["count"]);
  CHECK(b["count"] == "14");
  CHECK(b["always_present"].is_null());
  std::filesystem::remove(path);
}

TEST_CASE("cache path from the environment") {
  const auto path = scratch("lps_cli_env_cache.tsv");
  ::setenv(lps::cli::kCacheEnv, path.c_str(), 1);
  REQUIRE(run({"count", "--n", "6"}).code == 0);
  ::unsetenv(lps::cli::kCacheEnv);
  CHECK(std::filesystem::exists(path));
  std::filesystem::remove(path);
}

TEST_CASE("bounds collapse at n = 1") {
  const Outcome o = run({"bounds", "--n", "1", "--format", "json", "--no-cache"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  const json& s = j["sandwich"];
  for (const char* key : {"lower_simple", "lower_quadruple", "exact", "upper_blue", "upper_naive"}) CHECK(s[key] == "2");
  CHECK(j["improved_exponent"]["base"].get<double>() == doctest::Approx(1.408).epsilon(1e-3));
}

TEST_CASE("rate csv") {
  const Outcome o = run({"rate", "--from", "1", "--to", "10", "--format", "csv", "--no-cache"});
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("n,count,nth_root\n", 0) == 0);
  CHECK(o.out.find("1,2,2.000000\n") != std::string::npos);
  CHECK(o.out.size() >= 15);
  CHECK(o.out.substr(o.out.size() - 15) == "10,26,1.385152\n");
}

TEST_CASE("oracle agrees with count") {
  const Outcome o = run({"oracle", "--n", "8", "--format", "json"});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["count"] == "10");
  CHECK(json::parse(o.out)["method"] == "bruteforce");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"count", "--n", "7", "--bogus"}).code == 2);
  CHECK(run({"count", "--n", "abc"}).code == 2);
  CHECK(run({"count", "--n", "0"}).code == 2);
  CHECK(run({"count"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"count", "--n", "5", "--format", "xml"}).code == 2);
  CHECK(run({"count", "--n", "5", "--cache", "/nonexistent-dir/sub/c.tsv"}).code == 2);
  CHECK(run({"oracle", "--n", "20"}).code == 2);
  CHECK(run({"rate", "--from", "5", "--to", "4", "--no-cache"}).code == 2);
  CHECK(run({"family", "--n", "5", "--kind", "triple"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("timeouts exit with 3") {
  const Outcome o = run({"count", "--n", "400", "--timeout", "0.001", "--no-cache"});
  CHECK(o.code == 3);
  CHECK(o.err.find("timeout") != std::string::npos);
}

TEST_CASE("colors summary") {
  const Outcome o = run({"colors", "--n", "100", "--mode", "interval", "--format", "json"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j["justifications_ok"] == true);
  CHECK(j["green"].get<int>() + j["red"].get<int>() + j["blue"].get<int>() == 200);
  for (const json& band : j["bands"]) CHECK(band["agrees"] == true);

  const Outcome p = run({"colors", "--n", "3", "--format", "json"});
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out)["green"] == 1);
}

TEST_CASE("verify-lemmas") {
  const Outcome o = run({"verify-lemmas", "--max-n", "300", "--format", "json"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j["ok"] == true);
  CHECK(j["failures"].empty());
  CHECK(j["band_table_disagreements"].empty());
  CHECK(j["odd_multiple_witnesses"].get<int>() > 0);
}

TEST_CASE("family with verification") {
  const Outcome o = run({"family", "--n", "12", "--kind", "quadruple", "--verify", "--format", "json", "--no-cache"});
  REQUIRE(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j["count"] == "24");
  CHECK(j["closed_form_count"] == "24");
  CHECK(j["verification"]["valid"] == true);
  CHECK(j["verification"]["exact"] == "34");

  const Outcome big = run({"family", "--n", "500", "--kind", "simple", "--verify", "--format", "json", "--no-cache"});
  REQUIRE(big.code == 0);
  CHECK(json::parse(big.out)["verification"]["exhaustive"] == false);
}

TEST_CASE("check-all on a small range") {
  const Outcome o = run({"check-all", "--max-n", "10", "--format", "text", "--threads", "2"});
  CHECK(o.code == 0);
  CHECK(o.out.find("FAIL") == std::string::npos);
  CHECK(o.out.find("PASS") != std::string::npos);
}
