#include "lps/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "lps/acceptance.hpp"
#include "lps/bounds.hpp"
#include "lps/cache.hpp"
#include "lps/coloring.hpp"
#include "lps/enumeration.hpp"
#include "lps/families.hpp"

namespace lps::cli {

namespace {

using nlohmann::json;

enum class Format { json, csv, text };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  Value n = 0;
  Value from = 1;
  Value to = 1;
  Value max_n = 0;
  double tolerance = 1e-9;
  std::string threads = "1";
  std::string format = "json";
  std::string cache_path;
  bool no_cache = false;
  double timeout_s = 0;
  std::string mode = "propagate";
  std::string kind = "simple";
  bool verify = false;
  Value oracle_limit = kBruteforceLimit;
  Value exact_max = 120;
};

Format format_of(const RunConfig& cfg) {
  if (cfg.format == "csv") return Format::csv;
  if (cfg.format == "text") return Format::text;
  return Format::json;
}

unsigned thread_count(const std::string& s) {
  if (s == "auto") return std::max(1u, std::thread::hardware_concurrency());
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0)
    throw UsageError("--threads expects a positive integer or 'auto', got '" + s + "'");
  return v;
}

CountOptions count_options(const RunConfig& cfg) {
  CountOptions o;
  o.threads = thread_count(cfg.threads);
  if (cfg.timeout_s > 0)
    o.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(std::ceil(cfg.timeout_s * 1000)));
  return o;
}

std::filesystem::path default_cache_path() {
  if (const char* env = std::getenv(kCacheEnv); env && *env) return env;
  std::filesystem::path dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    dir = std::filesystem::path(xdg) / "lpscount";
  } else if (const char* home = std::getenv("HOME"); home && *home) {
    dir = std::filesystem::path(home) / ".cache" / "lpscount";
  } else {
    return "lpscount-cache.tsv";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  return dir / "counts.tsv";
}

std::unique_ptr<ResultCache> open_cache(const RunConfig& cfg) {
  if (cfg.no_cache) return nullptr;
  auto cache = std::make_unique<ResultCache>(cfg.cache_path.empty() ? default_cache_path()
                                                                    : std::filesystem::path(cfg.cache_path));
  try {
    cache->require_writable();
  } catch (const CacheError& e) {
    throw UsageError(e.what());
  }
  return cache;
}

// D(n) from the cache or a fresh count, recording fresh counts.
std::pair<BigInt, Method> exact_count(Value n, const RunConfig& cfg, ResultCache* cache) {
  if (cache)
    if (auto hit = cache->lookup(n)) return {*hit, Method::cache};
  CountOptions o = count_options(cfg);
  o.membership = false;
  BigInt c = count_lps(GroundSet(n), o).count;
  if (cache) cache->append(n, c, to_string(Method::chain_backtracking));
  return {c, Method::chain_backtracking};
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

double millis(std::chrono::nanoseconds d) { return static_cast<double>(d.count()) / 1e6; }

json exponent_json(const ExponentReport& r) {
  json j{{"value", r.value}, {"truncation_k", r.truncation_k}, {"tail_bound", r.tail_bound}, {"base", r.base}};
  j["cross_check"] = r.cross_check ? json(*r.cross_check) : json(nullptr);
  return j;
}

json count_json(const CountResult& r) {
  json j{{"n", r.n}, {"count", r.count.str()}, {"method", to_string(r.method)}, {"elapsed_ms", millis(r.elapsed)}};
  j["always_present"] = r.has_membership ? json(r.always_present) : json(nullptr);
  j["sometimes_present"] = r.has_membership ? json(r.sometimes_present) : json(nullptr);
  return j;
}

void write_count(const CountResult& r, Format f, std::ostream& out) {
  switch (f) {
    case Format::json:
      out << count_json(r).dump() << '\n';
      break;
    case Format::csv:
      out << "n,count,method,elapsed_ms\n" << r.n << ',' << r.count << ',' << to_string(r.method) << ','
          << fixed(millis(r.elapsed), 3) << '\n';
      break;
    case Format::text: {
      out << "D(" << r.n << ") = " << r.count << "  [" << to_string(r.method) << ", " << fixed(millis(r.elapsed), 3)
          << " ms]\n";
      if (r.has_membership) {
        auto list = [&](const char* label, const std::vector<Value>& v) {
          out << label << ':';
          for (Value x : v) out << ' ' << x;
          out << '\n';
        };
        list("always present", r.always_present);
        list("sometimes present", r.sometimes_present);
      }
      break;
    }
  }
}

int cmd_count(const RunConfig& cfg, std::ostream& out) {
  auto cache = open_cache(cfg);
  const auto start = std::chrono::steady_clock::now();
  if (cache) {
    if (auto hit = cache->lookup(cfg.n)) {
      CountResult r;
      r.n = cfg.n;
      r.count = *hit;
      r.method = Method::cache;
      r.elapsed = std::chrono::steady_clock::now() - start;
      write_count(r, format_of(cfg), out);
      return kOk;
    }
  }
  const CountResult r = count_lps(GroundSet(cfg.n), count_options(cfg));
  if (cache) cache->append(r.n, r.count, to_string(r.method));
  write_count(r, format_of(cfg), out);
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  CountResult r;
  try {
    r = count_bruteforce(GroundSet(cfg.n), cfg.oracle_limit);
  } catch (const CountRefused& e) {
    throw UsageError(e.what());
  }
  write_count(r, format_of(cfg), out);
  return kOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const GroundSet gs(cfg.n);
  std::optional<BigInt> exact;
  std::string exact_method = "none";
  if (cfg.n <= cfg.exact_max) {
    auto cache = open_cache(cfg);
    auto [c, m] = exact_count(cfg.n, cfg, cache.get());
    exact = c;
    exact_method = to_string(m);
  }
  const SandwichReport s = sandwich_report(gs, exact);
  const ExponentReport naive = naive_exponent(cfg.tolerance);
  const ExponentReport improved = improved_exponent(cfg.tolerance);
  const auto [simple, quad] = lower_exponents();

  const std::vector<std::pair<std::string, std::string>> rows{
      {"lower_simple", s.lower_simple.str()},
      {"lower_quadruple", s.lower_quadruple.str()},
      {"exact", s.exact ? s.exact->str() : ""},
      {"upper_blue", s.upper_blue.str()},
      {"upper_naive", s.upper_naive.str()},
      {"floor_formula", s.floor_formula.str()},
      {"naive_exponent", fixed(naive.value, 12)},
      {"naive_base", fixed(naive.base, 12)},
      {"improved_exponent", fixed(improved.value, 12)},
      {"improved_base", fixed(improved.base, 12)},
      {"lower_simple_base", fixed(simple.base, 12)},
      {"lower_quadruple_base", fixed(quad.base, 12)},
  };

  switch (format_of(cfg)) {
    case Format::json: {
      json sandwich{{"lower_simple", s.lower_simple.str()},
                    {"lower_quadruple", s.lower_quadruple.str()},
                    {"upper_blue", s.upper_blue.str()},
                    {"upper_naive", s.upper_naive.str()},
                    {"floor_formula", s.floor_formula.str()},
                    {"exact_method", exact_method}};
      sandwich["exact"] = s.exact ? json(s.exact->str()) : json(nullptr);
      json j{{"n", cfg.n},
             {"sandwich", sandwich},
             {"naive_exponent", exponent_json(naive)},
             {"improved_exponent", exponent_json(improved)},
             {"lower_exponents", {{"simple", exponent_json(simple)}, {"quadruple", exponent_json(quad)}}}};
      out << j.dump() << '\n';
      break;
    }
    case Format::csv:
      out << "quantity,value\n";
      for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
      break;
    case Format::text:
      out << "n = " << cfg.n << '\n';
      for (const auto& [k, v] : rows) out << std::left << std::setw(22) << k << (v.empty() ? "-" : v) << '\n';
      break;
  }
  return kOk;
}

int cmd_colors(const RunConfig& cfg, std::ostream& out) {
  const GroundSet gs(cfg.n);
  const Coloring c = cfg.mode == "interval" ? interval_coloring(gs) : propagate_coloring(gs);
  const auto justified = check_justifications(c);
  const std::vector<BlueCount> counts = blue_counts(c);

  std::map<unsigned, std::size_t> histogram;
  struct BandRow {
    std::string label;
    std::size_t roots = 0;
    unsigned expected = 0;
    unsigned min_blue = ~0u;
    unsigned max_blue = 0;
  };
  std::vector<BandRow> bands;
  std::map<std::string, std::size_t> index;
  for (const BlueCount& bc : counts) {
    ++histogram[bc.blue];
    const std::string label = to_string(bc.band.label, bc.band.k);
    auto [it, fresh] = index.try_emplace(label, bands.size());
    if (fresh) bands.push_back({label, 0, bc.band.expected_blue});
    BandRow& row = bands[it->second];
    ++row.roots;
    row.min_blue = std::min(row.min_blue, bc.blue);
    row.max_blue = std::max(row.max_blue, bc.blue);
  }
  auto agrees = [](const BandRow& r) { return r.min_blue == r.expected && r.max_blue == r.expected; };

  switch (format_of(cfg)) {
    case Format::json: {
      json hist = json::object();
      for (const auto& [k, v] : histogram) hist[std::to_string(k)] = v;
      json table = json::array();
      for (const BandRow& r : bands)
        table.push_back({{"band", r.label},
                         {"roots", r.roots},
                         {"expected_blue", r.expected},
                         {"min_blue", r.min_blue},
                         {"max_blue", r.max_blue},
                         {"agrees", agrees(r)}});
      json j{{"n", cfg.n},
             {"mode", cfg.mode},
             {"green", c.count(Color::green)},
             {"red", c.count(Color::red)},
             {"blue", c.count(Color::blue)},
             {"blue_histogram", hist},
             {"bands", table},
             {"justifications_ok", !justified.has_value()}};
      out << j.dump() << '\n';
      break;
    }
    case Format::csv:
      out << "band,roots,expected_blue,min_blue,max_blue,agrees\n";
      for (const BandRow& r : bands)
        out << r.label << ',' << r.roots << ',' << r.expected << ',' << r.min_blue << ',' << r.max_blue << ','
            << (agrees(r) ? "true" : "false") << '\n';
      break;
    case Format::text:
      out << "n = " << cfg.n << " (" << cfg.mode << "): green " << c.count(Color::green) << ", red "
          << c.count(Color::red) << ", blue " << c.count(Color::blue) << '\n';
      out << "chains by blue count:";
      for (const auto& [k, v] : histogram) out << ' ' << k << 'x' << v;
      out << '\n';
      for (const BandRow& r : bands)
        out << std::left << std::setw(10) << r.label << std::setw(8) << r.roots << "expected " << r.expected
            << ", observed " << r.min_blue << ".." << r.max_blue << (agrees(r) ? "" : "  MISMATCH") << '\n';
      if (justified) out << "justification failure: " << *justified << '\n';
      break;
  }
  return justified ? kFailed : kOk;
}

int cmd_verify_lemmas(const RunConfig& cfg, std::ostream& out) {
  std::size_t one = 0;
  std::size_t two = 0;
  std::vector<std::string> failures;
  std::vector<Value> table_disagrees;
  std::vector<Value> not_refined;
  for (Value n = 1; n <= cfg.max_n; ++n) {
    const GroundSet gs(n);
    for (Value q = 1; 3 * q <= 2 * n; q += 2) {
      try {
        odd_multiple_witness(gs, q);
        ++one;
      } catch (const std::exception& e) {
        failures.push_back(e.what());
      }
    }
    for (Value q = 1; q <= n; q += 2) {
      if (!has_twice_odd_witness(gs, q)) continue;
      try {
        twice_odd_witness(gs, q);
        ++two;
      } catch (const std::exception& e) {
        failures.push_back(e.what());
      }
    }
    if (!band_table_mismatches(gs).empty()) table_disagrees.push_back(n);
    if (!coloring_refines(gs)) not_refined.push_back(n);
  }
  const bool ok = failures.empty() && not_refined.empty();
  switch (format_of(cfg)) {
    case Format::json:
      out << json{{"max_n", cfg.max_n},
                  {"odd_multiple_witnesses", one},
                  {"twice_odd_witnesses", two},
                  {"failures", failures},
                  {"band_table_disagreements", table_disagrees},
                  {"refinement_failures", not_refined},
                  {"ok", ok}}
                 .dump()
          << '\n';
      break;
    case Format::csv:
      out << "max_n,odd_multiple_witnesses,twice_odd_witnesses,failures,band_table_disagreements,refinement_failures\n"
          << cfg.max_n << ',' << one << ',' << two << ',' << failures.size() << ',' << table_disagrees.size() << ','
          << not_refined.size() << '\n';
      break;
    case Format::text:
      out << "n <= " << cfg.max_n << ": " << one << " odd-multiple and " << two << " twice-odd witnesses, "
          << failures.size() << " failures\n"
          << "band table disagrees at " << table_disagrees.size() << " values of n; refinement fails at "
          << not_refined.size() << '\n';
      for (const std::string& f : failures) out << "  " << f << '\n';
      break;
  }
  return ok ? kOk : kFailed;
}

int cmd_family(const RunConfig& cfg, std::ostream& out) {
  const GroundSet gs(cfg.n);
  const FamilySpec f = cfg.kind == "quadruple" ? quadruple_family(gs) : simple_family(gs);
  const BigInt closed = f.kind == FamilyKind::simple ? simple_family_count(gs) : quadruple_family_count(gs);
  std::optional<FamilyValidation> val;
  if (cfg.verify) {
    std::optional<BigInt> exact;
    if (cfg.n <= cfg.exact_max) {
      auto cache = open_cache(cfg);
      exact = exact_count(cfg.n, cfg, cache.get()).first;
    }
    val = verify_family(f, exact);
  }
  const bool ok = !val || (val->valid && f.count == closed);

  switch (format_of(cfg)) {
    case Format::json: {
      json pairs = json::array();
      for (const FreePair& p : f.free_pairs) pairs.push_back({p.q, p.twice});
      json quads = json::array();
      for (const Quadruple& q : f.quadruples) quads.push_back({q.q, q.three_halves, q.twice, q.thrice});
      json j{{"n", cfg.n},
             {"kind", to_string(f.kind)},
             {"count", f.count.str()},
             {"closed_form_count", closed.str()},
             {"free_pairs", pairs},
             {"quadruples", quads}};
      if (val) {
        json v{{"exhaustive", val->exhaustive},
               {"valid", val->valid},
               {"generated", val->generated.str()},
               {"expected", val->expected.str()},
               {"distinct", val->distinct}};
        v["exact"] = val->exact ? json(val->exact->str()) : json(nullptr);
        if (val->violation) {
          json viol{{"member", val->violation->member}, {"problem", val->violation->problem}};
          if (val->violation->divisor_pair)
            viol["divisor_pair"] = {val->violation->divisor_pair->first, val->violation->divisor_pair->second};
          v["violation"] = viol;
        } else {
          v["violation"] = nullptr;
        }
        j["verification"] = v;
      } else {
        j["verification"] = nullptr;
      }
      out << j.dump() << '\n';
      break;
    }
    case Format::csv:
      out << "n,kind,count,quadruples,free_pairs,valid\n"
          << cfg.n << ',' << to_string(f.kind) << ',' << f.count << ',' << f.quadruples.size() << ','
          << f.free_pairs.size() << ',' << (val ? (val->valid ? "true" : "false") : "") << '\n';
      break;
    case Format::text:
      out << to_string(f.kind) << " family, n = " << cfg.n << ": " << f.count << " members (" << f.quadruples.size()
          << " quadruples, " << f.free_pairs.size() << " free pairs)\n";
      if (val) {
        out << (val->exhaustive ? "exhaustive" : "sampled") << " check of " << val->generated << " members: "
            << (val->valid ? "valid" : "INVALID") << '\n';
        if (val->exact) out << "D(n) = " << *val->exact << '\n';
        if (val->violation) out << "violation: " << val->violation->problem << '\n';
      }
      break;
  }
  return ok ? kOk : kFailed;
}

int cmd_rate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.from > cfg.to) throw UsageError("--from must not exceed --to");
  auto cache = open_cache(cfg);
  const std::vector<GrowthRow> rows = growth_table(cfg.from, cfg.to, count_options(cfg), cache.get());
  switch (format_of(cfg)) {
    case Format::json: {
      json arr = json::array();
      for (const GrowthRow& r : rows)
        arr.push_back({{"n", r.n}, {"count", r.count.str()}, {"nth_root", r.nth_root}, {"method", to_string(r.method)}});
      out << arr.dump() << '\n';
      break;
    }
    case Format::csv:
      out << "n,count,nth_root\n";
      for (const GrowthRow& r : rows) out << r.n << ',' << r.count << ',' << fixed(r.nth_root, 6) << '\n';
      break;
    case Format::text:
      for (const GrowthRow& r : rows)
        out << std::right << std::setw(6) << r.n << std::setw(24) << r.count << "  " << fixed(r.nth_root, 6) << '\n';
      break;
  }
  return kOk;
}

int cmd_check_all(const RunConfig& cfg, std::ostream& out) {
  AcceptanceLimits lim = cfg.max_n ? AcceptanceLimits::capped(cfg.max_n) : AcceptanceLimits{};
  lim.threads = std::max(2u, thread_count(cfg.threads));
  const Format f = format_of(cfg);
  auto lines = [&](const CriterionResult& r) {
    if (f == Format::text) out << format_result_line(r) << std::endl;
  };
  const std::vector<CriterionResult> results = run_acceptance(lim, lines);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  if (f == Format::json) {
    json arr = json::array();
    for (const CriterionResult& r : results)
      arr.push_back({{"id", r.id},
                     {"title", r.title},
                     {"passed", r.passed},
                     {"elapsed_ms", r.elapsed.count()},
                     {"detail", r.detail}});
    out << json{{"max_n", cfg.max_n}, {"passed", ok}, {"criteria", arr}}.dump() << '\n';
  } else if (f == Format::csv) {
    out << "id,passed,elapsed_ms,title\n";
    for (const CriterionResult& r : results)
      out << r.id << ',' << (r.passed ? "true" : "false") << ',' << r.elapsed.count() << ",\"" << r.title << "\"\n";
  } else {
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    out << passed << '/' << results.size() << " criteria passed\n";
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Counts and enumerates large primitive subsets of {1, ..., 2n}.", "lps"};
  app.require_subcommand(1);

  const auto range = CLI::Range(Value{1}, GroundSet::kMaxN);
  auto common = [&](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", cfg.threads, "Enumeration threads (positive integer or 'auto')");
  app.add_option("--cache", cfg.cache_path, std::string("Cache file (default: $") + kCacheEnv + ")");
  app.add_flag("--no-cache", cfg.no_cache, "Neither read nor write the cache");
  app.add_option("--timeout", cfg.timeout_s, "Enumeration timeout in seconds")->check(CLI::PositiveNumber);

  auto* count = common(app.add_subcommand("count", "Exact D(n) with membership sets"));
  count->add_option("--n", cfg.n, "Instance size")->required()->check(range);

  auto* oracle = common(app.add_subcommand("oracle", "Brute-force D(n)"));
  oracle->add_option("--n", cfg.n, "Instance size")->required()->check(range);
  oracle->add_option("--limit", cfg.oracle_limit, "Largest n accepted")->check(CLI::Range(Value{1}, Value{31}));

  auto* bounds = common(app.add_subcommand("bounds", "Sandwich report and growth exponents"));
  bounds->add_option("--n", cfg.n, "Instance size")->required()->check(range);
  bounds->add_option("--tol", cfg.tolerance, "Series tolerance")->check(CLI::Range(1e-15, 0.999999));
  bounds->add_option("--exact-max", cfg.exact_max, "Largest n for which D(n) is computed");

  auto* colors = common(app.add_subcommand("colors", "Green/red/blue classification summary"));
  colors->add_option("--n", cfg.n, "Instance size")->required()->check(range);
  colors->add_option("--mode", cfg.mode, "Coloring")->check(CLI::IsMember({"propagate", "interval"}));

  auto* lemmas = common(app.add_subcommand("verify-lemmas", "Exhaustive witness check"));
  lemmas->add_option("--max-n", cfg.max_n, "Largest n")->required()->check(range);

  auto* family = common(app.add_subcommand("family", "Lower-bound family summary"));
  family->add_option("--n", cfg.n, "Instance size")->required()->check(range);
  family->add_option("--kind", cfg.kind, "Family")->required()->check(CLI::IsMember({"simple", "quadruple"}));
  family->add_flag("--verify", cfg.verify, "Generate and validate members");
  family->add_option("--exact-max", cfg.exact_max, "Largest n for which D(n) is compared");

  auto* rate = common(app.add_subcommand("rate", "Growth table of D(n)^(1/n)"));
  rate->add_option("--from", cfg.from, "First n")->required()->check(range);
  rate->add_option("--to", cfg.to, "Last n")->required()->check(range);

  auto* check = common(app.add_subcommand("check-all", "Run the acceptance checks"));
  check->add_option("--max-n", cfg.max_n, "Cap for enumeration-backed ranges")->check(range);

  std::vector<std::string> storage{"lps"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  try {
    if (cfg.subcommand == "count") return cmd_count(cfg, out);
    if (cfg.subcommand == "oracle") return cmd_oracle(cfg, out);
    if (cfg.subcommand == "bounds") return cmd_bounds(cfg, out);
    if (cfg.subcommand == "colors") return cmd_colors(cfg, out);
    if (cfg.subcommand == "verify-lemmas") return cmd_verify_lemmas(cfg, out);
    if (cfg.subcommand == "family") return cmd_family(cfg, out);
    if (cfg.subcommand == "rate") return cmd_rate(cfg, out);
    if (cfg.subcommand == "check-all") return cmd_check_all(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CountTimeout& e) {
    err << "timeout: " << e.what() << " (partial product " << e.partial_product() << ")\n";
    return kTimeout;
  } catch (const OrderingViolation& e) {
    err << "ordering violated: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  err << "unknown subcommand " << cfg.subcommand << '\n';
  return kUsage;
}

}  // namespace lps::cli
