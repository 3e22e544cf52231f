#include "lps/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lps/bounds.hpp"
#include "lps/coloring.hpp"
#include "lps/enumeration.hpp"
#include "lps/families.hpp"

namespace lps {

namespace {

using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;
using std::chrono::seconds;

// Collects failures; the criterion passes when there are none.
class Verdict {
 public:
  Verdict(int id, std::string title) : start_(Clock::now()) {
    r_.id = id;
    r_.title = std::move(title);
  }

  template <class... Args>
  void fail(const Args&... parts) {
    if (++failures_ > 5) return;
    std::ostringstream os;
    (os << ... << parts);
    notes_.push_back(os.str());
  }

  void note(std::string s) { summary_ = std::move(s); }

  CriterionResult finish(std::optional<milliseconds> budget = std::nullopt) {
    r_.elapsed = std::chrono::duration_cast<milliseconds>(Clock::now() - start_);
    if (budget && r_.elapsed >= *budget) fail("runtime ", r_.elapsed.count(), " ms exceeds ", budget->count(), " ms");
    r_.passed = failures_ == 0;
    std::ostringstream os;
    os << summary_;
    for (const std::string& s : notes_) os << (os.tellp() > 0 ? "; " : "") << s;
    if (failures_ > notes_.size()) os << "; (" << failures_ - notes_.size() << " more)";
    r_.detail = os.str();
    return r_;
  }

 private:
  CriterionResult r_;
  Clock::time_point start_;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
  std::string summary_;
};

std::string join(const std::vector<Value>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '}';
  return os.str();
}

bool in_range(double v, double lo, double hi) { return v >= lo && v < hi; }

}  // namespace

AcceptanceLimits AcceptanceLimits::capped(Value max_n) {
  AcceptanceLimits lim;
  lim.golden_max = std::min(lim.golden_max, max_n);
  lim.oracle_max = std::min(lim.oracle_max, max_n);
  lim.perf_n = std::min(lim.perf_n, max_n);
  lim.soundness_max = std::min(lim.soundness_max, max_n);
  lim.sandwich_max = std::min(lim.sandwich_max, max_n);
  lim.family_max = std::min(lim.family_max, max_n);
  return lim;
}

CriterionResult check_golden_sequence(const AcceptanceLimits& lim) {
  Verdict v(1, "golden sequence D(1..10)");
  std::ostringstream got;
  for (Value n = 1; n <= std::min<Value>(lim.golden_max, 10); ++n) {
    const BigInt c = count_lps(GroundSet(n)).count;
    got << (n > 1 ? "," : "") << c;
    if (c != kGoldenCounts[n - 1]) v.fail("D(", n, ") = ", c, ", expected ", kGoldenCounts[n - 1]);
  }
  v.note("D = " + got.str());
  return v.finish(seconds(5));
}

CriterionResult check_oracle_equivalence(const AcceptanceLimits& lim) {
  Verdict v(2, "count_lps matches brute force");
  for (Value n = 1; n <= lim.oracle_max; ++n) {
    const GroundSet gs(n);
    const CountResult fast = count_lps(gs);
    const CountResult slow = count_bruteforce(gs);
    if (fast.count != slow.count) v.fail("n = ", n, ": count_lps ", fast.count, " vs brute force ", slow.count);
    if (fast.always_present != slow.always_present || fast.sometimes_present != slow.sometimes_present)
      v.fail("n = ", n, ": membership sets differ");
  }
  v.note("n <= " + std::to_string(lim.oracle_max));
  return v.finish(std::chrono::minutes(2));
}

CriterionResult check_performance(const AcceptanceLimits& lim) {
  Verdict v(3, "count_lps(" + std::to_string(lim.perf_n) + ") fast and schedule independent");
  const GroundSet gs(lim.perf_n);
  const auto t0 = Clock::now();
  const CountResult base = count_lps(gs);
  const auto single = std::chrono::duration_cast<milliseconds>(Clock::now() - t0);
  if (single >= seconds(60)) v.fail("single-thread run took ", single.count(), " ms");

  CountOptions multi;
  multi.threads = std::max(2u, lim.threads);
  CountOptions reversed;
  reversed.order = ChainOrder::increasing_root;
  CountOptions reversed_multi = reversed;
  reversed_multi.threads = multi.threads;
  for (const auto& [name, opts] : {std::pair{"multi-thread", multi}, std::pair{"increasing-root", reversed},
                                   std::pair{"increasing-root multi-thread", reversed_multi}}) {
    const CountResult r = count_lps(gs, opts);
    if (r.count != base.count) v.fail(name, " count ", r.count, " differs from ", base.count);
    if (r.always_present != base.always_present || r.sometimes_present != base.sometimes_present)
      v.fail(name, " membership differs");
  }
  v.note("D = " + base.count.str() + " in " + std::to_string(single.count()) + " ms");
  return v.finish();
}

CriterionResult check_exponent_constants(const AcceptanceLimits&) {
  Verdict v(4, "exponent constants");
  const ExponentReport naive = naive_exponent(1e-9);
  const ExponentReport improved = improved_exponent(1e-9);
  const auto [simple, quad] = lower_exponents();
  if (!in_range(naive.value, 0.73260, 0.73270)) v.fail("naive exponent ", naive.value);
  if (!in_range(naive.base, 1.6610, 1.6620)) v.fail("naive base ", naive.base);
  if (!in_range(improved.value, 0.49360, 0.49370)) v.fail("improved exponent ", improved.value);
  if (!in_range(improved.base, 1.4080, 1.4090)) v.fail("improved base ", improved.base);
  if (!in_range(simple.base, 1.2599, 1.2600)) v.fail("simple lower base ", simple.base);
  if (!in_range(quad.base, 1.3031, 1.3033)) v.fail("quadruple lower base ", quad.base);
  std::ostringstream os;
  os.precision(10);
  os << "naive " << naive.value << " (" << naive.base << "), improved " << improved.value << " (" << improved.base
     << "), lower " << simple.base << ", " << quad.base;
  v.note(os.str());
  return v.finish(seconds(1));
}

CriterionResult check_density_cross_check(const AcceptanceLimits&) {
  Verdict v(5, "band densities reproduce the improved exponent");
  const ExponentReport improved = improved_exponent(1e-9);
  if (!improved.cross_check || std::fabs(*improved.cross_check - improved.value) > 1e-9)
    v.fail("band-density value ", improved.cross_check.value_or(NAN), " vs closed form ", improved.value);

  std::map<unsigned, Rational> w;
  for (const BandWeight& b : band_weights(kFirstDyadicBand)) w[b.blue] = b.density;
  if (w[2] != Rational(233) / 720) v.fail("two-blue density ", w[2], " != 233/720");
  if (w[3] != Rational(599) / 10080) v.fail("three-blue density ", w[3], " != 599/10080");
  if (2 * w[4] != Rational(121) / 3360) v.fail("four-blue term ", 2 * w[4], " != 121/3360");
  std::ostringstream os;
  os.precision(12);
  os << "weights " << w[2] << ", " << w[3] << ", 2*" << w[4] << "; |diff| = "
     << std::fabs(improved.cross_check.value_or(0) - improved.value);
  v.note(os.str());
  return v.finish();
}

CriterionResult check_coloring_soundness(const AcceptanceLimits& lim) {
  Verdict v(6, "propagate_coloring is sound");
  std::size_t greens = 0;
  std::size_t reds = 0;
  for (Value n = 1; n <= lim.soundness_max; ++n) {
    const GroundSet gs(n);
    const Coloring c = propagate_coloring(gs);
    if (auto bad = check_justifications(c)) v.fail("n = ", n, ": ", *bad);
    CountOptions unpruned;
    unpruned.prune_red = false;
    const auto [always, sometimes] = membership_summary(gs, unpruned);
    for (Value x : c.members(Color::green)) {
      ++greens;
      if (!std::binary_search(always.begin(), always.end(), x))
        v.fail("n = ", n, ": green ", x, " missing from some LPS; always = ", join(always));
    }
    for (Value x : c.members(Color::red)) {
      ++reds;
      if (std::binary_search(sometimes.begin(), sometimes.end(), x))
        v.fail("n = ", n, ": red ", x, " appears in an LPS");
    }
  }
  v.note("n <= " + std::to_string(lim.soundness_max) + ", " + std::to_string(greens) + " green and " +
         std::to_string(reds) + " red elements checked");
  return v.finish(std::chrono::minutes(10));
}

CriterionResult check_lemma_exhaustion(const AcceptanceLimits& lim) {
  Verdict v(7, "odd-multiple and twice-odd witnesses exist");
  std::size_t one = 0;
  std::size_t two = 0;
  for (Value n = 1; n <= lim.lemma_max; ++n) {
    const GroundSet gs(n);
    for (Value q = 1; 3 * q <= 2 * n; q += 2) {
      try {
        const Value w = odd_multiple_witness(gs, q);
        if (w % q != 0 || (w / q) % 2 == 0 || w <= n || w > 2 * n) v.fail("n = ", n, ", q = ", q, ": bad witness ", w);
        ++one;
      } catch (const std::exception& e) {
        v.fail("n = ", n, ", q = ", q, ": ", e.what());
      }
    }
    for (Value q = 1; q <= n; q += 2) {
      if (!has_twice_odd_witness(gs, q)) continue;
      try {
        const Value w = twice_odd_witness(gs, q);
        if (w % (2 * q) != 0 || (w / (2 * q)) % 2 == 0 || w <= n || 3 * w > 4 * n)
          v.fail("n = ", n, ", q = ", q, ": bad witness ", w);
        ++two;
      } catch (const std::exception& e) {
        v.fail("n = ", n, ", q = ", q, ": ", e.what());
      }
    }
  }
  v.note("n <= " + std::to_string(lim.lemma_max) + ", " + std::to_string(one) + " odd-multiple and " + std::to_string(two) +
         " twice-odd witnesses");
  return v.finish(std::chrono::minutes(1));
}

CriterionResult check_blue_count_table(const AcceptanceLimits& lim) {
  Verdict v(8, "blue counts per band at n = " + std::to_string(lim.blue_table_n));
  const GroundSet gs(lim.blue_table_n);
  const std::map<Band, unsigned> expected{
      {Band::singleton, 0}, {Band::forced, 0}, {Band::J1, 2}, {Band::J2, 2}, {Band::J3, 3}, {Band::J4, 2},
      {Band::J5, 3},        {Band::J6, 2},     {Band::J7, 3}, {Band::J8, 4}, {Band::J9, 3},
  };
  std::map<std::string, std::size_t> seen;
  for (const BlueCount& bc : blue_counts(interval_coloring(gs))) {
    const unsigned want = bc.band.label == Band::dyadic ? bc.band.k : expected.at(bc.band.label);
    ++seen[to_string(bc.band.label, bc.band.k)];
    if (bc.blue != want)
      v.fail("root ", bc.root, " in ", to_string(bc.band.label, bc.band.k), ": ", bc.blue, " blue, expected ", want);
  }
  for (const auto& [band, _] : expected)
    if (!seen.count(to_string(band))) v.fail("no root falls in ", to_string(band));
  if (!seen.count("K4")) v.fail("no root falls in K4");
  v.note(std::to_string(seen.size()) + " bands populated, " + std::to_string(gs.n()) + " roots checked");
  return v.finish();
}

CriterionResult check_sandwich(const AcceptanceLimits& lim) {
  Verdict v(9, "families <= D(n) <= colored bound <= chain product");
  CountOptions counting;
  counting.membership = false;
  for (Value n = 1; n <= lim.sandwich_max; ++n) {
    const GroundSet gs(n);
    const BigInt exact = count_lps(gs, counting).count;
    const BigInt lower = std::max(simple_family(gs).count, quadruple_family(gs).count);
    const BigInt upper = finite_upper(propagate_coloring(gs));
    const BigInt naive = finite_upper(uniform_blue(gs));
    if (!(lower <= exact && exact <= upper && upper <= naive))
      v.fail("n = ", n, ": ", lower, " <= ", exact, " <= ", upper, " <= ", naive, " fails");
  }
  v.note("n <= " + std::to_string(lim.sandwich_max));
  return v.finish();
}

CriterionResult check_family_validity(const AcceptanceLimits& lim) {
  Verdict v(10, "lower-bound families are valid and sized by their closed forms");
  for (Value n = 1; n <= std::min(lim.family_max, kExhaustiveFamilyLimit); ++n) {
    const GroundSet gs(n);
    const BigInt simple_closed = BigInt(1) << static_cast<unsigned>(n - 2 * n / 3);
    for (const FamilySpec& f : {simple_family(gs), quadruple_family(gs)}) {
      const FamilyValidation val = verify_family(f);
      const BigInt closed = f.kind == FamilyKind::simple ? simple_closed : quadruple_family_count(gs);
      if (!val.valid || !val.exhaustive) {
        std::string why = val.violation ? val.violation->problem : "count mismatch";
        v.fail("n = ", n, " ", to_string(f.kind), ": ", why);
      }
      if (val.generated != closed)
        v.fail("n = ", n, " ", to_string(f.kind), ": generated ", val.generated, ", closed form ", closed);
    }
  }
  v.note("n <= " + std::to_string(std::min(lim.family_max, kExhaustiveFamilyLimit)));
  return v.finish();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceLimits& lim,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  using Check = CriterionResult (*)(const AcceptanceLimits&);
  const Check checks[] = {
      check_golden_sequence,    check_oracle_equivalence, check_performance,      check_exponent_constants,
      check_density_cross_check, check_coloring_soundness, check_lemma_exhaustion, check_blue_count_table,
      check_sandwich,           check_family_validity,
  };
  std::vector<CriterionResult> out;
  for (Check c : checks) {
    CriterionResult r;
    try {
      r = c(lim);
    } catch (const std::exception& e) {
      r.id = static_cast<int>(out.size()) + 1;
      r.title = "criterion raised";
      r.detail = e.what();
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << " (" << r.elapsed.count() << " ms)";
  if (!r.detail.empty()) os << ": " << r.detail;
  return os.str();
}

}  // namespace lps
