#include "lps/coloring.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace lps {

namespace {

// q in (lo * n, hi * n]
bool in_band(Value q, Value n, Fraction lo, Fraction hi) noexcept {
  return lo.den * q > lo.num * n && hi.den * q <= hi.num * n;
}

std::size_t chain_index(Value root) noexcept { return static_cast<std::size_t>(root / 2); }

std::string describe_chain(const Coloring& c, Value x) {
  std::ostringstream os;
  const Chain ch = chain_of(c.ground(), x);
  os << "chain " << ch.root << ": [";
  for (std::size_t i = 0; i < ch.elements.size(); ++i) {
    const Value e = ch.elements[i];
    const auto& j = c.why(e);
    os << (i ? ", " : "") << e << ':' << to_string(c.color(e));
    if (j.reason != Reason::none) os << '(' << to_string(j.reason) << ' ' << j.witness << ')';
  }
  os << ']';
  return os.str();
}

}  // namespace

const char* to_string(Color c) noexcept {
  switch (c) {
    case Color::green: return "green";
    case Color::red: return "red";
    case Color::blue: return "blue";
  }
  return "?";
}

const char* to_string(Reason r) noexcept {
  switch (r) {
    case Reason::none: return "none";
    case Reason::sole_survivor: return "sole-survivor";
    case Reason::divides_green: return "divides-green";
    case Reason::multiple_of_green: return "multiple-of-green";
  }
  return "?";
}

Coloring::Coloring(GroundSet gs)
    : gs_(gs), colors_(gs.size(), Color::blue), why_(gs.size()) {}

Color Coloring::color(Value x) const {
  gs_.require(x);
  return colors_[x - 1];
}

const Justification& Coloring::why(Value x) const {
  gs_.require(x);
  return why_[x - 1];
}

void Coloring::paint(Value x, Color c, Justification j) {
  gs_.require(x);
  colors_[x - 1] = c;
  why_[x - 1] = c == Color::blue ? Justification{} : j;
}

std::vector<Value> Coloring::members(Color c) const {
  std::vector<Value> out;
  for (Value x = 1; x <= gs_.size(); ++x)
    if (colors_[x - 1] == c) out.push_back(x);
  return out;
}

std::size_t Coloring::count(Color c) const {
  return static_cast<std::size_t>(std::count(colors_.begin(), colors_.end(), c));
}

bool Coloring::same_assignment(const Coloring& other) const noexcept {
  return gs_ == other.gs_ && colors_ == other.colors_;
}

std::optional<std::string> check_justifications(const Coloring& c) {
  const GroundSet& gs = c.ground();
  for (Value q = 1; q < gs.size(); q += 2) {
    const Chain ch = make_chain(gs, q);
    if (std::all_of(ch.elements.begin(), ch.elements.end(),
                    [&](Value e) { return c.color(e) == Color::red; }))
      return "every element red in " + describe_chain(c, q);
  }
  for (Value x = 1; x <= gs.size(); ++x) {
    const Color col = c.color(x);
    const Justification& j = c.why(x);
    bool ok = true;
    switch (col) {
      case Color::blue:
        break;
      case Color::green:
        if (j.reason != Reason::sole_survivor) {
          ok = false;
        } else {
          for (Value e : chain_of(gs, x).elements)
            if (e != x && c.color(e) != Color::red) ok = false;
        }
        break;
      case Color::red:
        if (!gs.contains(j.witness) || j.witness == x || c.color(j.witness) != Color::green) {
          ok = false;
        } else if (j.reason == Reason::divides_green) {
          ok = j.witness % x == 0;
        } else if (j.reason == Reason::multiple_of_green) {
          ok = x % j.witness == 0;
        } else {
          ok = false;
        }
        break;
    }
    if (!ok) {
      std::ostringstream os;
      os << x << " is " << to_string(col) << " without a valid justification; " << describe_chain(c, x);
      if (col == Color::red && gs.contains(j.witness)) os << "; witness " << describe_chain(c, j.witness);
      return os.str();
    }
  }
  return std::nullopt;
}

Value odd_multiple_witness(const GroundSet& gs, Value q) {
  const Value n = gs.n();
  if (q == 0 || (q & 1) == 0) throw std::domain_error("odd_multiple_witness: q must be odd and positive");
  if (3 * q > 2 * n) throw std::domain_error("odd_multiple_witness: requires 3q <= 2n");
  Value m = (n + q) / q;  // ceil((n + 1) / q)
  if ((m & 1) == 0) ++m;
  const Value w = m * q;
  if (w > 2 * n)
    throw InternalError("no odd multiple of " + std::to_string(q) + " in [n+1, 2n] for n = " +
                        std::to_string(n));
  return w;
}

bool has_twice_odd_witness(const GroundSet& gs, Value q) noexcept {
  const Value n = gs.n();
  if (q == 0 || (q & 1) == 0) return false;
  return 21 * q <= 2 * n || (10 * q > n && 15 * q <= 2 * n) || (6 * q > n && 9 * q <= 2 * n);
}

Value twice_odd_witness(const GroundSet& gs, Value q) {
  const Value n = gs.n();
  if (!has_twice_odd_witness(gs, q))
    throw std::domain_error("twice_odd_witness: q must be odd and lie in I1, I2 or I3");
  const Value step = 2 * q;
  Value m = (n + step) / step;  // ceil((n + 1) / 2q)
  if ((m & 1) == 0) ++m;
  const Value w = m * step;
  if (3 * w > 4 * n)
    throw InternalError("no odd multiple of " + std::to_string(step) + " in [n+1, 4n/3] for n = " +
                        std::to_string(n));
  return w;
}

namespace {

struct Event {
  enum Kind : std::uint8_t { check_chain, spread_green } kind;
  Value x;  // chain root or green element
};

Coloring propagate(const GroundSet& gs, std::mt19937_64* rng) {
  Coloring c(gs);
  const Value top = gs.size();
  std::vector<std::uint32_t> red_in_chain(gs.n(), 0);
  std::vector<Event> pending;
  pending.reserve(gs.n());
  for (Value q = top - 1;; q -= 2) {
    pending.push_back({Event::check_chain, q});
    if (q == 1) break;
  }

  auto make_red = [&](Value v, Value green, Reason r) {
    switch (c.color(v)) {
      case Color::red:
        return;
      case Color::green:
        throw InternalError("forcing contradiction: " + std::to_string(v) + " and " +
                            std::to_string(green) + " are both green and related by divisibility");
      case Color::blue:
        break;
    }
    c.paint(v, Color::red, {r, green});
    const Value root = odd_part(v);
    ++red_in_chain[chain_index(root)];
    pending.push_back({Event::check_chain, root});
  };

  while (!pending.empty()) {
    if (rng != nullptr) {
      std::uniform_int_distribution<std::size_t> pick(0, pending.size() - 1);
      std::swap(pending[pick(*rng)], pending.back());
    }
    const Event ev = pending.back();
    pending.pop_back();

    if (ev.kind == Event::check_chain) {
      const Chain ch = make_chain(gs, ev.x);
      const std::uint32_t reds = red_in_chain[chain_index(ev.x)];
      if (reds == ch.size())
        throw InternalError("forcing contradiction: every element of chain " + std::to_string(ev.x) +
                            " is red");
      if (reds + 1 != ch.size()) continue;
      for (Value e : ch.elements) {
        if (c.color(e) == Color::blue) {
          c.paint(e, Color::green, {Reason::sole_survivor, 0});
          pending.push_back({Event::spread_green, e});
        }
      }
    } else {
      const Value u = ev.x;
      for (Value d = 1; d * d <= u; ++d) {
        if (u % d != 0) continue;
        if (d != u) make_red(d, u, Reason::divides_green);
        const Value e = u / d;
        if (e != u && e != d) make_red(e, u, Reason::divides_green);
      }
      for (Value v = 2 * u; v <= top; v += u) make_red(v, u, Reason::multiple_of_green);
    }
  }
  return c;
}

}  // namespace

Coloring propagate_coloring(const GroundSet& gs) { return propagate(gs, nullptr); }

Coloring propagate_coloring(const GroundSet& gs, std::uint64_t schedule_seed) {
  std::mt19937_64 rng(schedule_seed);
  return propagate(gs, &rng);
}

Coloring interval_coloring(const GroundSet& gs) {
  const Value n = gs.n();
  Coloring c(gs);
  for (Value x = 1; x <= gs.size(); ++x) {
    if (x & 1) {
      if (x > n) {
        c.paint(x, Color::green, {Reason::sole_survivor, 0});
      } else if (3 * x <= 2 * n) {
        c.paint(x, Color::red, {Reason::divides_green, odd_multiple_witness(gs, x)});
      }
    } else if (x % 4 == 2) {
      if (x > n && 3 * x <= 4 * n) {
        c.paint(x, Color::green, {Reason::sole_survivor, 0});
      } else if (has_twice_odd_witness(gs, x / 2)) {
        c.paint(x, Color::red, {Reason::divides_green, twice_odd_witness(gs, x / 2)});
      }
    }
  }
  return c;
}

Coloring uniform_blue(const GroundSet& gs) { return Coloring(gs); }

bool refines(const Coloring& coarse, const Coloring& fine) {
  if (!(coarse.ground() == fine.ground())) return false;
  for (Value x = 1; x <= coarse.ground().size(); ++x) {
    const Color want = coarse.color(x);
    if (want != Color::blue && fine.color(x) != want) return false;
  }
  return true;
}

bool coloring_refines(const GroundSet& gs) {
  return refines(interval_coloring(gs), propagate_coloring(gs));
}

std::string to_string(Band b, unsigned k) {
  switch (b) {
    case Band::none: return "none";
    case Band::singleton: return "singleton";
    case Band::forced: return "forced";
    case Band::dyadic: return "K" + std::to_string(k);
    default: return "J" + std::to_string(static_cast<int>(b) - static_cast<int>(Band::J1) + 1);
  }
}

JBand j_band(const GroundSet& gs, Value q) {
  gs.require(q);
  if ((q & 1) == 0) throw std::domain_error("j_band: root must be odd");
  const Value n = gs.n();
  if (q > n) return {Band::singleton, 0, 0};
  for (const BandSpec& b : kBandTable)
    if (in_band(q, n, b.lo, b.hi)) return {b.label, 0, b.blue};
  unsigned k = 0;
  while ((q << (k + 1)) <= n) ++k;  // q * 2^k <= n < q * 2^(k+1)
  if (k < kFirstDyadicBand) throw InternalError("band table does not cover root " + std::to_string(q));
  return {Band::dyadic, k, k};
}

std::vector<BlueCount> blue_counts(const Coloring& c) {
  const GroundSet& gs = c.ground();
  std::vector<BlueCount> out;
  out.reserve(gs.n());
  for (Value q = 1; q < gs.size(); q += 2) {
    BlueCount bc{q, 0, j_band(gs, q)};
    for (Value x = q; x <= gs.size(); x <<= 1)
      if (c.color(x) == Color::blue) ++bc.blue;
    out.push_back(bc);
  }
  return out;
}

std::vector<BlueCount> band_table_mismatches(const GroundSet& gs) {
  std::vector<BlueCount> bad;
  for (const BlueCount& bc : blue_counts(interval_coloring(gs)))
    if (bc.blue != bc.band.expected_blue) bad.push_back(bc);
  return bad;
}

}  // namespace lps
