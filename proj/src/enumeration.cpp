#include "lps/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "lps/bounds.hpp"
#include "lps/cache.hpp"

namespace lps {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::bruteforce: return "bruteforce";
    case Method::chain_backtracking: return "chain_backtracking";
    case Method::cache: return "cache";
  }
  return "?";
}

CountTimeout::CountTimeout(std::size_t done, std::size_t total, BigInt partial)
    : std::runtime_error("count timed out after " + std::to_string(done) + " of " + std::to_string(total) +
                         " components"),
      done_(done),
      total_(total),
      partial_(std::move(partial)) {}

namespace {

using Clock = std::chrono::steady_clock;

std::size_t root_index(Value root) noexcept { return static_cast<std::size_t>(root / 2); }

bool related(Value a, Value b) noexcept { return a % b == 0 || b % a == 0; }

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ConflictGraph conflict_graph(const Coloring& c) {
  const GroundSet& gs = c.ground();
  const Value top = gs.size();
  ConflictGraph g;
  g.roots.reserve(gs.n());
  g.candidates.reserve(gs.n());
  for (Value q = 1; q < top; q += 2) {
    g.roots.push_back(q);
    auto& cand = g.candidates.emplace_back();
    for (Value x = q; x <= top; x <<= 1)
      if (c.color(x) != Color::red) cand.push_back(x);
    if (cand.empty()) throw InternalError("chain " + std::to_string(q) + " has no admissible element");
  }

  UnionFind uf(g.roots.size());
  for (Value r = 1; r < top; r += 2) {
    const auto& low = g.candidates[root_index(r)];
    for (Value r2 = 3 * r; r2 < top; r2 += 2 * r) {
      const auto& high = g.candidates[root_index(r2)];
      // a = r 2^i divides b = r2 2^j exactly when i <= j.
      const bool linked = two_adic(low.front()) <= two_adic(high.back());
      if (linked) {
        g.edges.emplace_back(r, r2);
        uf.unite(root_index(r), root_index(r2));
      }
    }
  }

  std::vector<std::size_t> slot(g.roots.size(), SIZE_MAX);
  for (std::size_t i = 0; i < g.roots.size(); ++i) {
    const std::size_t rep = uf.find(i);
    if (slot[rep] == SIZE_MAX) {
      slot[rep] = g.components.size();
      g.components.emplace_back();
    }
    g.components[slot[rep]].push_back(g.roots[i]);
  }
  return g;
}

namespace {

struct Link {
  std::size_t earlier;                 // position of the linked chain
  std::vector<std::uint64_t> allowed;  // per own candidate: compatible candidates of `earlier`
};

struct Slot {
  Value root = 0;
  std::vector<Value> cand;
  std::vector<Link> links;
  std::size_t tally_offset = 0;
};

struct Component {
  std::vector<Slot> slots;
  std::size_t tally_size = 0;
};

std::vector<Component> build_components(const ConflictGraph& g, ChainOrder order) {
  std::vector<std::vector<Value>> neighbors(g.roots.size());
  for (const auto& [a, b] : g.edges) {
    neighbors[root_index(a)].push_back(b);
    neighbors[root_index(b)].push_back(a);
  }
  std::vector<std::size_t> position(g.roots.size(), 0);
  std::vector<Component> out;
  out.reserve(g.components.size());
  for (const auto& roots : g.components) {
    std::vector<Value> ordered = roots;
    if (order == ChainOrder::decreasing_root) std::reverse(ordered.begin(), ordered.end());
    Component comp;
    comp.slots.resize(ordered.size());
    for (std::size_t p = 0; p < ordered.size(); ++p) {
      position[root_index(ordered[p])] = p;
      Slot& s = comp.slots[p];
      s.root = ordered[p];
      s.cand = g.candidates[root_index(s.root)];
      if (s.cand.size() > 64) throw InternalError("chain longer than 64 elements");
      s.tally_offset = comp.tally_size;
      comp.tally_size += s.cand.size();
    }
    for (std::size_t p = 0; p < ordered.size(); ++p) {
      Slot& s = comp.slots[p];
      for (Value other : neighbors[root_index(s.root)]) {
        const std::size_t e = position[root_index(other)];
        if (e >= p) continue;
        Link link{e, std::vector<std::uint64_t>(s.cand.size(), 0)};
        const auto& theirs = comp.slots[e].cand;
        for (std::size_t i = 0; i < s.cand.size(); ++i)
          for (std::size_t j = 0; j < theirs.size(); ++j)
            if (!related(s.cand[i], theirs[j])) link.allowed[i] |= std::uint64_t{1} << j;
        s.links.push_back(std::move(link));
      }
      std::sort(s.links.begin(), s.links.end(), [](const Link& a, const Link& b) { return a.earlier > b.earlier; });
    }
    out.push_back(std::move(comp));
  }
  return out;
}

using Prefix = std::vector<std::uint8_t>;

std::uint64_t full_mask(std::size_t size) noexcept {
  return size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
}

// Prefix-only admissibility, used to split a component into tasks.
class PrefixChecker {
 public:
  explicit PrefixChecker(const Component& comp) : comp_(comp), chosen_(comp.slots.size(), 0) {}

  bool admissible(std::size_t p, std::size_t i) const noexcept {
    for (const Link& l : comp_.slots[p].links)
      if (((l.allowed[i] >> chosen_[l.earlier]) & 1) == 0) return false;
    return true;
  }
  void set(std::size_t p, std::uint8_t i) noexcept { chosen_[p] = i; }

 private:
  const Component& comp_;
  std::vector<std::uint8_t> chosen_;
};

// Admissible assignments of the first `depth` slots, grown level by level
// until there are at least `target` of them.
std::vector<Prefix> split(const Component& comp, std::size_t target) {
  std::vector<Prefix> level{Prefix{}};
  PrefixChecker probe(comp);
  for (std::size_t d = 0; d < comp.slots.size() && level.size() < target; ++d) {
    std::vector<Prefix> next;
    for (const Prefix& pre : level) {
      for (std::size_t p = 0; p < pre.size(); ++p) probe.set(p, pre[p]);
      for (std::size_t i = 0; i < comp.slots[d].cand.size(); ++i) {
        if (!probe.admissible(d, i)) continue;
        Prefix grown = pre;
        grown.push_back(static_cast<std::uint8_t>(i));
        next.push_back(std::move(grown));
      }
    }
    level = std::move(next);
  }
  return level;
}

// Constraint a decided slot places on a later one: for each own candidate,
// the mask of candidates the later slot may still take.
struct Forward {
  std::size_t later;
  std::vector<std::uint64_t> permits;
};

// Per-component layout for the layered count. Before slot p is decided, the
// only thing the decided prefix can influence is which candidates the
// later slots linked to it still allow, so the state at layer p is one mask
// per slot in frontier[p].
struct Layout {
  std::vector<std::vector<Forward>> forwards;       // by slot
  std::vector<std::vector<std::size_t>> frontier;  // by layer, ascending
};

Layout make_layout(const Component& comp) {
  const std::size_t m = comp.slots.size();
  Layout lay;
  lay.forwards.resize(m);
  for (std::size_t s = 0; s < m; ++s) {
    const Slot& slot = comp.slots[s];
    for (const Link& l : slot.links) {
      Forward f{s, std::vector<std::uint64_t>(comp.slots[l.earlier].cand.size(), 0)};
      for (std::size_t own = 0; own < slot.cand.size(); ++own)
        for (std::size_t j = 0; j < f.permits.size(); ++j)
          if ((l.allowed[own] >> j) & 1) f.permits[j] |= std::uint64_t{1} << own;
      lay.forwards[l.earlier].push_back(std::move(f));
    }
  }
  lay.frontier.resize(m + 1);
  for (std::size_t p = 0; p < m; ++p) {
    std::vector<std::size_t> next;
    for (std::size_t s : lay.frontier[p])
      if (s != p) next.push_back(s);
    for (const Forward& f : lay.forwards[p]) next.push_back(f.later);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    lay.frontier[p + 1] = std::move(next);
  }
  return lay;
}

using State = std::vector<std::uint64_t>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.size();
    for (std::uint64_t w : s) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

struct Deadline {
  std::optional<Clock::time_point> at;
  std::atomic<bool> expired{false};

  bool poll() {
    if (expired.load(std::memory_order_relaxed)) return true;
    if (at && Clock::now() >= *at) expired.store(true, std::memory_order_relaxed);
    return expired.load(std::memory_order_relaxed);
  }
};

struct TaskResult {
  BigInt count;
  std::vector<BigInt> tally;
  bool aborted = false;
};

// Counts the completions of a fixed prefix by a forward pass over layer
// states, then a backward pass for per-candidate tallies.
class LayeredCount {
 public:
  LayeredCount(const Component& comp, const Layout& lay, bool membership, Deadline& deadline)
      : comp_(comp), lay_(lay), membership_(membership), deadline_(deadline) {}

  TaskResult run(const Prefix& prefix) {
    TaskResult out;
    const std::size_t m = comp_.slots.size();
    std::vector<std::vector<Edge>> edges(m);
    std::vector<std::vector<BigInt>> ways(m + 1);
    ways[0].push_back(1);

    std::vector<State> states{State{}};
    for (std::size_t p = 0; p < m; ++p) {
      std::unordered_map<State, std::uint32_t, StateHash> index;
      std::vector<State> next_states;
      const Slot& slot = comp_.slots[p];
      const auto& here = lay_.frontier[p];
      const auto pos = std::lower_bound(here.begin(), here.end(), p);
      const bool constrained = pos != here.end() && *pos == p;
      const std::size_t own = static_cast<std::size_t>(pos - here.begin());

      for (std::uint32_t k = 0; k < states.size(); ++k) {
        if ((++ticks_ & 0xfff) == 0 && deadline_.poll()) {
          out.aborted = true;
          return out;
        }
        const State& st = states[k];
        std::uint64_t choices = constrained ? st[own] : full_mask(slot.cand.size());
        if (p < prefix.size()) choices &= std::uint64_t{1} << prefix[p];
        for (; choices != 0; choices &= choices - 1) {
          const auto i = static_cast<std::uint8_t>(std::countr_zero(choices));
          State nxt;
          if (!advance(p, st, i, nxt)) continue;
          auto [it, fresh] = index.try_emplace(nxt, static_cast<std::uint32_t>(next_states.size()));
          if (fresh) {
            next_states.push_back(std::move(nxt));
            ways[p + 1].emplace_back(0);
          }
          ways[p + 1][it->second] += ways[p][k];
          if (membership_) edges[p].push_back({k, i, it->second});
        }
      }
      states = std::move(next_states);
      if (!membership_) ways[p].clear();
    }
    out.count = states.empty() ? BigInt(0) : ways[m][0];
    if (!membership_) return out;

    out.tally.assign(comp_.tally_size, 0);
    std::vector<BigInt> below(ways[m].size(), BigInt(1));
    for (std::size_t p = m; p-- > 0;) {
      std::vector<BigInt> above(ways[p].size(), BigInt(0));
      const std::size_t offset = comp_.slots[p].tally_offset;
      for (const Edge& e : edges[p]) {
        above[e.from] += below[e.to];
        out.tally[offset + e.choice] += ways[p][e.from] * below[e.to];
      }
      below = std::move(above);
    }
    return out;
  }

 private:
  struct Edge {
    std::uint32_t from;
    std::uint8_t choice;
    std::uint32_t to;
  };

  // State after slot p takes candidate i; false if some later slot is left
  // with no candidate.
  bool advance(std::size_t p, const State& st, std::uint8_t i, State& out) const {
    const auto& here = lay_.frontier[p];
    const auto& there = lay_.frontier[p + 1];
    const auto& fwd = lay_.forwards[p];
    out.assign(there.size(), 0);
    std::size_t a = 0;
    std::size_t f = 0;
    for (std::size_t t = 0; t < there.size(); ++t) {
      const std::size_t s = there[t];
      while (a < here.size() && here[a] < s) ++a;
      std::uint64_t mask = a < here.size() && here[a] == s ? st[a] : full_mask(comp_.slots[s].cand.size());
      while (f < fwd.size() && fwd[f].later < s) ++f;
      if (f < fwd.size() && fwd[f].later == s) mask &= fwd[f].permits[i];
      if (mask == 0) return false;
      out[t] = mask;
    }
    return true;
  }

  const Component& comp_;
  const Layout& lay_;
  bool membership_;
  Deadline& deadline_;
  std::uint64_t ticks_ = 0;
};

struct Task {
  std::size_t component;
  Prefix prefix;
};

}  // namespace

CountResult count_lps(const GroundSet& gs, const CountOptions& options) {
  const auto start = Clock::now();
  Deadline deadline;
  if (options.timeout) deadline.at = start + *options.timeout;

  const Coloring coloring = options.prune_red ? propagate_coloring(gs) : uniform_blue(gs);
  const ConflictGraph graph = conflict_graph(coloring);
  const std::vector<Component> comps = build_components(graph, options.order);
  std::vector<Layout> layouts;
  layouts.reserve(comps.size());
  for (const Component& c : comps) layouts.push_back(make_layout(c));

  const unsigned threads = std::max(1u, options.threads);
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    // Only components worth splitting are split; the rest run whole.
    const bool big = threads > 1 && comps[c].slots.size() > 4;
    if (!big) {
      tasks.push_back({c, {}});
      continue;
    }
    for (Prefix& pre : split(comps[c], 8 * static_cast<std::size_t>(threads))) tasks.push_back({c, std::move(pre)});
  }

  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
      const std::size_t c = tasks[t].component;
      results[t] = LayeredCount(comps[c], layouts[c], options.membership, deadline).run(tasks[t].prefix);
    }
  };
  const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
  if (spawn <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(spawn);
    for (unsigned i = 0; i < spawn; ++i) pool.emplace_back(worker);
  }

  // Merge in task order so the result does not depend on scheduling.
  std::vector<BigInt> comp_count(comps.size(), BigInt(0));
  std::vector<bool> comp_done(comps.size(), true);
  std::vector<std::vector<BigInt>> comp_tally(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    if (options.membership) comp_tally[c].assign(comps[c].tally_size, 0);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const std::size_t c = tasks[t].component;
    if (results[t].aborted) {
      comp_done[c] = false;
      continue;
    }
    comp_count[c] += results[t].count;
    if (options.membership)
      for (std::size_t i = 0; i < results[t].tally.size(); ++i) comp_tally[c][i] += results[t].tally[i];
  }

  if (deadline.expired.load()) {
    std::size_t done = 0;
    BigInt partial = 1;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!comp_done[c]) continue;
      ++done;
      partial *= comp_count[c];
    }
    throw CountTimeout(done, comps.size(), partial);
  }

  CountResult res;
  res.n = gs.n();
  res.method = Method::chain_backtracking;
  res.count = 1;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (comp_count[c] == 0)
      throw InternalError("component rooted at " + std::to_string(comps[c].slots.front().root) + " has no selection");
    res.count *= comp_count[c];
  }
  if (options.membership) {
    res.has_membership = true;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (const Slot& s : comps[c].slots) {
        for (std::size_t i = 0; i < s.cand.size(); ++i) {
          const BigInt& hits = comp_tally[c][s.tally_offset + i];
          if (hits > 0) res.sometimes_present.push_back(s.cand[i]);
          if (hits == comp_count[c]) res.always_present.push_back(s.cand[i]);
        }
      }
    }
    std::sort(res.always_present.begin(), res.always_present.end());
    std::sort(res.sometimes_present.begin(), res.sometimes_present.end());
  }
  res.elapsed = Clock::now() - start;
  return res;
}

CountResult count_bruteforce(const GroundSet& gs, Value max_n) {
  max_n = std::min<Value>(max_n, 31);
  const Value n = gs.n();
  if (n > max_n)
    throw CountRefused("brute force refuses n = " + std::to_string(n) + " (limit " + std::to_string(max_n) + ")");
  const auto start = Clock::now();
  const unsigned bits = static_cast<unsigned>(2 * n);

  // multiples[x]: bits of 2x, 3x, ... <= 2n (bit v-1 stands for v).
  std::vector<std::uint64_t> multiples(bits + 1, 0);
  for (Value x = 1; x <= bits; ++x)
    for (Value v = 2 * x; v <= bits; v += x) multiples[x] |= std::uint64_t{1} << (v - 1);

  std::uint64_t count = 0;
  std::uint64_t all = ~std::uint64_t{0};
  std::uint64_t any = 0;
  const std::uint64_t end = std::uint64_t{1} << bits;
  for (std::uint64_t s = (std::uint64_t{1} << n) - 1; s < end;) {
    bool primitive = true;
    for (std::uint64_t t = s; t != 0; t &= t - 1) {
      const unsigned x = static_cast<unsigned>(std::countr_zero(t)) + 1;
      if (s & multiples[x]) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      ++count;
      all &= s;
      any |= s;
    }
    const std::uint64_t low = s & (~s + 1);
    const std::uint64_t ripple = s + low;
    s = (((ripple ^ s) >> 2) / low) | ripple;
  }

  CountResult res;
  res.n = n;
  res.count = count;
  res.method = Method::bruteforce;
  res.has_membership = true;
  for (Value x = 1; x <= bits; ++x) {
    const std::uint64_t bit = std::uint64_t{1} << (x - 1);
    if (count > 0 && (all & bit)) res.always_present.push_back(x);
    if (any & bit) res.sometimes_present.push_back(x);
  }
  res.elapsed = Clock::now() - start;
  return res;
}

std::uint64_t enumerate_lps(const GroundSet& gs, const std::function<bool(std::span<const Value>)>& visit,
                            bool prune_red) {
  const Coloring coloring = prune_red ? propagate_coloring(gs) : uniform_blue(gs);
  const ConflictGraph graph = conflict_graph(coloring);
  const std::size_t chains = graph.roots.size();
  // Slot p holds root 2n - 1 - 2p; its odd multiples sit at smaller slots.
  std::vector<Value> chosen(chains, 0);
  std::vector<Value> sorted(chains, 0);
  std::uint64_t visited = 0;
  bool stop = false;

  std::function<void(std::size_t)> dfs = [&](std::size_t p) {
    if (p == chains) {
      sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      ++visited;
      if (!visit(sorted)) stop = true;
      return;
    }
    const std::size_t idx = chains - 1 - p;
    const Value root = graph.roots[idx];
    for (Value a : graph.candidates[idx]) {
      bool ok = true;
      for (Value r2 = 3 * root; r2 < gs.size() && ok; r2 += 2 * root) {
        const Value b = chosen[chains - 1 - root_index(r2)];
        ok = b % a != 0;
      }
      if (!ok) continue;
      chosen[p] = a;
      dfs(p + 1);
      if (stop) return;
    }
  };
  dfs(0);
  return visited;
}

std::pair<std::vector<Value>, std::vector<Value>> membership_summary(const GroundSet& gs, CountOptions options) {
  options.membership = true;
  CountResult r = count_lps(gs, options);
  return {std::move(r.always_present), std::move(r.sometimes_present)};
}

std::vector<GrowthRow> growth_table(Value lo, Value hi, CountOptions options, ResultCache* cache) {
  if (lo == 0 || lo > hi) throw std::invalid_argument("growth_table: need 1 <= lo <= hi");
  options.membership = false;
  std::vector<GrowthRow> rows;
  for (Value n = lo; n <= hi; ++n) {
    GrowthRow row;
    row.n = n;
    std::optional<BigInt> hit = cache ? cache->lookup(n) : std::nullopt;
    if (hit) {
      row.count = *hit;
      row.method = Method::cache;
    } else {
      row.count = count_lps(GroundSet(n), options).count;
      row.method = Method::chain_backtracking;
      if (cache) cache->append(n, row.count, to_string(row.method));
    }
    row.nth_root = std::exp2(log2_big(row.count) / static_cast<double>(n));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lps
