#include "gca/language.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_set>

namespace gca {

namespace {

struct EngineCache {
  DeBruijnPtr automaton;
  bool seeded = false;
  std::vector<PeriodicConfiguration> tori;
  std::unordered_map<std::string, MemberResult> memo;
};

EngineCache& cache_for(const Shift& x) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<EngineCache>> caches;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = caches[x.signature()];
  if (!slot) slot = std::make_unique<EngineCache>();
  return *slot;
}

std::string pattern_key(const Pattern& p) {
  std::string s;
  for (const auto& c : p.shape.cells()) s += cell_to_string(c);
  s += "=";
  for (Elem v : p.values) s += std::to_string(v) + ".";
  return s;
}

// A forbidden-pattern placement folded onto a torus or box, as assignment
// indices paired with required values. trigger is the last index assigned.
struct Placement {
  std::vector<std::pair<std::int64_t, Elem>> need;
  std::int64_t trigger = 0;
};

void seed_identity(const ShiftPtr& x, EngineCache& cache) {
  if (cache.seeded) return;
  cache.seeded = true;
  const PeriodicConfiguration id = identity_configuration(x->alphabet(), x->dim());
  if (torus_member(id, *x)) cache.tori.push_back(id);
}

std::optional<PeriodicConfiguration> torus_search(const ShiftPtr& x, const Pattern& p,
                                                  const std::vector<int>& periods,
                                                  BudgetMeter& meter) {
  const GroupPtr& g = x->alphabet();
  // a vector whose search space is hopeless should not starve later vectors
  const std::int64_t local_cap =
      std::max<std::int64_t>(200000, meter.budget().max_steps / 1000);
  std::int64_t local_steps = 0;
  std::int64_t vol = 1;
  for (int k : periods) vol *= k;
  PeriodicConfiguration c;
  c.group = g;
  c.periods = periods;
  c.fundamental.assign(static_cast<std::size_t>(vol), -1);
  // pin the pattern at its own coordinates; folds may collide
  for (std::size_t i = 0; i < p.shape.size(); ++i) {
    const std::size_t idx = c.fold_index(p.shape.cells()[i]);
    if (c.fundamental[idx] != -1 && c.fundamental[idx] != p.values[i]) return std::nullopt;
    c.fundamental[idx] = p.values[i];
  }
  // fold every forbidden-pattern translate; identical folds collapse
  std::vector<Placement> placements;
  {
    std::unordered_set<std::string> seen;
    Cell lo(static_cast<std::size_t>(x->dim()), 0);
    Cell hi(static_cast<std::size_t>(x->dim()));
    for (int i = 0; i < x->dim(); ++i) hi[static_cast<std::size_t>(i)] = periods[static_cast<std::size_t>(i)] - 1;
    const auto anchors = box_cells(lo, hi);
    for (const auto& q : x->forbidden()) {
      for (const auto& t : anchors) {
        std::map<std::int64_t, Elem> need;
        bool feasible = true;
        for (std::size_t i = 0; i < q.shape.size() && feasible; ++i) {
          const auto idx = static_cast<std::int64_t>(c.fold_index(cell_add(q.shape.cells()[i], t)));
          auto it = need.find(idx);
          if (it == need.end())
            need[idx] = q.values[i];
          else
            feasible = it->second == q.values[i];
        }
        if (!feasible) continue;  // self-conflicting fold can never match
        std::string key;
        for (auto& [idx, v] : need) key += std::to_string(idx) + ":" + std::to_string(v) + ",";
        if (!seen.insert(key).second) continue;
        Placement pl;
        pl.need.assign(need.begin(), need.end());
        pl.trigger = pl.need.back().first;
        placements.push_back(std::move(pl));
      }
    }
  }
  std::vector<std::vector<const Placement*>> by_trigger(static_cast<std::size_t>(vol));
  for (const auto& pl : placements)
    by_trigger[static_cast<std::size_t>(pl.trigger)].push_back(&pl);

  // depth-first assignment in fold order (row-major)
  std::vector<Elem> chosen(static_cast<std::size_t>(vol), -1);
  const std::vector<Elem>& pinned = c.fundamental;
  std::int64_t depth = 0;
  std::vector<Elem> next_try(static_cast<std::size_t>(vol), 0);
  auto violates = [&](std::int64_t at) {
    for (const Placement* pl : by_trigger[static_cast<std::size_t>(at)]) {
      bool match = true;
      for (auto& [idx, v] : pl->need)
        if (chosen[static_cast<std::size_t>(idx)] != v) {
          match = false;
          break;
        }
      if (match) return true;
    }
    return false;
  };
  while (true) {
    if (depth == vol) {
      PeriodicConfiguration out = c;
      out.fundamental = chosen;
      return out;
    }
    meter.charge(1, "torus search");
    if (++local_steps > local_cap) return std::nullopt;  // give up on this vector
    const Elem pin = pinned[static_cast<std::size_t>(depth)];
    bool advanced = false;
    while (true) {
      Elem v = next_try[static_cast<std::size_t>(depth)];
      if (pin != -1) {
        if (v > 0) break;  // pinned cell has a single candidate
        v = pin;
      } else if (v >= g->order()) {
        break;
      }
      ++next_try[static_cast<std::size_t>(depth)];
      chosen[static_cast<std::size_t>(depth)] = pin != -1 ? pin : v;
      if (!violates(depth)) {
        advanced = true;
        ++depth;
        break;
      }
    }
    if (advanced) continue;
    // backtrack
    next_try[static_cast<std::size_t>(depth)] = 0;
    chosen[static_cast<std::size_t>(depth)] = -1;
    if (depth == 0) return std::nullopt;
    --depth;
    chosen[static_cast<std::size_t>(depth)] = -1;
  }
}

// True iff p admits no valid extension to its hull inflated by radius.
bool box_refutes(const ShiftPtr& x, const Pattern& p, int radius, BudgetMeter& meter) {
  const GroupPtr& g = x->alphabet();
  const Shape box = p.shape.inflated(radius);
  const auto& cells = box.cells();
  const std::int64_t vol = static_cast<std::int64_t>(cells.size());
  std::vector<Elem> pinned(static_cast<std::size_t>(vol), -1);
  for (std::size_t i = 0; i < p.shape.size(); ++i)
    pinned[static_cast<std::size_t>(box.index_of(p.shape.cells()[i]))] = p.values[i];

  std::vector<Placement> placements;
  std::int64_t window = 1;  // lookback span for the dead-border memo
  {
    Cell blo, bhi;
    box.bounds(blo, bhi);
    for (const auto& q : x->forbidden()) {
      Cell qlo, qhi;
      q.shape.bounds(qlo, qhi);
      // anchors t such that q translated by t stays inside the box
      Cell tlo = cell_sub(blo, qlo), thi = cell_sub(bhi, qhi);
      bool any = true;
      for (std::size_t i = 0; i < tlo.size(); ++i)
        if (thi[i] < tlo[i]) any = false;
      if (!any) continue;
      for (const auto& t : box_cells(tlo, thi)) {
        Placement pl;
        bool inside = true;
        for (std::size_t i = 0; i < q.shape.size() && inside; ++i) {
          const int idx = box.index_of(cell_add(q.shape.cells()[i], t));
          inside = idx >= 0;
          if (inside) pl.need.push_back({idx, q.values[i]});
        }
        if (!inside) continue;
        std::sort(pl.need.begin(), pl.need.end());
        pl.trigger = pl.need.back().first;
        window = std::max(window, pl.trigger - pl.need.front().first + 1);
        placements.push_back(std::move(pl));
      }
    }
  }
  std::vector<std::vector<const Placement*>> by_trigger(static_cast<std::size_t>(vol));
  for (const auto& pl : placements)
    by_trigger[static_cast<std::size_t>(pl.trigger)].push_back(&pl);

  std::unordered_set<std::uint64_t> dead;
  auto border_hash = [&](std::int64_t depth, const std::vector<Elem>& chosen) {
    std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(depth);
    for (std::int64_t i = std::max<std::int64_t>(0, depth - window); i < depth; ++i) {
      h ^= static_cast<std::uint64_t>(chosen[static_cast<std::size_t>(i)] + 1);
      h *= 1099511628211ull;
    }
    return h;
  };

  std::vector<Elem> chosen(static_cast<std::size_t>(vol), -1);
  std::vector<Elem> next_try(static_cast<std::size_t>(vol), 0);
  std::int64_t depth = 0;
  auto violates = [&](std::int64_t at) {
    for (const Placement* pl : by_trigger[static_cast<std::size_t>(at)]) {
      bool match = true;
      for (auto& [idx, v] : pl->need)
        if (chosen[static_cast<std::size_t>(idx)] != v) {
          match = false;
          break;
        }
      if (match) return true;
    }
    return false;
  };
  while (true) {
    if (depth == vol) return false;  // a valid extension exists
    meter.charge(1, "box refutation");
    const Elem pin = pinned[static_cast<std::size_t>(depth)];
    bool advanced = false;
    if (next_try[static_cast<std::size_t>(depth)] == 0 &&
        dead.count(border_hash(depth, chosen))) {
      // identical border already exhausted
    } else {
      while (true) {
        Elem v = next_try[static_cast<std::size_t>(depth)];
        if (pin != -1) {
          if (v > 0) break;
          v = pin;
        } else if (v >= g->order()) {
          break;
        }
        ++next_try[static_cast<std::size_t>(depth)];
        chosen[static_cast<std::size_t>(depth)] = pin != -1 ? pin : v;
        if (!violates(depth)) {
          advanced = true;
          ++depth;
          break;
        }
      }
    }
    if (advanced) continue;
    dead.insert(border_hash(depth, chosen));
    next_try[static_cast<std::size_t>(depth)] = 0;
    chosen[static_cast<std::size_t>(depth)] = -1;
    if (depth == 0) return true;
    --depth;
    chosen[static_cast<std::size_t>(depth)] = -1;
  }
}

// All period vectors with volume at most the cap, ordered by volume then
// lexicographically. Ordering by volume keeps the search fair for shifts
// whose periodic points are long in one direction and short in the others
// (space-time shifts of automata with long temporal cycles, typically).
std::vector<std::vector<int>> period_vectors_by_volume(int d, std::int64_t vol_cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(static_cast<std::size_t>(d), 1);
  std::function<void(int, std::int64_t)> rec = [&](int axis, std::int64_t left) {
    if (axis == d) {
      out.push_back(v);
      return;
    }
    for (int k = 1; k <= left; ++k) {
      v[static_cast<std::size_t>(axis)] = k;
      rec(axis + 1, left / k);
    }
  };
  rec(0, vol_cap);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    std::int64_t va = 1, vb = 1;
    for (int x : a) va *= x;
    for (int x : b) vb *= x;
    if (va != vb) return va < vb;
    return a < b;
  });
  return out;
}

std::int64_t volume_cap(const Budget& b, int d) {
  std::int64_t cap = 1;
  for (int i = 0; i < d; ++i) {
    cap *= b.max_period;
    if (cap > 25000) return 100000;
  }
  // long thin tori are cheap to search, so multi-axis caps get headroom for
  // orbits whose temporal period is the order of a matrix over the alphabet
  return d >= 2 ? std::min<std::int64_t>(4 * cap, 100000) : cap;
}

}  // namespace

DeBruijnPtr automaton_for(const ShiftPtr& x) {
  auto& cache = cache_for(*x);
  if (!cache.automaton) cache.automaton = build_automaton(*x);
  return cache.automaton;
}

void note_torus(const ShiftPtr& x, const PeriodicConfiguration& c) {
  auto& cache = cache_for(*x);
  for (const auto& t : cache.tori)
    if (t == c) return;
  cache.tori.push_back(c);
}

MemberResult member(const Pattern& p0, const ShiftPtr& x, const Budget& budget) {
  if (!p0.group->same_as(*x->alphabet()))
    throw Error(Errc::ValidationError, "pattern alphabet mismatch");
  if (p0.dim() != x->dim() && !(x->zero_dim() && p0.dim() == 0))
    throw Error(Errc::DimensionMismatch, "pattern dimension mismatch");

  MemberResult res;
  if (x->zero_dim()) {
    if (p0.shape.size() != 1)
      throw Error(Errc::DimensionMismatch, "0-dim patterns have one cell");
    if (x->members().contains(p0.values[0])) {
      res.verdict = Verdict::Yes;
      PeriodicConfiguration c;
      c.group = x->alphabet();
      c.fundamental = {p0.values[0]};
      res.witness = c;
    } else {
      res.verdict = Verdict::No;
      res.refuted_box = 0;
    }
    return res;
  }

  const Pattern p = p0.canonical();
  auto& cache = cache_for(*x);
  const std::string key = pattern_key(p);
  if (auto it = cache.memo.find(key); it != cache.memo.end() && it->second.verdict != Verdict::Budget)
    return it->second;

  if (x->locally_forbidden(p)) {
    res.verdict = Verdict::No;
    res.refuted_box = 0;
    cache.memo[key] = res;
    return res;
  }

  if (x->dim() == 1) {
    const DeBruijnPtr a = automaton_for(x);
    const int died = scan_pattern(*a, p);
    if (died >= 0) {
      res.verdict = Verdict::No;
      res.refuted_box = died;
    } else {
      res.verdict = Verdict::Yes;
      res.witness = periodic_witness(*a, p);
      if (res.witness) note_torus(x, *res.witness);
    }
    cache.memo[key] = res;
    return res;
  }

  // d >= 2: scan known tori first, then dovetail
  seed_identity(x, cache);
  for (const auto& t : cache.tori)
    if (t.contains_pattern(p)) {
      res.verdict = Verdict::Yes;
      res.witness = t;
      cache.memo[key] = res;
      return res;
    }

  BudgetMeter meter(budget);
  try {
    const std::int64_t vcap = volume_cap(budget, x->dim());
    const auto vectors = period_vectors_by_volume(x->dim(), vcap);
    const int rounds = std::max(budget.max_box, 1);
    std::size_t next_vector = 0;
    for (int s = 1; s <= rounds; ++s) {
      // positive batch: vectors up to this round's share of the volume cap
      const std::int64_t vol_limit = vcap * s / rounds;
      for (; next_vector < vectors.size(); ++next_vector) {
        const auto& periods = vectors[next_vector];
        std::int64_t vol = 1;
        for (int k : periods) vol *= k;
        if (vol > vol_limit) break;
        auto found = torus_search(x, p, periods, meter);
        if (found) {
          res.verdict = Verdict::Yes;
          res.witness = *found;
          cache.tori.push_back(*found);
          cache.memo[key] = res;
          return res;
        }
      }
      if (s <= budget.max_box) {
        if (box_refutes(x, p, s, meter)) {
          res.verdict = Verdict::No;
          res.refuted_box = s;
          cache.memo[key] = res;
          return res;
        }
      }
    }
    res.frontier = "torus volumes<=" + std::to_string(vcap) +
                   ", boxes<=" + std::to_string(budget.max_box);
  } catch (const BudgetExceeded& e) {
    res.frontier = e.frontier();
  }
  res.verdict = Verdict::Budget;
  return res;
}

bool member_or_throw(const Pattern& p, const ShiftPtr& x, const Budget& budget) {
  const MemberResult r = member(p, x, budget);
  if (r.verdict == Verdict::Budget)
    throw BudgetExceeded("membership undecided within budget", r.frontier);
  return r.yes();
}

std::vector<Elem> allowed_words(const ShiftPtr& x, int len, const Budget& budget) {
  (void)budget;
  if (x->zero_dim()) {
    if (len != 1) throw Error(Errc::DimensionMismatch, "0-dim words have length 1");
    return x->members().members;
  }
  if (x->dim() != 1) throw Error(Errc::NotOneDimensional, "allowed_words needs d <= 1");
  return collect_words(*automaton_for(x), len);
}

namespace {

Subgroup allowed_patterns_impl(const ShiftPtr& x, const Shape& d, const Budget& budget,
                               bool assume_group) {
  const GroupPtr& g = x->alphabet();
  const GroupPtr pg = power_group(g, d);

  if (x->dim() == 1) {
    // interval domains read straight off the automaton
    Cell lo, hi;
    d.bounds(lo, hi);
    const int span = hi[0] - lo[0] + 1;
    if (static_cast<std::size_t>(span) == d.size()) {
      Subgroup s;
      s.parent = pg;
      s.members = collect_words(*automaton_for(x), span);
      return s;
    }
    // gapped domain: collect hull words, then keep the domain's positions
    const auto full = collect_words(*automaton_for(x), span);
    std::vector<char> keep(static_cast<std::size_t>(span), 0);
    for (const auto& c : d.cells()) keep[static_cast<std::size_t>(c[0] - lo[0])] = 1;
    std::vector<Elem> out;
    out.reserve(full.size());
    for (Elem w : full) {
      Elem code = 0;
      for (int i = 0; i < span; ++i) {
        const Elem digit = code_digit(g, span, w, i);
        if (keep[static_cast<std::size_t>(i)]) code = code * g->order() + digit;
      }
      out.push_back(code);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    Subgroup s;
    s.parent = pg;
    s.members = std::move(out);
    return s;
  }

  const std::int64_t total = pg->order();
  if (!assume_group) {
    // plain exhaustive sweep without subgroup reasoning
    std::vector<Elem> out;
    for (Elem code = 0; code < total; ++code) {
      Pattern p = pattern_from_code(g, d, code);
      const MemberResult r = member(p, x, budget);
      if (r.verdict == Verdict::Budget)
        throw BudgetExceeded("allowed-pattern membership undecided", r.frontier);
      if (r.yes()) out.push_back(code);
    }
    Subgroup s;
    s.parent = pg;
    s.members = std::move(out);
    return s;
  }

  // d >= 2: member-test candidates, pruning whole cosets of the confirmed
  // subgroup once any representative is refuted (q in p*L iff inv(p)*q in L)
  GeneratedSubgroup confirmed(pg);
  std::vector<Elem> refuted;
  for (Elem code = 0; code < total; ++code) {
    if (confirmed.contains(code)) continue;
    bool dead = false;
    for (Elem p : refuted)
      if (confirmed.contains(pg->mul(pg->inv(p), code))) {
        dead = true;
        break;
      }
    if (dead) continue;
    Pattern p = pattern_from_code(g, d, code);
    const MemberResult r = member(p, x, budget);
    if (r.verdict == Verdict::Budget)
      throw BudgetExceeded("allowed-pattern membership undecided", r.frontier);
    if (r.yes())
      confirmed.add(code);
    else
      refuted.push_back(code);
  }
  Subgroup s;
  s.parent = pg;
  s.members = confirmed.sorted_members();
  return s;
}

}  // namespace

Subgroup allowed_patterns(const ShiftPtr& x, const Shape& d, const Budget& budget,
                          bool assume_group) {
  if (x->zero_dim()) return x->members();
  static std::mutex mu;
  static std::map<std::string, Subgroup> cache;
  const std::string key = x->signature() + "|" + d.to_string() + (assume_group ? "|g" : "|e");
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Subgroup s = allowed_patterns_impl(x, d, budget, assume_group);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, s);
  return s;
}

CompareResult compare(const ShiftPtr& x1, const ShiftPtr& x2, const Budget& budget) {
  if (x1->dim() != x2->dim()) throw Error(Errc::DimensionMismatch, "compare dimension mismatch");
  if (!x1->alphabet()->same_as(*x2->alphabet()))
    throw Error(Errc::ValidationError, "compare alphabet mismatch");
  CompareResult r;
  if (x1->zero_dim()) {
    const auto& a = x1->members().members;
    const auto& b = x2->members().members;
    r.subset_12 = std::includes(b.begin(), b.end(), a.begin(), a.end());
    r.subset_21 = std::includes(a.begin(), a.end(), b.begin(), b.end());
    return r;
  }
  auto contained = [&](const ShiftPtr& inner, const ShiftPtr& outer) {
    for (const auto& q : outer->forbidden()) {
      const MemberResult m = member(q, inner, budget);
      if (m.verdict == Verdict::Budget)
        throw BudgetExceeded("compare undecided: " + q.to_string(), m.frontier);
      if (m.yes()) return false;
    }
    return true;
  };
  r.subset_12 = contained(x1, x2);
  r.subset_21 = contained(x2, x1);
  return r;
}

MixingClass mixing_class_1d(const ShiftPtr& x) {
  if (x->dim() != 1) throw Error(Errc::NotOneDimensional, "mixing classification needs d = 1");
  const DeBruijnPtr a = automaton_for(x);
  MixingClass m;
  if (a->empty()) {
    m.finite = true;
    m.configuration_count = 0;
    return m;
  }
  m.transitive = a->single_scc();
  m.mixing = m.transitive && a->cycle_gcd() == 1;
  m.finite = a->deterministic_cycles();
  if (m.finite) m.configuration_count = a->states();
  return m;
}

GroupnessReport groupness_check(const ShiftPtr& x, int radius, const Budget& budget) {
  GroupnessReport rep;
  if (x->zero_dim()) {
    const auto chk = check_subgroup(x->alphabet(), x->members().members);
    rep.ok = chk.closed;
    return rep;
  }
  if (radius < 0) radius = x->width() + 1;
  Cell lo(static_cast<std::size_t>(x->dim()), 0);
  Cell hi(static_cast<std::size_t>(x->dim()), radius);
  const Shape box = Shape::box(lo, hi);
  const Subgroup s = allowed_patterns(x, box, budget, /*assume_group=*/false);
  const auto chk = check_subgroup(s.parent, s.members);
  rep.ok = chk.closed;
  if (!chk.closed && chk.witness_a >= 0) {
    rep.witness_a = pattern_from_code(x->alphabet(), box, chk.witness_a);
    rep.witness_b = pattern_from_code(x->alphabet(), box, chk.witness_b);
  }
  return rep;
}

}  // namespace gca
