#include "gca/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gca {
namespace oracle {

namespace {

std::vector<Cell> fundamental_cells(const std::vector<int>& periods) {
  Cell lo(periods.size(), 0), hi(periods.size());
  for (std::size_t i = 0; i < periods.size(); ++i) hi[i] = periods[i] - 1;
  return box_cells(lo, hi);
}

// enumerate valid assignments by straightforward cell-at-a-time search,
// pruning as soon as a fully assigned forbidden placement matches
template <typename Yield>
void enumerate_valid(const ShiftPtr& x, const std::vector<int>& periods, Yield&& yield) {
  const GroupPtr& g = x->alphabet();
  PeriodicConfiguration c;
  c.group = g;
  c.periods = periods;
  std::int64_t vol = 1;
  for (int k : periods) vol *= k;
  c.fundamental.assign(static_cast<std::size_t>(vol), 0);

  const auto anchors = fundamental_cells(periods);
  // pattern placements folded to fundamental indices
  struct Fold {
    std::vector<std::pair<std::size_t, Elem>> need;
    std::size_t last;
  };
  std::vector<std::vector<Fold>> by_last(static_cast<std::size_t>(vol));
  for (const auto& q : x->forbidden()) {
    for (const auto& t : anchors) {
      std::map<std::size_t, Elem> need;
      bool feasible = true;
      for (std::size_t i = 0; i < q.shape.size() && feasible; ++i) {
        const std::size_t idx = c.fold_index(cell_add(q.shape.cells()[i], t));
        auto it = need.find(idx);
        if (it == need.end())
          need[idx] = q.values[i];
        else
          feasible = it->second == q.values[i];
      }
      if (!feasible) continue;
      Fold fold;
      fold.need.assign(need.begin(), need.end());
      fold.last = fold.need.back().first;
      by_last[fold.last].push_back(std::move(fold));
    }
  }

  std::vector<Elem> value(static_cast<std::size_t>(vol), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == static_cast<std::size_t>(vol)) {
      c.fundamental = value;
      yield(c);
      return;
    }
    for (Elem v = 0; v < g->order(); ++v) {
      value[depth] = v;
      bool bad = false;
      for (const auto& fold : by_last[depth]) {
        bool match = true;
        for (const auto& [idx, want] : fold.need)
          if (value[idx] != want) {
            match = false;
            break;
          }
        if (match) {
          bad = true;
          break;
        }
      }
      if (!bad) rec(depth + 1);
    }
  };
  rec(0);
}

// packed fundamental data; within one torus class this is injective
Elem config_code(const PeriodicConfiguration& c) {
  Elem code = 0;
  for (Elem v : c.fundamental) code = code * c.group->order() + v;
  return code;
}

std::vector<std::vector<int>> all_period_vectors(int dim, int cap) {
  Cell lo(static_cast<std::size_t>(dim), 1), hi(static_cast<std::size_t>(dim), cap);
  std::vector<std::vector<int>> out;
  for (const auto& k : box_cells(lo, hi)) out.push_back(k);
  return out;
}

}  // namespace

bool torus_valid(const PeriodicConfiguration& c, const Shift& x) {
  if (x.zero_dim()) return x.members().contains(c.fundamental[0]);
  for (const auto& q : x.forbidden()) {
    for (const auto& t : fundamental_cells(c.periods)) {
      bool match = true;
      for (std::size_t i = 0; i < q.shape.size() && match; ++i)
        match = c.at(cell_add(q.shape.cells()[i], t)) == q.values[i];
      if (match) return false;
    }
  }
  return true;
}

std::vector<PeriodicConfiguration> torus_class(const ShiftPtr& x,
                                               const std::vector<int>& periods) {
  std::vector<PeriodicConfiguration> out;
  enumerate_valid(x, periods, [&](const PeriodicConfiguration& c) { out.push_back(c); });
  return out;
}

Find find_pattern(const Pattern& p, const ShiftPtr& x, int cap) {
  Find out;
  out.cap = cap;
  for (const auto& periods : all_period_vectors(x->dim(), cap)) {
    bool done = false;
    enumerate_valid(x, periods, [&](const PeriodicConfiguration& c) {
      if (done) return;
      if (c.contains_pattern(p)) {
        out.found = true;
        out.config = c;
        done = true;
      }
    });
    if (out.found) return out;
  }
  return out;
}

PeriodicConfiguration step(const Hom& f, const PeriodicConfiguration& c) {
  PeriodicConfiguration out = c;
  out.group = f.target;
  const GroupPtr& g = f.source();
  for (const auto& u : fundamental_cells(c.periods)) {
    Elem code = 0;
    for (const auto& nc : f.neighborhood.cells()) code = code * g->order() + c.at(cell_add(u, nc));
    auto it = f.rule.find(code);
    if (it == f.rule.end())
      throw Error(Errc::ConfigNotInShift, "oracle step outside the rule table");
    out.fundamental[c.fold_index(u)] = it->second;
  }
  return out;
}

std::vector<Elem> image_words(const Hom& f, int len, int cap) {
  if (f.dim() != 1) throw Error(Errc::NotOneDimensional, "oracle image words need d = 1");
  std::set<Elem> words;
  const GroupPtr& h = f.target;
  for (int k = 1; k <= cap; ++k) {
    enumerate_valid(f.domain, {k}, [&](const PeriodicConfiguration& c) {
      const PeriodicConfiguration img = step(f, c);
      for (int off = 0; off < k; ++off) {
        Elem code = 0;
        for (int i = 0; i < len; ++i) code = code * h->order() + img.at(Cell{off + i});
        words.insert(code);
      }
    });
  }
  return std::vector<Elem>(words.begin(), words.end());
}

Decision decide(const Hom& f, Property prop, int cap) {
  Decision out;
  if (prop == Property::NilpotentOnTori) {
    for (const auto& c : limit_members(f, cap)) {
      if (!c.is_identity()) {
        out.verdict = false;
        out.conclusive = true;  // a non-identity cycle lies on a bi-infinite orbit
        out.witness_a = c;
        out.note = "non-identity periodic point in the limit set";
        return out;
      }
    }
    out.verdict = true;
    out.conclusive = false;
    return out;
  }
  for (const auto& periods : all_period_vectors(f.dim(), cap)) {
    const auto configs = torus_class(f.domain, periods);
    std::vector<PeriodicConfiguration> images;
    images.reserve(configs.size());
    for (const auto& c : configs) images.push_back(step(f, c));

    if (prop == Property::InjectiveOnTori) {
      std::map<Elem, std::size_t> seen;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        const Elem key = config_code(images[i]);
        auto [it, fresh] = seen.emplace(key, i);
        if (!fresh) {
          out.verdict = false;
          out.conclusive = true;  // a collision embeds in the full system
          out.witness_a = configs[it->second];
          out.witness_b = configs[i];
          out.note = "collision on periods " + cell_to_string(Cell(periods.begin(), periods.end()));
          return out;
        }
      }
    } else {
      std::set<Elem> image_set;
      for (const auto& img : images) image_set.insert(config_code(img));
      if (image_set.size() != configs.size()) {
        out.verdict = false;
        out.conclusive = false;  // preimages may live at longer periods
        out.note = "not onto the class with periods " +
                   cell_to_string(Cell(periods.begin(), periods.end()));
        return out;
      }
    }
  }
  out.verdict = true;
  out.conclusive = false;
  return out;
}

std::vector<PeriodicConfiguration> limit_members(const Hom& f, int cap) {
  std::vector<PeriodicConfiguration> out;
  std::set<std::string> seen;
  for (const auto& periods : all_period_vectors(f.dim(), cap)) {
    const auto configs = torus_class(f.domain, periods);
    // enumeration order is lexicographic, so codes are sorted already
    std::vector<Elem> codes(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) codes[i] = config_code(configs[i]);
    std::vector<std::size_t> next(configs.size());
    std::vector<int> indeg(configs.size(), 0);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const auto img = step(f, configs[i]);
      const Elem key = config_code(img);
      const auto it = std::lower_bound(codes.begin(), codes.end(), key);
      if (it == codes.end() || *it != key)
        throw Error(Errc::Internal, "oracle image escaped its torus class");
      next[i] = static_cast<std::size_t>(it - codes.begin());
      ++indeg[next[i]];
    }
    // peel the transients; what survives are exactly the cycle elements
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < configs.size(); ++i)
      if (indeg[i] == 0) queue.push_back(i);
    std::vector<char> dead(configs.size(), 0);
    while (!queue.empty()) {
      const std::size_t i = queue.back();
      queue.pop_back();
      dead[i] = 1;
      if (--indeg[next[i]] == 0) queue.push_back(next[i]);
    }
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (dead[i]) continue;
      std::string key;
      for (int k : configs[i].periods) key += std::to_string(k) + "x";
      key += std::to_string(codes[i]);
      if (seen.insert(key).second) out.push_back(configs[i]);
    }
  }
  return out;
}

}  // namespace oracle
}  // namespace gca
