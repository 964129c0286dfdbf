#include "support/corpus.hpp"

#include <set>

namespace corpus {

using namespace gca;

namespace {

// all unary endomorphisms of a small group, by exhaustive search
std::vector<std::vector<Elem>> endomorphisms(const GroupPtr& g) {
  std::vector<std::vector<Elem>> out;
  const std::int64_t n = g->order();
  std::vector<Elem> f(static_cast<std::size_t>(n), 0);
  std::function<void(Elem)> rec = [&](Elem at) {
    if (at == n) {
      out.push_back(f);
      return;
    }
    for (Elem v = 0; v < n; ++v) {
      f[static_cast<std::size_t>(at)] = v;
      bool ok = true;
      for (Elem a = 0; a <= at && ok; ++a)
        for (Elem b = 0; b <= at && ok; ++b) {
          const Elem ab = g->mul(a, b);
          if (ab > at) continue;
          ok = f[static_cast<std::size_t>(ab)] ==
               g->mul(f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]);
        }
      if (ok) rec(at + 1);
    }
  };
  rec(0);
  return out;
}

std::string table_signature(const Hom& f) {
  std::string s = f.source()->content_key() + "|" + f.domain->signature() + "|" +
                  f.neighborhood.to_string() + "|";
  std::vector<std::pair<Elem, Elem>> entries(f.rule.begin(), f.rule.end());
  std::sort(entries.begin(), entries.end());
  for (auto& [k, v] : entries) s += std::to_string(k) + ":" + std::to_string(v) + ",";
  return s;
}

}  // namespace

std::vector<Instance> build(std::size_t min_size) {
  std::vector<Instance> out;
  std::set<std::string> seen;

  const std::vector<std::pair<std::string, GroupPtr>> groups = {
      {"Z2", Group::preset("Z2")},     {"Z3", Group::preset("Z3")},
      {"Z4", Group::preset("Z4")},     {"Z2xZ2", Group::preset("Z2xZ2")},
      {"Z5", Group::preset("Z5")},     {"Z6", Group::preset("Z6")},
      {"S3", Group::preset("S3")}};
  const std::vector<Shape> neighborhoods = {
      Shape::interval(0, 0), Shape::interval(0, 1), Shape::interval(-1, 1)};

  auto add = [&](const std::string& name, Hom f) {
    const std::string sig = table_signature(f);
    if (!seen.insert(sig).second) return false;
    out.push_back({name, std::move(f)});
    return true;
  };

  // full-shift instances: cellwise products of unary endomorphisms over the
  // window; over non-abelian groups most candidates fail verification
  std::vector<Hom> kernel_sources;
  for (const auto& [gname, g] : groups) {
    const auto endos = endomorphisms(g);
    const ShiftPtr full = Shift::full(g, 1);
    // order-6 instances dominate analysis cost, so keep them a minority
    const std::size_t cap = g->order() >= 6 ? 12 : 48;
    std::size_t taken = 0;
    for (const Shape& n : neighborhoods) {
      const std::size_t arity = n.size();
      const Subgroup allowed = allowed_patterns(full, n);
      std::vector<std::size_t> pick(arity, 0);
      while (true) {
        auto fn = [&](const std::vector<Elem>& v) {
          Elem acc = g->identity();
          for (std::size_t i = 0; i < arity; ++i)
            acc = g->mul(acc, endos[pick[i]][static_cast<std::size_t>(v[i])]);
          return acc;
        };
        try {
          Hom f = make_hom(full, g, n, zoo::table_rule(g, n, allowed.members, fn), true);
          if (add(gname + "/full/" + n.to_string() + "/#" + std::to_string(taken),
                  std::move(f))) {
            ++taken;
            if (kernel_sources.size() < 14 && arity >= 2)
              kernel_sources.push_back(out.back().f);
          }
        } catch (const Error&) {
        }
        if (taken >= cap) break;
        std::size_t i = arity;
        bool done = true;
        while (i > 0) {
          --i;
          if (++pick[i] < endos.size()) {
            for (std::size_t j = i + 1; j < arity; ++j) pick[j] = 0;
            done = false;
            break;
          }
        }
        if (done) break;
      }
      if (taken >= cap) break;
    }
  }

  // kernel-domain instances
  std::size_t kernel_count = 0;
  for (const Hom& f : kernel_sources) {
    const ShiftPtr k = kernel_shift(f);
    if (k->is_full() || k->forbidden().empty()) continue;
    const Subgroup allowed_k = allowed_patterns(k, f.neighborhood);
    if (allowed_k.size() <= 1) continue;
    // the source map restricted to its own kernel always stays inside it
    std::unordered_map<Elem, Elem> restricted;
    for (Elem code : allowed_k.members) restricted[code] = f.rule.at(code);
    try {
      Hom g = make_hom(k, f.target, f.neighborhood, std::move(restricted), true);
      add("kernel/self/#" + std::to_string(kernel_count++), std::move(g));
    } catch (const Error&) {
    }
    // other corpus rules restricted to this kernel, when the table carries over
    std::size_t extra = 0;
    const std::size_t snapshot = out.size();
    for (std::size_t ci = 0; ci < snapshot && extra < 4; ++ci) {
      const Instance& cand = out[ci];
      if (!cand.f.source()->same_as(*k->alphabet())) continue;
      if (cand.f.dim() != k->dim()) continue;
      std::unordered_map<Elem, Elem> sub;
      bool covered = true;
      const Subgroup allowed_n = allowed_patterns(k, cand.f.neighborhood);
      for (Elem code : allowed_n.members) {
        auto it = cand.f.rule.find(code);
        if (it == cand.f.rule.end()) {
          covered = false;
          break;
        }
        sub[code] = it->second;
      }
      if (!covered) continue;
      try {
        Hom g = make_hom(k, cand.f.target, cand.f.neighborhood, std::move(sub), true);
        if (add("kernel/" + cand.name + "/#" + std::to_string(kernel_count++), std::move(g)))
          ++extra;
      } catch (const Error&) {
      }
    }
  }

  // the fixed zoo rides along so the corpus always covers the named cases
  for (auto& [name, f] : zoo::all_zoo()) add("zoo/" + name, std::move(f));

  if (out.size() < min_size)
    throw Error(Errc::Internal,
                "corpus too small: " + std::to_string(out.size()) + " instances");
  return out;
}

}  // namespace corpus
