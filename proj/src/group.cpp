#include "gca/group.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <set>

namespace gca {

namespace {

// Composition tables for the permutation-built presets.
std::vector<std::vector<int>> perm_group_table(const std::vector<std::vector<int>>& perms) {
  const int n = static_cast<int>(perms.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  auto find = [&](const std::vector<int>& p) {
    for (int i = 0; i < n; ++i)
      if (perms[i] == p) return i;
    throw Error(Errc::Internal, "permutation set not closed");
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(perms[a].size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = find(c);
    }
  return t;
}

std::vector<std::vector<int>> all_perms(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(out.begin(), out.end());
  // put the identity first so it gets index 0
  std::vector<int> id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  auto it = std::find(out.begin(), out.end(), id);
  std::iter_swap(out.begin(), it);
  return out;
}

std::string perm_label(const std::vector<int>& p) {
  std::string s;
  for (int v : p) s += static_cast<char>('0' + v);
  return s;
}

}  // namespace

void Group::finish_atomic() {
  const std::int64_t n = order_;
  // identity
  Elem id = -1;
  for (Elem e = 0; e < n; ++e) {
    bool ok = true;
    for (Elem a = 0; a < n && ok; ++a)
      ok = mul_[static_cast<std::size_t>(e * n + a)] == a &&
           mul_[static_cast<std::size_t>(a * n + e)] == a;
    if (ok) {
      id = e;
      break;
    }
  }
  if (id < 0) throw Error(Errc::NoIdentity, "no two-sided identity element");
  identity_ = id;
  // associativity, exhaustive
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      const Elem ab = mul_[static_cast<std::size_t>(a * n + b)];
      for (Elem c = 0; c < n; ++c) {
        const Elem bc = mul_[static_cast<std::size_t>(b * n + c)];
        if (mul_[static_cast<std::size_t>(ab * n + c)] !=
            mul_[static_cast<std::size_t>(a * n + bc)])
          throw Error(Errc::NonAssociative,
                      "triple (" + label(a) + "," + label(b) + "," + label(c) + ")");
      }
    }
  // inverses
  inv_.assign(static_cast<std::size_t>(n), -1);
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b)
      if (mul_[static_cast<std::size_t>(a * n + b)] == id &&
          mul_[static_cast<std::size_t>(b * n + a)] == id) {
        inv_[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(b);
        break;
      }
    if (inv_[static_cast<std::size_t>(a)] < 0)
      throw Error(Errc::NoInverse, "element " + label(a) + " has no inverse");
  }
  abelian_ = true;
  for (Elem a = 0; a < n && abelian_; ++a)
    for (Elem b = a + 1; b < n; ++b)
      if (mul_[static_cast<std::size_t>(a * n + b)] != mul_[static_cast<std::size_t>(b * n + a)]) {
        abelian_ = false;
        break;
      }
}

GroupPtr Group::from_table(std::vector<std::string> labels,
                           const std::vector<std::vector<int>>& table) {
  const std::int64_t n = static_cast<std::int64_t>(table.size());
  if (n == 0) throw Error(Errc::ValidationError, "empty Cayley table");
  if (labels.size() != static_cast<std::size_t>(n))
    throw Error(Errc::ValidationError, "label count does not match table size");
  {
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() != labels.size())
      throw Error(Errc::ValidationError, "duplicate element labels");
  }
  auto g = std::shared_ptr<Group>(new Group());
  g->order_ = n;
  g->labels_ = std::move(labels);
  g->mul_.resize(static_cast<std::size_t>(n * n));
  for (std::int64_t i = 0; i < n; ++i) {
    if (table[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(n))
      throw Error(Errc::ValidationError, "Cayley table is not square");
    for (std::int64_t j = 0; j < n; ++j) {
      const int v = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v < 0 || v >= n) throw Error(Errc::ValidationError, "table entry out of range");
      g->mul_[static_cast<std::size_t>(i * n + j)] = v;
    }
  }
  g->finish_atomic();
  return g;
}

GroupPtr Group::preset(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, GroupPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
  }

  auto cyclic = [](int n) {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return Group::from_table(labels, t);
  };

  GroupPtr g;
  if (name == "trivial") {
    g = cyclic(1);
  } else if (name == "Z2") {
    g = cyclic(2);
  } else if (name == "Z3") {
    g = cyclic(3);
  } else if (name == "Z4") {
    g = cyclic(4);
  } else if (name == "Z5") {
    g = cyclic(5);
  } else if (name == "Z6") {
    g = cyclic(6);
  } else if (name == "Z2xZ2") {
    g = Group::product(Group::preset("Z2"), Group::preset("Z2"));
  } else if (name == "S3") {
    auto perms = all_perms(3);
    std::vector<std::string> labels;
    for (auto& p : perms) labels.push_back(perm_label(p));
    g = Group::from_table(labels, perm_group_table(perms));
  } else if (name == "D4") {
    // symmetries of the square as permutations of its corners
    std::vector<std::vector<int>> perms = {
        {0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2},
        {1, 0, 3, 2}, {3, 2, 1, 0}, {0, 3, 2, 1}, {2, 1, 0, 3}};
    std::vector<std::string> labels = {"e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"};
    g = Group::from_table(labels, perm_group_table(perms));
  } else if (name == "Q8") {
    // 1 -1 i -i j -j k -k
    std::vector<std::string> labels = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    std::vector<std::vector<int>> t = {
        {0, 1, 2, 3, 4, 5, 6, 7},
        {1, 0, 3, 2, 5, 4, 7, 6},
        {2, 3, 1, 0, 6, 7, 5, 4},
        {3, 2, 0, 1, 7, 6, 4, 5},
        {4, 5, 7, 6, 1, 0, 2, 3},
        {5, 4, 6, 7, 0, 1, 3, 2},
        {6, 7, 4, 5, 3, 2, 1, 0},
        {7, 6, 5, 4, 2, 3, 0, 1}};
    g = Group::from_table(labels, t);
  } else {
    throw Error(Errc::ValidationError, "unknown group preset '" + name + "'");
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(name, g);
  return g;
}

GroupPtr Group::product(GroupPtr a, GroupPtr b, const GroupLimits& lim) {
  if (!a || !b) throw Error(Errc::ValidationError, "null factor group");
  auto g = std::shared_ptr<Group>(new Group());
  g->order_ = a->order() * b->order();
  if (g->order_ > lim.max_order)
    throw Error(Errc::PowerTooLarge, "product order " + std::to_string(g->order_) +
                                         " exceeds limit " + std::to_string(lim.max_order));
  g->factors_ = {a, b};
  g->suffix_radix_ = {b->order(), 1};
  g->identity_ = a->identity() * b->order() + b->identity();
  g->abelian_ = a->abelian() && b->abelian();
  if (g->order_ <= lim.table_cap) {
    const std::int64_t n = g->order_;
    g->mul_.resize(static_cast<std::size_t>(n * n));
    g->inv_.resize(static_cast<std::size_t>(n));
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y)
        g->mul_[static_cast<std::size_t>(x * n + y)] =
            static_cast<std::int32_t>(g->mul_composite(x, y));
      g->inv_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(g->inv_composite(x));
    }
  }
  return g;
}

GroupPtr Group::power(GroupPtr base, int copies, const GroupLimits& lim) {
  if (!base) throw Error(Errc::ValidationError, "null base group");
  if (copies <= 0) throw Error(Errc::ValidationError, "power group needs a nonempty shape");
  // overflow-safe order computation
  std::int64_t order = 1;
  for (int i = 0; i < copies; ++i) {
    if (order > lim.max_order / base->order() + 1)
      throw Error(Errc::PowerTooLarge,
                  "|G|^" + std::to_string(copies) + " exceeds limit " +
                      std::to_string(lim.max_order));
    order *= base->order();
    if (order > lim.max_order)
      throw Error(Errc::PowerTooLarge,
                  "|G|^" + std::to_string(copies) + " = " + std::to_string(order) +
                      " exceeds limit " + std::to_string(lim.max_order));
  }
  auto g = std::shared_ptr<Group>(new Group());
  g->order_ = order;
  g->factors_.assign(static_cast<std::size_t>(copies), base);
  g->suffix_radix_.resize(static_cast<std::size_t>(copies));
  std::int64_t r = 1;
  for (int i = copies - 1; i >= 0; --i) {
    g->suffix_radix_[static_cast<std::size_t>(i)] = r;
    r *= base->order();
  }
  Elem id = 0;
  for (int i = 0; i < copies; ++i) id = id * base->order() + base->identity();
  g->identity_ = id;
  g->abelian_ = base->abelian();
  if (order <= lim.table_cap) {
    const std::int64_t n = order;
    g->mul_.resize(static_cast<std::size_t>(n * n));
    g->inv_.resize(static_cast<std::size_t>(n));
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y)
        g->mul_[static_cast<std::size_t>(x * n + y)] =
            static_cast<std::int32_t>(g->mul_composite(x, y));
      g->inv_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(g->inv_composite(x));
    }
  }
  return g;
}

Elem Group::mul_composite(Elem a, Elem b) const {
  Elem out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = *factors_[i];
    const std::int64_t rad = suffix_radix_[i];
    const Elem ai = (a / rad) % f.order();
    const Elem bi = (b / rad) % f.order();
    out += f.mul(ai, bi) * rad;
  }
  return out;
}

Elem Group::inv_composite(Elem a) const {
  Elem out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = *factors_[i];
    const std::int64_t rad = suffix_radix_[i];
    const Elem ai = (a / rad) % f.order();
    out += f.inv(ai) * rad;
  }
  return out;
}

std::string Group::label(Elem a) const {
  if (!composite()) return labels_[static_cast<std::size_t>(a)];
  std::string s = "(";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += ",";
    s += factors_[i]->label(component(a, static_cast<int>(i)));
  }
  return s + ")";
}

Elem Group::element_by_label(const std::string& s) const {
  if (!label_index_) {
    auto idx = std::make_shared<std::unordered_map<std::string, Elem>>();
    if (order_ <= (1 << 16))
      for (Elem e = 0; e < order_; ++e) (*idx)[label(e)] = e;
    label_index_ = idx;
  }
  auto it = label_index_->find(s);
  return it == label_index_->end() ? -1 : it->second;
}

GroupPtr Group::factor(int i) const {
  if (!composite()) {
    if (i != 0) throw Error(Errc::NotPowerAlphabet, "atomic group has a single factor");
    return shared_from_this();
  }
  return factors_[static_cast<std::size_t>(i)];
}

Elem Group::component(Elem e, int i) const {
  if (!composite()) {
    if (i != 0) throw Error(Errc::NotPowerAlphabet, "atomic group has a single factor");
    return e;
  }
  const auto& f = *factors_[static_cast<std::size_t>(i)];
  return (e / suffix_radix_[static_cast<std::size_t>(i)]) % f.order();
}

Elem Group::compose(const std::vector<Elem>& comps) const {
  if (!composite()) {
    if (comps.size() != 1) throw Error(Errc::NotPowerAlphabet, "atomic group composes 1 part");
    return comps[0];
  }
  if (comps.size() != factors_.size())
    throw Error(Errc::NotPowerAlphabet, "component count mismatch");
  Elem out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    out += comps[i] * suffix_radix_[i];
  return out;
}

std::int64_t Group::tail_radix(int k) const {
  if (!composite()) return k == 0 ? order_ : 1;
  if (k <= 0) return order_;
  if (k >= factor_count()) return 1;
  return suffix_radix_[static_cast<std::size_t>(k - 1)];
}

bool Group::same_as(const Group& o) const {
  if (this == &o) return true;
  if (order_ != o.order_) return false;
  if (identity_ != o.identity_) return false;
  if (order_ <= 1024) {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b)
        if (mul(a, b) != o.mul(a, b)) return false;
    return true;
  }
  if (composite() && o.composite() && factor_count() == o.factor_count()) {
    for (int i = 0; i < factor_count(); ++i)
      if (!factor(i)->same_as(*o.factor(i))) return false;
    return true;
  }
  return false;
}

const std::string& Group::content_key() const {
  if (!content_key_) {
    std::string k;
    if (!composite()) {
      // FNV-1a over the multiplication table
      std::uint64_t h = 1469598103934665603ull;
      for (std::int32_t v : mul_) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 1099511628211ull;
      }
      k = "a" + std::to_string(order_) + ":" + std::to_string(h);
    } else {
      k = "c(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) k += ",";
        k += factors_[i]->content_key();
      }
      k += ")";
    }
    content_key_ = std::make_shared<std::string>(std::move(k));
  }
  return *content_key_;
}

GroupPtr canonical_power(GroupPtr base, int copies, const GroupLimits& lim) {
  static std::mutex mu;
  static std::map<std::pair<const Group*, int>, GroupPtr> cache;
  if (copies == 1) return base;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(base.get(), copies);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto g = Group::power(base, copies, lim);
  cache[key] = g;
  return g;
}

GroupPtr power_group(GroupPtr base, const Shape& d, const GroupLimits& lim) {
  if (d.empty()) throw Error(Errc::ValidationError, "power group over empty shape");
  return canonical_power(std::move(base), static_cast<int>(d.size()), lim);
}

bool Subgroup::contains(Elem e) const {
  return std::binary_search(members.begin(), members.end(), e);
}

Subgroup full_subgroup(GroupPtr g) {
  Subgroup s;
  s.parent = g;
  s.members.resize(static_cast<std::size_t>(g->order()));
  for (Elem e = 0; e < g->order(); ++e) s.members[static_cast<std::size_t>(e)] = e;
  return s;
}

Subgroup trivial_subgroup(GroupPtr g) {
  Subgroup s;
  s.parent = g;
  s.members = {g->identity()};
  return s;
}

Subgroup subgroup_closure(GroupPtr g, const std::vector<Elem>& seed) {
  GeneratedSubgroup h(g);
  for (Elem e : seed) h.add(e);
  Subgroup s;
  s.parent = std::move(g);
  s.members = h.sorted_members();
  return s;
}

Subgroup subgroup_image(const Subgroup& h, const std::vector<Elem>& map, GroupPtr k) {
  const GroupPtr& g = h.parent;
  if (map.size() != static_cast<std::size_t>(g->order()))
    throw Error(Errc::ValidationError, "element map size does not match group order");
  for (Elem a = 0; a < g->order(); ++a)
    for (Elem b = 0; b < g->order(); ++b) {
      const Elem lhs = map[static_cast<std::size_t>(g->mul(a, b))];
      const Elem rhs = k->mul(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]);
      if (lhs != rhs)
        throw Error(Errc::NotHomomorphism,
                    "witness pair (" + g->label(a) + "," + g->label(b) + ")");
    }
  return subgroup_image_unchecked(h, [&](Elem e) { return map[static_cast<std::size_t>(e)]; },
                                  std::move(k));
}

Subgroup subgroup_image_unchecked(const Subgroup& h, const std::function<Elem(Elem)>& f,
                                  GroupPtr k) {
  std::vector<Elem> out;
  out.reserve(h.members.size());
  for (Elem e : h.members) out.push_back(f(e));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  Subgroup s;
  s.parent = std::move(k);
  s.members = std::move(out);
  return s;
}

SubgroupCheck check_subgroup(const GroupPtr& g, const std::vector<Elem>& sorted_set) {
  SubgroupCheck r;
  if (sorted_set.empty()) {
    r.closed = false;
    return r;
  }
  auto in_set = [&](Elem e) {
    return std::binary_search(sorted_set.begin(), sorted_set.end(), e);
  };
  // Plain product scan; the first escaping product is the witness. Sets at
  // the sizes where this runs are capped by the callers.
  for (Elem a : sorted_set)
    for (Elem b : sorted_set) {
      if (!in_set(g->mul(a, b))) {
        r.closed = false;
        r.witness_a = a;
        r.witness_b = b;
        return r;
      }
    }
  return r;
}

GeneratedSubgroup::GeneratedSubgroup(GroupPtr g) : g_(std::move(g)) {
  const Elem id = g_->identity();
  elems_[id] = 1;
  order_.push_back(id);
}

void GeneratedSubgroup::add(Elem e) {
  if (elems_.count(e)) return;
  gens_.push_back(e);
  // The old set is closed under the old generators, so every new word has a
  // prefix of the form (old element)*e; seed with those products and extend
  // the new elements by all generators. Each element is processed once.
  const std::size_t old_size = order_.size();
  auto insert = [&](Elem y) {
    if (elems_.count(y)) return;
    elems_[y] = 1;
    order_.push_back(y);
  };
  for (std::size_t i = 0; i < old_size; ++i) insert(g_->mul(order_[i], e));
  std::size_t head = old_size;
  while (head < order_.size()) {
    const Elem x = order_[head++];
    for (Elem gen : gens_) insert(g_->mul(x, gen));
  }
}

bool GeneratedSubgroup::contains(Elem e) const { return elems_.count(e) != 0; }

std::vector<Elem> GeneratedSubgroup::sorted_members() const {
  std::vector<Elem> out = order_;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gca
