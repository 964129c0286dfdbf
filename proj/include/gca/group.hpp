#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "gca/errors.hpp"
#include "gca/geometry.hpp"

namespace gca {

/// Element of a finite group, as a dense index in 0..order-1.
/// Elements of product and power groups are mixed-radix codes with the
/// first factor in the most significant position.
using Elem = std::int64_t;

struct GroupLimits {
  std::int64_t max_order = std::int64_t(1) << 22;  // refuse bigger power groups
  std::int64_t table_cap = 4096;  // dense Cayley tables only up to this order
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

/// A finite (possibly non-abelian) group. Atomic groups store dense Cayley
/// tables; composite groups (products, cartesian powers) multiply
/// componentwise through the factor list and materialize a table only when
/// small enough. Immutable after construction.
class Group : public std::enable_shared_from_this<Group> {
 public:
  /// Validates a raw Cayley table: associativity, identity and inverses are
  /// checked exhaustively. Throws NonAssociative / NoIdentity / NoInverse
  /// naming the offending triple or element.
  static GroupPtr from_table(std::vector<std::string> labels,
                             const std::vector<std::vector<int>>& table);

  /// Z2, Z3, Z4, Z5, Z6, Z2xZ2, S3, D4, Q8, trivial.
  static GroupPtr preset(const std::string& name);

  static GroupPtr product(GroupPtr a, GroupPtr b, const GroupLimits& lim = {});
  static GroupPtr power(GroupPtr base, int copies, const GroupLimits& lim = {});

  std::int64_t order() const { return order_; }
  Elem identity() const { return identity_; }
  bool abelian() const { return abelian_; }

  Elem mul(Elem a, Elem b) const {
    if (!mul_.empty()) return mul_[static_cast<std::size_t>(a * order_ + b)];
    return mul_composite(a, b);
  }
  Elem inv(Elem a) const {
    if (!inv_.empty()) return inv_[static_cast<std::size_t>(a)];
    return inv_composite(a);
  }

  std::string label(Elem a) const;
  /// -1 if no element carries this label.
  Elem element_by_label(const std::string& s) const;

  // --- factor structure -----------------------------------------------
  bool composite() const { return !factors_.empty(); }
  int factor_count() const { return composite() ? static_cast<int>(factors_.size()) : 1; }
  GroupPtr factor(int i) const;
  Elem component(Elem e, int i) const;
  Elem compose(const std::vector<Elem>& comps) const;
  /// Product of the orders of factors [k, end). Used to split codes.
  std::int64_t tail_radix(int k) const;

  /// Structural equality: same order and same multiplication, up to the
  /// shared element indexing. Labels are metadata and ignored.
  bool same_as(const Group& o) const;

  /// Stable content key (labels excluded), used for cache signatures.
  const std::string& content_key() const;

 private:
  Group() = default;
  void finish_atomic();  // derives identity_, inv_, abelian_ from mul_
  Elem mul_composite(Elem a, Elem b) const;
  Elem inv_composite(Elem a) const;

  std::int64_t order_ = 0;
  Elem identity_ = 0;
  bool abelian_ = true;
  std::vector<std::string> labels_;          // atomic groups only
  std::vector<std::int32_t> mul_;            // order*order, possibly empty
  std::vector<std::int32_t> inv_;
  std::vector<GroupPtr> factors_;            // composite groups only
  std::vector<std::int64_t> suffix_radix_;   // composite: tail_radix(i+1) per factor

  mutable std::shared_ptr<std::unordered_map<std::string, Elem>> label_index_;
  mutable std::shared_ptr<std::string> content_key_;
};

/// Canonical (memoized) power group so repeated requests share one object.
GroupPtr canonical_power(GroupPtr base, int copies, const GroupLimits& lim = {});
/// Power group over the tuples indexed by the lexicographic order of a shape.
GroupPtr power_group(GroupPtr base, const Shape& d, const GroupLimits& lim = {});

/// A subgroup given by its sorted member list.
struct Subgroup {
  GroupPtr parent;
  std::vector<Elem> members;  // sorted ascending

  bool contains(Elem e) const;
  std::size_t size() const { return members.size(); }
  bool operator==(const Subgroup& o) const { return members == o.members; }
};

Subgroup full_subgroup(GroupPtr g);
Subgroup trivial_subgroup(GroupPtr g);

/// Smallest subgroup containing the seed.
Subgroup subgroup_closure(GroupPtr g, const std::vector<Elem>& seed);

/// Image of H under an element-wise map into K. The map is verified to be a
/// homomorphism on H's parent; throws NotHomomorphism with a witness pair.
Subgroup subgroup_image(const Subgroup& h, const std::vector<Elem>& map, GroupPtr k);

/// Image under a trusted structural map (digit permutations, projections).
Subgroup subgroup_image_unchecked(const Subgroup& h, const std::function<Elem(Elem)>& f,
                                  GroupPtr k);

struct SubgroupCheck {
  bool closed = true;
  Elem witness_a = -1, witness_b = -1;  // product witness_a*witness_b escapes the set
};

/// Is the sorted set S a subgroup? On failure reports a product violation.
/// (For finite sets, closure under products already forces identity and
/// inverses, so a product pair is always a sufficient witness.)
SubgroupCheck check_subgroup(const GroupPtr& g, const std::vector<Elem>& sorted_set);

/// Incrementally maintained generated subgroup, for coset-based searches.
class GeneratedSubgroup {
 public:
  explicit GeneratedSubgroup(GroupPtr g);
  void add(Elem e);                 // extend by a new generator if not present
  bool contains(Elem e) const;
  std::size_t size() const { return elems_.size(); }
  std::vector<Elem> sorted_members() const;

 private:
  GroupPtr g_;
  std::vector<Elem> gens_;
  std::unordered_map<Elem, char> elems_;
  std::vector<Elem> order_;  // insertion order, used as BFS queue storage
};

}  // namespace gca
