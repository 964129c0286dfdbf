#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "gca/pattern.hpp"

namespace gca {

class Shift;
using ShiftPtr = std::shared_ptr<const Shift>;

/// A group shift presented by a finite list of forbidden patterns in
/// dimension d >= 1, or by an explicit subgroup of the alphabet in
/// dimension 0. Presentations are immutable; forbidden patterns are kept in
/// canonical translated form, deduplicated and sorted.
///
/// The presented subshift is required by contract to be a subgroup of
/// G^(Z^d); groupness_check() in the language engine probes this up to a
/// radius, but full groupness is an input contract, not decidable from any
/// finite check.
class Shift : public std::enable_shared_from_this<Shift> {
 public:
  static ShiftPtr full(GroupPtr g, int dim);
  static ShiftPtr from_patterns(GroupPtr g, int dim, std::vector<Pattern> forbidden);
  static ShiftPtr from_subgroup(Subgroup members);  // dimension 0
  /// The singleton shift containing only the identity configuration.
  static ShiftPtr identity_only(GroupPtr g, int dim);

  const GroupPtr& alphabet() const { return alphabet_; }
  int dim() const { return dim_; }
  bool zero_dim() const { return dim_ == 0; }
  const std::vector<Pattern>& forbidden() const { return forbidden_; }
  const Subgroup& members() const;

  bool is_full() const;

  /// Extent of the forbidden patterns along axis 1 (at least 1).
  int width() const;
  /// Bounding box of the pattern domains on axes 2..d, as a (d-1)-dim shape.
  Shape residual_box() const;
  /// Bounding box of all pattern domains.
  Shape domain_hull() const;

  /// Does p syntactically contain some forbidden pattern?
  bool locally_forbidden(const Pattern& p) const;

  std::string signature() const;

  ShiftPtr normalized(const Shape& target) const;
  ShiftPtr relabeled(GroupPtr new_alphabet, const std::function<Elem(Elem)>& old_to_new,
                     const std::function<Elem(Elem)>& new_to_old) const;
  ShiftPtr permuted_axes(const std::vector<int>& new_to_old_axis) const;
  ShiftPtr intersect(const ShiftPtr& other) const;
  /// Drops forbidden patterns that contain another forbidden pattern.
  ShiftPtr pruned() const;

 private:
  Shift() = default;

  GroupPtr alphabet_;
  int dim_ = 0;
  std::vector<Pattern> forbidden_;
  std::optional<Subgroup> members_;
  mutable std::shared_ptr<std::string> signature_;
};

/// True iff no translate of any forbidden pattern of x occurs in c,
/// scanning the fundamental torus with wraparound.
bool torus_member(const PeriodicConfiguration& c, const Shift& x);

struct GroupnessReport {
  bool ok = true;
  std::optional<Pattern> witness_a, witness_b;  // allowed pair with forbidden product
};

}  // namespace gca
