#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gca/group.hpp"

namespace gca {

/// A finite partial assignment of group elements to cells.
struct Pattern {
  GroupPtr group;
  Shape shape;
  std::vector<Elem> values;  // parallel to shape.cells()

  int dim() const { return shape.dim(); }
  Elem at(const Cell& c) const;

  /// Canonical form: the lexicographically least cell translated to 0.
  Pattern canonical() const;
  bool operator==(const Pattern& o) const;
  std::string to_string() const;
};

/// Values on the shape, packed as one mixed-radix code over |G|^|shape|
/// with the lexicographically first cell in the most significant digit.
Elem pattern_code(const Pattern& p);
Pattern pattern_from_code(const GroupPtr& g, const Shape& s, Elem code);
Elem code_digit(const GroupPtr& base, int ncells, Elem code, int i);

enum class CombineKind { Product, Inverse };

/// Cellwise product of two patterns on a common shape, or cellwise inverse.
Pattern pattern_combine(CombineKind kind, const Pattern& p, const Pattern* q = nullptr);

/// Shifts the domain by -t, matching the translation that pulls cell t to 0.
Pattern pattern_translate(const Pattern& p, const Cell& t);

Pattern identity_pattern(const GroupPtr& g, const Shape& s);

/// Reinterprets a pattern over a power alphabet G^n as a pattern over G in
/// one more dimension, with the track index prepended as the new first
/// coordinate running over 0..n-1.
Pattern hat_lift(const Pattern& p);
/// Inverse of hat_lift: collapse the first coordinate of a width-n pattern
/// whose domain is {0..n-1} x D into tracks over G^n.
Pattern hat_drop(const Pattern& p, int n);

/// Does q occur inside p at some translate (all of q's cells inside p)?
bool pattern_occurs_in(const Pattern& q, const Pattern& p);

/// A totally periodic configuration with axis-aligned periods, stored by its
/// fundamental box in row-major order (first coordinate most significant).
struct PeriodicConfiguration {
  GroupPtr group;
  std::vector<int> periods;        // one positive period per axis
  std::vector<Elem> fundamental;   // size = product of periods

  int dim() const { return static_cast<int>(periods.size()); }
  std::int64_t volume() const;
  Elem at(const Cell& c) const;            // wraps coordinates
  std::size_t fold_index(const Cell& c) const;

  PeriodicConfiguration translated(const Cell& t) const;
  bool contains_pattern(const Pattern& p) const;  // at some translate
  bool is_identity() const;
  std::string to_string() const;
  bool operator==(const PeriodicConfiguration& o) const;
};

PeriodicConfiguration identity_configuration(const GroupPtr& g, int dim);

}  // namespace gca
