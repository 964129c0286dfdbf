#pragma once

#include "gca/language.hpp"

namespace gca {

/// A shift homomorphism that is also a group homomorphism, given by a
/// neighborhood and a local-rule table on the allowed neighborhood patterns.
/// A group cellular automaton is the endomorphism case (target == source and
/// the image stays inside the domain shift).
struct Hom {
  ShiftPtr domain;     // X over G
  GroupPtr target;     // H
  Shape neighborhood;  // N
  std::unordered_map<Elem, Elem> rule;  // allowed N-pattern code -> H element
  bool is_ca = false;
  bool verified = false;

  const GroupPtr& source() const { return domain->alphabet(); }
  int dim() const { return domain->dim(); }
  Elem apply_code(Elem npattern_code) const;
};

/// Validates completeness of the rule table on the allowed N-patterns and
/// the homomorphism identity f(p·q) = f(p)·f(q); throws NotGroupHom with a
/// witness pair. With require_ca, additionally demands target == source and
/// F(X) contained in X, throwing NotEndomorphism with a witness pattern.
Hom make_hom(ShiftPtr domain, GroupPtr target, Shape neighborhood,
             std::unordered_map<Elem, Elem> rule, bool require_ca,
             const Budget& budget = {});

/// The same hom acting on a smaller domain shift (no re-verification;
/// homomorphism restricts).
Hom restrict_domain(const Hom& f, ShiftPtr sub);

/// Stable content key of a hom (domain, neighborhood, rule table), used to
/// memoize derived constructions.
std::string hom_signature(const Hom& f);

/// Compiles a word expression over the neighborhood cells, e.g.
/// "v0*inv(v1)" or "e", into a rule table on the given allowed patterns.
/// Variables v<k> (or x<k>) refer to the k-th neighborhood cell in
/// lexicographic order; the expression must stay inside the target group.
std::unordered_map<Elem, Elem> compile_rule_word(const std::string& expr, const GroupPtr& g,
                                                 const GroupPtr& target, const Shape& n,
                                                 const std::vector<Elem>& allowed_codes);

/// Image values on s, read from a pattern that covers s + N.
Pattern apply_to_pattern(const Hom& f, const Pattern& p, const Shape& s);

/// One global step on a totally periodic configuration (with wraparound).
/// Throws ConfigNotInShift when a window is not an allowed pattern.
PeriodicConfiguration apply_to_torus(const Hom& f, const PeriodicConfiguration& c);

/// The language of F(X) on shape s, which is exactly the cellwise image of
/// the allowed patterns on s + N.
Subgroup image_language(const Hom& f, const ShiftPtr& x, const Shape& s,
                        const Budget& budget = {});

}  // namespace gca
