#pragma once

// Shared example instances used across the test suites.

#include <functional>
#include <vector>

#include "gca/ca.hpp"
#include "gca/oracle.hpp"
#include "gca/projection.hpp"

namespace zoo {

using namespace gca;

inline GroupPtr z2() { return Group::preset("Z2"); }
inline GroupPtr z3() { return Group::preset("Z3"); }
inline GroupPtr z4() { return Group::preset("Z4"); }
inline GroupPtr z2z2() { return Group::preset("Z2xZ2"); }
inline GroupPtr s3() { return Group::preset("S3"); }

inline Pattern word_pattern(const GroupPtr& g, const std::vector<Elem>& word, int start = 0) {
  Pattern p;
  p.group = g;
  p.shape = Shape::interval(start, start + static_cast<int>(word.size()) - 1);
  p.values = word;
  return p;
}

inline ShiftPtr full_shift(const GroupPtr& g, int dim = 1) { return Shift::full(g, dim); }

/// forbid {01, 10}: the two constant configurations over Z2
inline ShiftPtr two_point_shift() {
  const GroupPtr g = z2();
  return Shift::from_patterns(g, 1, {word_pattern(g, {0, 1}), word_pattern(g, {1, 0})});
}

/// three-dot constraint c(0,0) + c(1,0) + c(0,1) = 0 over Z2
inline ShiftPtr ledrappier_shift() {
  const GroupPtr g = z2();
  std::vector<Pattern> pats;
  const Shape dots({Cell{0, 0}, Cell{1, 0}, Cell{0, 1}});
  for (Elem a = 0; a < 2; ++a)
    for (Elem b = 0; b < 2; ++b)
      for (Elem c = 0; c < 2; ++c) {
        if ((a + b + c) % 2 == 0) continue;
        Pattern p;
        p.group = g;
        p.shape = dots;
        // cells sort to (0,0), (0,1), (1,0): values follow that order
        p.values = {a, c, b};
        pats.push_back(std::move(p));
      }
  return Shift::from_patterns(g, 2, std::move(pats));
}

/// words over Z2 whose every 3-window has even sum (kernel of the
/// three-term rule): the zero word and the three shifts of (011)
inline ShiftPtr period3_kernel_shift() {
  const GroupPtr g = z2();
  std::vector<Pattern> pats;
  for (Elem a = 0; a < 2; ++a)
    for (Elem b = 0; b < 2; ++b)
      for (Elem c = 0; c < 2; ++c)
        if ((a + b + c) % 2 == 1) pats.push_back(word_pattern(g, {a, b, c}));
  return Shift::from_patterns(g, 1, std::move(pats));
}

inline std::unordered_map<Elem, Elem> table_rule(
    const GroupPtr& g, const Shape& n, const std::vector<Elem>& allowed,
    const std::function<Elem(const std::vector<Elem>&)>& fn) {
  std::unordered_map<Elem, Elem> rule;
  std::vector<Elem> vars(n.size());
  for (Elem code : allowed) {
    Elem c = code;
    for (std::size_t i = n.size(); i-- > 0;) {
      vars[i] = c % g->order();
      c /= g->order();
    }
    rule[code] = fn(vars);
  }
  return rule;
}

inline Hom make_zoo_ca(const ShiftPtr& domain, const Shape& n,
                       const std::function<Elem(const std::vector<Elem>&)>& fn) {
  const GroupPtr g = domain->alphabet();
  const Subgroup allowed = allowed_patterns(domain, n);
  return make_hom(domain, g, n, table_rule(g, n, allowed.members, fn), /*require_ca=*/true);
}

/// E1: c_u + c_{u+1} over the full shift on Z2
inline Hom e1() {
  return make_zoo_ca(full_shift(z2()), Shape::interval(0, 1),
                     [](const std::vector<Elem>& v) { return (v[0] + v[1]) % 2; });
}

/// E2: the two-point shift with both configurations sent to zero
inline Hom e2() {
  return make_zoo_ca(two_point_shift(), Shape::interval(0, 0),
                     [](const std::vector<Elem>&) { return Elem{0}; });
}

/// E3: the shift map on the full shift over Z2
inline Hom e3() {
  return make_zoo_ca(full_shift(z2()), Shape::interval(1, 1),
                     [](const std::vector<Elem>& v) { return v[0]; });
}

/// E4: the identity automaton on the full shift over Z2
inline Hom e4() {
  return make_zoo_ca(full_shift(z2()), Shape::interval(0, 0),
                     [](const std::vector<Elem>& v) { return v[0]; });
}

/// E5: x -> 2x cellwise on the full shift over Z4
inline Hom e5() {
  return make_zoo_ca(full_shift(z4()), Shape::interval(0, 0),
                     [](const std::vector<Elem>& v) { return (2 * v[0]) % 4; });
}

/// E6: the constant-to-identity map on the full shift over Z2
inline Hom e6() {
  return make_zoo_ca(full_shift(z2()), Shape::interval(0, 0),
                     [](const std::vector<Elem>&) { return Elem{0}; });
}

/// E7: c_{u-1} + c_u + c_{u+1} over the full shift on Z2
inline Hom e7() {
  return make_zoo_ca(full_shift(z2()), Shape::interval(-1, 1),
                     [](const std::vector<Elem>& v) { return (v[0] + v[1] + v[2]) % 2; });
}

inline std::vector<std::pair<std::string, Hom>> all_zoo() {
  return {{"E1", e1()}, {"E2", e2()}, {"E3", e3()}, {"E4", e4()},
          {"E5", e5()}, {"E6", e6()}, {"E7", e7()}};
}

}  // namespace zoo
