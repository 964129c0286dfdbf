#include <doctest.h>

#include "support/zoo.hpp"

using namespace gca;
using zoo::word_pattern;

TEST_CASE("automaton construction") {
  auto z2 = zoo::z2();
  SUBCASE("the full shift at width 2 has 2 states and 4 edges") {
    auto a = automaton_for(Shift::full(z2, 1));
    CHECK(a->states() == 2);
    std::size_t edges = 0;
    for (const auto& e : a->out) edges += e.size();
    CHECK(edges == 4);
  }
  SUBCASE("two fixed points give two self-loops") {
    auto a = automaton_for(zoo::two_point_shift());
    CHECK(a->states() == 2);
    for (int s = 0; s < 2; ++s) {
      REQUIRE(a->out[static_cast<std::size_t>(s)].size() == 1);
      CHECK(a->out[static_cast<std::size_t>(s)][0].first == s);
    }
  }
  SUBCASE("trimming removes states outside bi-infinite paths") {
    // forbidding 11 and 010 leaves only the zero configuration: any 1 needs
    // a 0 successor (no 11) and a 1 predecessor (no 010), which conflict
    auto x = Shift::from_patterns(
        z2, 1, {word_pattern(z2, {1, 1}), word_pattern(z2, {0, 1, 0})});
    auto a = automaton_for(x);
    CHECK(a->states() == 1);
    REQUIRE(a->out[0].size() == 1);
    CHECK(a->reveal(a->out[0][0].second) == 0);
  }
}

TEST_CASE("membership in one dimension") {
  auto z2 = zoo::z2();
  SUBCASE("01 lies in the full shift with a periodic witness") {
    const MemberResult r = member(word_pattern(z2, {0, 1}), Shift::full(z2, 1));
    REQUIRE(r.yes());
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->contains_pattern(word_pattern(z2, {0, 1})));
    CHECK(torus_member(*r.witness, *Shift::full(z2, 1)));
  }
  SUBCASE("01 is refuted in the constant shift") {
    const MemberResult r = member(word_pattern(z2, {0, 1}), zoo::two_point_shift());
    CHECK(r.no());
  }
  SUBCASE("membership of gapped patterns follows the automaton") {
    Pattern gap;
    gap.group = z2;
    gap.shape = Shape({Cell{0}, Cell{2}});
    gap.values = {0, 1};
    CHECK(member(gap, zoo::two_point_shift()).no());
    CHECK(member(gap, Shift::full(z2, 1)).yes());
  }
}

TEST_CASE("membership in two dimensions") {
  auto z2 = zoo::z2();
  auto led = zoo::ledrappier_shift();
  SUBCASE("a directly forbidden three-dot pattern is refuted") {
    Pattern p;
    p.group = z2;
    p.shape = Shape({Cell{0, 0}, Cell{1, 0}, Cell{0, 1}});
    p.values = {1, 0, 0};  // cells sort to (0,0),(0,1),(1,0)
    CHECK(member(p, led).no());
  }
  SUBCASE("the horizontal 11 domino extends to a torus") {
    Pattern p;
    p.group = z2;
    p.shape = Shape({Cell{0, 0}, Cell{1, 0}});
    p.values = {1, 1};
    const MemberResult r = member(p, led);
    REQUIRE(r.yes());
    REQUIRE(r.witness.has_value());
    CHECK(torus_member(*r.witness, *led));
    CHECK(r.witness->contains_pattern(p));
  }
}

TEST_CASE("allowed pattern subgroups") {
  auto z2 = zoo::z2();
  SUBCASE("full shift on two cells") {
    CHECK(allowed_patterns(Shift::full(z2, 1), Shape::interval(0, 1)).size() == 4);
  }
  SUBCASE("constants form the diagonal subgroup") {
    auto s = allowed_patterns(zoo::two_point_shift(), Shape::interval(0, 1));
    CHECK(s.members == std::vector<Elem>{0, 3});
  }
  SUBCASE("the three-dot unit square halves sixteen") {
    Shape square({Cell{0, 0}, Cell{1, 0}, Cell{0, 1}, Cell{1, 1}});
    auto s = allowed_patterns(zoo::ledrappier_shift(), square);
    CHECK(s.size() == 8);
    CHECK(check_subgroup(s.parent, s.members).closed);
  }
}

TEST_CASE("comparison") {
  auto z2 = zoo::z2();
  auto full = Shift::full(z2, 1);
  auto constants = zoo::two_point_shift();
  SUBCASE("constants embed in the full shift but not conversely") {
    const CompareResult r = compare(constants, full);
    CHECK(r.subset_12);
    CHECK_FALSE(r.subset_21);
  }
  SUBCASE("every presentation equals itself") {
    for (const ShiftPtr& x : {full, constants, zoo::period3_kernel_shift()})
      CHECK(compare(x, x).equal());
  }
  SUBCASE("normalization preserves the presented shift") {
    auto wide = constants->normalized(Shape::interval(0, 2));
    CHECK(compare(constants, wide).equal());
  }
}

TEST_CASE("mixing classification") {
  SUBCASE("the full shift is mixing and infinite") {
    const MixingClass m = mixing_class_1d(Shift::full(zoo::z2(), 1));
    CHECK(m.transitive);
    CHECK(m.mixing);
    CHECK_FALSE(m.finite);
  }
  SUBCASE("two fixed points are neither transitive nor infinite") {
    const MixingClass m = mixing_class_1d(zoo::two_point_shift());
    CHECK_FALSE(m.transitive);
    CHECK_FALSE(m.mixing);
    CHECK(m.finite);
    CHECK(m.configuration_count == 2);
  }
  SUBCASE("the even-3-sum kernel has exactly four configurations") {
    const MixingClass m = mixing_class_1d(zoo::period3_kernel_shift());
    CHECK_FALSE(m.transitive);
    CHECK(m.finite);
    CHECK(m.configuration_count == 4);
  }
}

TEST_CASE("language closure properties") {
  // allowed patterns on a common shape are closed under product and inverse
  auto instances = {zoo::two_point_shift(), zoo::period3_kernel_shift(),
                    Shift::full(zoo::z4(), 1)};
  for (const ShiftPtr& x : instances) {
    const Shape window = Shape::interval(0, 2);
    const Subgroup s = allowed_patterns(x, window);
    const GroupPtr pg = s.parent;
    for (Elem a : s.members) {
      CHECK(s.contains(pg->inv(a)));
      for (Elem b : s.members) CHECK(s.contains(pg->mul(a, b)));
    }
  }
}

TEST_CASE("1d membership agrees with the generic dovetail") {
  // force the generic searcher by lifting 1D instances into the 2D engine:
  // instead, run the dovetail directly by bypassing the automaton path via
  // a fresh presentation over a second axis is disproportionate; here we
  // cross-check the automaton against the independent oracle instead
  auto z2 = zoo::z2();
  for (const ShiftPtr& x : {Shift::full(z2, 1), zoo::two_point_shift(),
                             zoo::period3_kernel_shift()}) {
    for (Elem code = 0; code < 16; ++code) {
      Pattern p = pattern_from_code(z2, Shape::interval(0, 3), code);
      const bool engine = member(p, x).yes();
      const auto orc = oracle::find_pattern(p, x, 8);
      if (orc.found) CHECK(engine);
      if (!engine) CHECK_FALSE(orc.found);
    }
  }
}
