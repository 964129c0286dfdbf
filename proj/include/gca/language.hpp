#pragma once

#include "gca/automaton.hpp"

namespace gca {

enum class Verdict { Yes, No, Budget };

struct MemberResult {
  Verdict verdict = Verdict::Budget;
  std::optional<PeriodicConfiguration> witness;  // periodic configuration through p
  int refuted_box = -1;  // box radius (d >= 2) or scan step (d == 1) that killed p
  std::string frontier;  // search frontier when the budget ran out

  bool yes() const { return verdict == Verdict::Yes; }
  bool no() const { return verdict == Verdict::No; }
};

/// Is p in the language of x? Total for d <= 1; for d >= 2 dovetails the
/// periodic-configuration search against exhaustive box refutation, one
/// period step and one box step per round.
MemberResult member(const Pattern& p, const ShiftPtr& x, const Budget& budget = {});

/// member() that treats BudgetExceeded as an exception rather than a verdict.
bool member_or_throw(const Pattern& p, const ShiftPtr& x, const Budget& budget = {});

/// The set of allowed D-patterns as a subgroup of |G|^D. When assume_group
/// is set (the input contract), refuting one pattern refutes its whole coset
/// of the confirmed subgroup, which prunes most membership calls.
Subgroup allowed_patterns(const ShiftPtr& x, const Shape& d, const Budget& budget = {},
                          bool assume_group = true);

/// Allowed words of a 1D presentation, as codes in |G|^len.
std::vector<Elem> allowed_words(const ShiftPtr& x, int len, const Budget& budget = {});

/// Cached trimmed automaton for a 1D presentation.
DeBruijnPtr automaton_for(const ShiftPtr& x);

struct CompareResult {
  bool subset_12 = false;
  bool subset_21 = false;
  bool equal() const { return subset_12 && subset_21; }
};

/// Inclusion both ways: x1 is contained in x2 iff every forbidden pattern of
/// x2 is outside the language of x1.
CompareResult compare(const ShiftPtr& x1, const ShiftPtr& x2, const Budget& budget = {});

struct MixingClass {
  bool transitive = false;
  bool mixing = false;
  bool finite = false;
  std::int64_t configuration_count = -1;  // when finite
};

/// Transitivity, mixing and finiteness of a 1D shift from its trimmed
/// automaton: transitive iff strongly connected, mixing iff additionally the
/// cycle lengths have gcd 1, finite iff in- and out-degrees are all 1.
MixingClass mixing_class_1d(const ShiftPtr& x);

/// Checks that the allowed patterns on the box {0..r}^d form a subgroup.
/// A cheap necessary condition for the group-shift input contract; full
/// groupness is not decidable from any finite check. Default r = width + 1.
GroupnessReport groupness_check(const ShiftPtr& x, int radius = -1, const Budget& budget = {});

/// Record a verified periodic member for later positive-membership scans.
void note_torus(const ShiftPtr& x, const PeriodicConfiguration& c);

}  // namespace gca
