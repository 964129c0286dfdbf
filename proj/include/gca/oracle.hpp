#pragma once

#include "gca/hom.hpp"

namespace gca {

/// Independent brute-force reference over totally periodic configurations.
/// Deliberately avoids the automaton and projection machinery: everything
/// here unrolls definitions directly, so it can ground the main engine.
namespace oracle {

/// Direct wraparound scan for forbidden-pattern occurrences.
bool torus_valid(const PeriodicConfiguration& c, const Shift& x);

/// Every valid configuration with the exact period vector, sorted by
/// fundamental data. Periods are per-axis caps elsewhere; this is one class.
std::vector<PeriodicConfiguration> torus_class(const ShiftPtr& x, const std::vector<int>& periods);

struct Find {
  bool found = false;
  PeriodicConfiguration config;
  int cap = 0;
};

/// Exhaustive search for a torus with all periods <= cap containing p.
Find find_pattern(const Pattern& p, const ShiftPtr& x, int cap);

/// Direct local-rule application with wraparound.
PeriodicConfiguration step(const Hom& f, const PeriodicConfiguration& c);

/// Exact set of length-len words produced by f on tori with periods <= cap.
std::vector<Elem> image_words(const Hom& f, int len, int cap);

enum class Property { InjectiveOnTori, SurjectiveOnTori, NilpotentOnTori };

struct Decision {
  bool verdict = true;       // on the periodic subsystem with periods <= cap
  bool conclusive = false;   // a false verdict here forces the global verdict
  std::string note;
  std::optional<PeriodicConfiguration> witness_a, witness_b;
};

/// Permutation tests per torus class. Injectivity and nilpotency failures
/// are conclusive globally (the witnesses embed in the full system);
/// surjectivity on the subsystem never binds the global verdict, since
/// preimages may need longer periods.
Decision decide(const Hom& f, Property prop, int cap);

/// Cycle elements of f restricted to each torus class: periodic points of
/// the limit set. Members are conclusive: each lies on a bi-infinite orbit.
std::vector<PeriodicConfiguration> limit_members(const Hom& f, int cap);

}  // namespace oracle
}  // namespace gca
