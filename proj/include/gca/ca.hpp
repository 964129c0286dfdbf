#pragma once

#include <map>

#include "gca/projection.hpp"

namespace gca {

/// Verdict plus certificate plus resource accounting for a decided property.
struct DecisionReport {
  std::string property;
  Verdict verdict = Verdict::Budget;
  std::optional<Pattern> pattern_certificate;
  std::optional<PeriodicConfiguration> config_certificate;
  std::map<std::string, std::string> details;
  std::int64_t wall_ms = 0;

  bool holds() const { return verdict == Verdict::Yes; }
};

/// The set of bi-infinite orbits of F as a (d+1)-dimensional shift over G,
/// with time appended as the last coordinate. Spatial slices carry the
/// domain's forbidden patterns; temporally consecutive slices forbid every
/// update error of the local rule.
ShiftPtr spacetime_shift(const Hom& f, const Budget& budget = {});

/// Temporal sequences observed in the finite window d: the projection of
/// the space-time shift onto d x (time axis). One-dimensional over G^d.
ShiftPtr trace_shift(const Hom& f, const Shape& d, const Budget& budget = {});

enum class LimitRoute { Auto, Projection, Iterated };

struct LimitSet {
  ShiftPtr shift;
  std::string route;  // "projection" or "iterated-image"
};

/// The limit set: all configurations on bi-infinite orbits. Projection of
/// the space-time shift onto the spatial axes, with the iterated-image chain
/// as the fallback route when the projection budget runs out.
LimitSet limit_set(const Hom& f, const Budget& budget = {}, LimitRoute route = LimitRoute::Auto);

struct TransientChain {
  int length = 0;                 // least k with F^(k+1)(X) = F^k(X)
  std::vector<ShiftPtr> images;   // X, F(X), ..., F^k(X)
};

TransientChain transient_length(const Hom& f, const Budget& budget = {});

DecisionReport decide_injective(const Hom& f, const Budget& budget = {});
DecisionReport decide_surjective(const Hom& f, const Budget& budget = {});
DecisionReport decide_nilpotent(const Hom& f, const Budget& budget = {});
/// Eventually periodic iff the single-cell trace is finite; when it holds,
/// details carry the least preperiod n and period p with F^(n+p) = F^n.
DecisionReport decide_eventual_periodicity(const Hom& f, const Budget& budget = {});
DecisionReport decide_periodic(const Hom& f, const Budget& budget = {});
/// Exactly one of equicontinuous / sensitive holds; equicontinuity is
/// equivalent to eventual periodicity.
DecisionReport decide_sensitivity_class(const Hom& f, const Budget& budget = {});
DecisionReport decide_preinjective_1d(const Hom& f, const Budget& budget = {});

/// Searches growing windows for a trace subshift witnessing that F is not
/// transitive (not mixing). A missing witness within budget decides nothing.
struct NonmixingSearch {
  std::optional<Shape> witness;
  int boxes_tried = 0;
};
enum class MixingMode { Transitive, Mixing };
NonmixingSearch semidecide_nonmixing(const Hom& f, MixingMode mode, const Budget& budget = {});

struct EntropyEstimate {
  double value = 0.0;  // natural log units
  std::vector<std::int64_t> block_counts;  // |L_n| for n = 1..
  std::string method = "spectral";
};

/// Topological entropy of a 1D presentation: log of the spectral radius of
/// the trimmed automaton, with block counts as subadditive upper bounds.
EntropyEstimate entropy_1d(const ShiftPtr& x, double tolerance = 1e-10);

struct GoeReport {
  double h_domain = 0, h_image = 0, h_kernel = 0;
  bool addition_holds = false;       // |h(X) - h(F(X)) - h(ker F)| < tolerance
  bool moore_holds = false;          // surjective implies pre-injective here
  bool surjective = false, preinjective = false;
};

/// Checks the entropy addition formula and the one-sided Garden-of-Eden
/// implication on a single 1D instance.
GoeReport goe_entropy_check(const Hom& f, double tolerance = 1e-8, const Budget& budget = {});

struct SpaceTimeTorus {
  PeriodicConfiguration slice0;  // spatially totally periodic, in X
  int temporal_period = 1;
};

/// A jointly periodic point of the space-time shift whose time-0 slice
/// contains p. Exists whenever p is in the language of the limit set.
SpaceTimeTorus jointly_periodic_sample(const Hom& f, const Pattern& p, const Budget& budget = {});

/// Finite certificate scan for a pre-injectivity counterexample: every
/// window of the identity-padded word must avoid the kernel presentation.
bool verify_preinjective_excursion(const ShiftPtr& kernel, const Pattern& padded);

/// The full decision battery, sharing intermediate constructions.
struct Analysis {
  ShiftPtr kernel;
  ShiftPtr trace0;
  LimitSet limit;
  TransientChain chain;
  std::vector<DecisionReport> reports;
};

Analysis analyze_ca(const Hom& f, const Budget& budget = {});

}  // namespace gca
