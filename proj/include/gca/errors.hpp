#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gca {

enum class Errc {
  NonAssociative,
  NoIdentity,
  NoInverse,
  PowerTooLarge,
  ShapeMismatch,
  DimensionMismatch,
  NotPowerAlphabet,
  DomainTooSmall,
  NotHomomorphism,
  NotGroupHom,
  NotEndomorphism,
  NotOneDimensional,
  EmptyAutomaton,
  ConfigNotInShift,
  ParseError,
  ValidationError,
  Internal,
};

const char* errc_name(Errc c);

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Resource caps for semi-algorithms. All engine searches that are only
/// semi-decidable in one direction are bounded by these caps and report
/// BudgetExceeded instead of running forever.
struct Budget {
  int max_period = 12;               // per-axis period cap for torus searches
  int max_box = 6;                   // radius cap for exhaustive box refutation
  std::int64_t max_steps = 50'000'000;  // coarse work-unit cap

  // Halting tests inside projections run with more headroom than the search
  // they guard, so "not yet halted" and "cannot verify halt" stay distinct.
  Budget amplified() const {
    Budget b = *this;
    b.max_period += 2;
    b.max_box += 2;
    b.max_steps *= 4;
    return b;
  }
};

/// Raised when a bounded search hits its caps. Never a semantic answer.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what, std::string frontier = "")
      : std::runtime_error("BudgetExceeded: " + what), frontier_(std::move(frontier)) {}
  const std::string& frontier() const { return frontier_; }

 private:
  std::string frontier_;
};

/// Shared work counter threaded through a computation.
class BudgetMeter {
 public:
  explicit BudgetMeter(const Budget& b) : budget_(b) {}

  void charge(std::int64_t units, const char* where) {
    steps_ += units;
    if (steps_ > budget_.max_steps)
      throw BudgetExceeded(std::string("step cap in ") + where,
                           "steps=" + std::to_string(steps_));
  }
  std::int64_t steps() const { return steps_; }
  const Budget& budget() const { return budget_; }

 private:
  Budget budget_;
  std::int64_t steps_ = 0;
};

}  // namespace gca
