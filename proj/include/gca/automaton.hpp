#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "gca/shift.hpp"

namespace gca {

/// Fixed-capacity bitset for automaton state sets.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i >> 6] |= (std::uint64_t(1) << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void fill();
  bool any() const;
  bool operator==(const StateSet& o) const { return w_ == o.w_; }
  std::size_t size_hint() const { return n_; }
  const std::vector<std::uint64_t>& words() const { return w_; }
  std::uint64_t hash() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// De Bruijn presentation of a one-dimensional shift of finite type:
/// states are windows of length word_len-1, edges the allowed words of
/// length word_len. After trimming, every state lies on a bi-infinite path,
/// and the label sequences of bi-infinite paths are exactly the shift.
class DeBruijn {
 public:
  GroupPtr alphabet;
  int word_len = 2;  // >= 2 so state sequences determine configurations

  std::vector<Elem> state_code;                       // sorted window codes
  std::unordered_map<Elem, int> state_index;
  std::vector<std::vector<std::pair<int, Elem>>> out;  // (target, word code)
  std::vector<std::vector<int>> in_deg_list;           // sources per state

  int states() const { return static_cast<int>(state_code.size()); }
  bool empty() const { return state_code.empty(); }
  Elem reveal(Elem word_code) const { return word_code % alphabet->order(); }
  Elem first_symbol(Elem word_code) const;

  // --- graph analysis (on the trimmed graph) -------------------------
  std::vector<int> scc_ids() const;        // component id per state
  int scc_count() const;
  bool single_scc() const;
  int cycle_gcd() const;                   // gcd of cycle lengths, 0 if empty
  bool deterministic_cycles() const;       // out-deg == in-deg == 1 everywhere
  std::vector<int> cycle_lengths() const;  // when deterministic_cycles()
};

using DeBruijnPtr = std::shared_ptr<const DeBruijn>;

/// Builds the trimmed automaton with word_len = max(2, min_word_len, width).
/// Throws PowerTooLarge when |G|^word_len exceeds the cap.
DeBruijnPtr build_automaton(const Shift& x, int min_word_len = 2,
                            std::int64_t cap = std::int64_t(1) << 22);

/// Scans a 1D pattern through the automaton. Returns the step at which the
/// frontier died (pattern absent) or -1 when the pattern is in the language.
int scan_pattern(const DeBruijn& a, const Pattern& p);

/// A periodic configuration through p: a constrained window walk closed into
/// a cycle. Empty when no cycle exists (never for group shifts).
std::optional<PeriodicConfiguration> periodic_witness(const DeBruijn& a, const Pattern& p);

/// Distinct words of a fixed length readable in the automaton, optionally
/// filtered by a uniform per-symbol predicate and mapped through a
/// cellwise projection before deduplication. Output is sorted.
std::vector<Elem> collect_words(const DeBruijn& a, int length,
                                const std::function<bool(Elem)>& symbol_filter = nullptr,
                                const std::function<Elem(Elem)>& symbol_proj = nullptr,
                                std::int64_t out_radix = 0,
                                std::int64_t cap = std::int64_t(1) << 22);

/// Lazily determinized view of the automaton graph with edges relabeled by
/// an arbitrary word-to-label map (-1 drops the edge). Serves word
/// collection, track-projected languages and transduced CA images alike.
class SubsetDfa {
 public:
  struct Node {
    StateSet set;
    std::unordered_map<Elem, int> next;  // by label
  };

  /// label_of_word maps each allowed word code to an output label or -1.
  SubsetDfa(const DeBruijn& a, std::function<Elem(Elem)> label_of_word);

  int start();                     // node for the full state set
  int step(int node, Elem label);  // -1 when the subset dies
  const std::vector<Elem>& labels_from(int node);
  std::size_t node_count() const { return nodes_.size(); }

  /// All distinct label words of the given length, sorted as codes in the
  /// mixed radix out_radix.
  std::vector<Elem> words(int length, std::int64_t out_radix,
                          std::int64_t cap = std::int64_t(1) << 22);

 private:
  int intern(StateSet s);
  void expand(int node);

  const DeBruijn& a_;
  std::function<Elem(Elem)> label_of_word_;
  std::vector<Node> nodes_;
  std::vector<bool> expanded_;
  std::vector<std::vector<Elem>> labels_cache_;
  std::unordered_map<std::uint64_t, std::vector<int>> by_hash_;
};

}  // namespace gca
