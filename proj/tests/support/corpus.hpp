#pragma once

// Deterministic corpus of verified 1D group cellular automata: groups of
// order <= 6 including S3, neighborhoods inside {-1,0,1}, over full shifts
// and over kernels of corpus maps.

#include <string>
#include <vector>

#include "support/zoo.hpp"

namespace corpus {

struct Instance {
  std::string name;
  gca::Hom f;
};

/// At least min_size instances, in a fixed deterministic order.
std::vector<Instance> build(std::size_t min_size = 200);

}  // namespace corpus
