#pragma once

#include <optional>
#include <vector>

#include "scpm/multigraph.hpp"

namespace scpm {

struct EoctInstance {
  MultiGraph g;
  int k = 0;
};

struct EoctResult {
  std::vector<int> s;     // deleted edges, sorted
  std::vector<int> side;  // 0/1 per vertex, proper on G - S
};

namespace eoct {

constexpr int kMaxBudget = 12;

// Some S with |S| <= k and G - S bipartite, or nullopt.
std::optional<EoctResult> solve(const MultiGraph& g, int k);
inline std::optional<EoctResult> solve(const EoctInstance& inst) { return solve(inst.g, inst.k); }
// Minimum bipartization size; throws SizeGuardError above kMaxBudget.
int minimize(const MultiGraph& g);

}  // namespace eoct

}  // namespace scpm
