#pragma once

#include <array>
#include <vector>

#include "scpm/instance.hpp"

namespace scpm::hardness {

struct McInstance {
  MultiGraph g;
  std::vector<std::vector<int>> parts;  // X_1..X_k, a partition of V(G)
};

struct TdmInstance {
  int q = 0;
  std::vector<std::array<int, 3>> triples;  // (x, y, z), each in [0,q)
};

struct GeneratedInstance {
  SpaceCoverInstance inst;
  int dropped_edges = 0;  // intra-part edges removed before the construction
};

// Budget k(k+1)/2, terminals = hub clique edges.
GeneratedInstance from_multicolored_clique(const McInstance& mc);
// Budget 3q, terminals = the loops at a and b.
GeneratedInstance from_3dm(const TdmInstance& tdm);

// Exhaustive source-problem solvers for the equivalence tests.
bool has_multicolored_clique(const McInstance& mc);
bool has_3d_matching(const TdmInstance& tdm);

}  // namespace scpm::hardness
