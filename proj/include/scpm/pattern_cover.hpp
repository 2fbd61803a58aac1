#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scpm/exec.hpp"
#include "scpm/multigraph.hpp"

namespace scpm {

// Embed the labeled forest h into g so that labels agree and every pinned
// vertex u[i] lands on f[i].
struct PatternCoverInstance {
  MultiGraph g;
  std::vector<int> ell_g;  // label per edge of g
  MultiGraph h;
  std::vector<int> ell_h;  // label per edge of h
  std::vector<int> u;      // pinned vertices of h
  std::vector<int> f;      // f[i] is the image of u[i]
};

struct Embedding {
  std::vector<int> vertex_map;  // V(H) -> V(G)
  std::vector<int> edge_map;    // E(H) -> E(G)
};

struct PatternCoverOptions {
  enum class Kind { deterministic, randomized };
  Kind kind = Kind::deterministic;
  int trials = 200;
  std::uint64_t seed = 1;
  int cap = 16;
  ExecPolicy policy = ExecPolicy::serial;
};

struct PatternCoverStats {
  long long colorings = 0;
};

namespace pattern_cover {

// The four embedding conditions, checked directly.
bool verify(const PatternCoverInstance& inst, const Embedding& emb);
// Embedding whose image is colorful under c (c maps V(G) to [0,|V(H)|)).
std::optional<Embedding> colorful_solve(const PatternCoverInstance& inst, const std::vector<std::uint8_t>& c,
                                        int cap = 16);
std::optional<Embedding> solve(const PatternCoverInstance& inst, const PatternCoverOptions& opt = {},
                               PatternCoverStats* stats = nullptr);

}  // namespace pattern_cover

}  // namespace scpm
