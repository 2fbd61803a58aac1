#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scpm/esc.hpp"
#include "scpm/exec.hpp"
#include "scpm/instance.hpp"

namespace scpm::dual {

struct VertexTypes {
  int t = 0;
  std::vector<int> vclass;      // vertex -> [0,t), first-occurrence numbering
  std::vector<Gf2Vector> rows;  // distinct rows of P
};

VertexTypes vertex_types(const Gf2Matrix& p);

// guess[i]: parity mask for terminal i (bit j selects row class j).
EscInstance build_esc(const SpaceCoverInstance& inst, const std::vector<std::uint32_t>& guess);

struct RecursParams {
  long long q = 0;
  long long p = 0;
  long long s = 0;
};

struct DualStats {
  long long guesses = 0;
  long long esc_calls = 0;
  long long small = 0;
  long long unbreakable = 0;
  long long breakable = 0;
  long long fallbacks = 0;
  long long colorings = 0;
  int max_depth = 0;
};

struct DualOptions {
  double lambda = 1.0;
  std::optional<long long> q_override;
  std::optional<long long> p_override;
  std::optional<long long> s_override;
  ExecPolicy policy = ExecPolicy::serial;
  int max_k = 6;
};

// q = 2^(2^(lambda (t + k^2) |T|)), p = 2(k+1), s = q^4, all saturating.
RecursParams default_params(const DualOptions& opt, int t, int k, int terminals);
// True when any override is set; such runs are outside the proven regime.
bool heuristic_regime(const DualOptions& opt);

// Multiplicity reduction: keep at most k+1 non-terminal edges per
// (vertex pair, flip signature). kept[i] is the original edge id.
EscInstance reduce_multiplicity(const EscInstance& inst, std::vector<int>* kept = nullptr);

// Branch (a): exhaustive over F, one propagated partition per component side.
EscAnswerTable solve_small(const AnnotatedEscInstance& inst);
// Full recursive procedure; g must be connected.
EscAnswerTable recurs(const AnnotatedEscInstance& inst, const RecursParams& prm, DualStats* stats = nullptr,
                      int depth = 0);

// Side mask of an e-preliminary partition via edge bipartization, or nullopt.
std::optional<std::vector<char>> preliminary_partition(const EscInstance& inst, int term);
bool e_aligned(const EscInstance& inst, const std::vector<char>& z1, const std::vector<char>& z2, long long q);
bool e_close(const EscInstance& inst, const std::vector<char>& z1, const std::vector<char>& z2, long long q);

// Annotated instance on the vertex subset `side` (terminals outside become dummies).
struct SideInstance {
  AnnotatedEscInstance inst;
  std::vector<int> vertices;  // local -> global
  std::vector<int> edges;     // local -> global
};

struct SideChoice {
  std::vector<int> q;         // sorted vertices of the replaced side
  std::vector<int> boundary;  // Q-endpoints of cross edges plus W inside Q
};

SideChoice choose_side(const AnnotatedEscInstance& inst, const EdgeSeparation& sep);

SideInstance side_instance(const AnnotatedEscInstance& inst, const std::vector<int>& side,
                           const std::vector<int>& boundary);

struct Replacement {
  AnnotatedEscInstance star;
  std::vector<int> image;        // vertex of G -> vertex of G* (class members map to the representative)
  std::vector<int> origin;       // vertex of G* -> vertex of G
  std::vector<int> edge_origin;  // edge of G* -> edge of G, -1 for bundle edges
  std::vector<std::vector<int>> members;  // vertex of G* -> vertices of G it stands for
};

// Replace side Q (sorted vertex list) using the answer table of its side instance.
Replacement build_replacement(const AnnotatedEscInstance& inst, const std::vector<int>& q, const SideInstance& side,
                              const EscAnswerTable& q_table);
// Map a G* solution back to G.
EscSolution lift_replacement(const Replacement& rep, const EscSolution& sol, int n);

// Component DP over connected components; recurs per component.
std::optional<EscSolution> solve_esc(const EscInstance& inst, const RecursParams& prm, DualStats* stats = nullptr);

std::optional<DualSolution> solve(const SpaceCoverInstance& inst, const DualOptions& opt = {},
                                  DualStats* stats = nullptr);

}  // namespace scpm::dual
