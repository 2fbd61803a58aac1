#pragma once

#include <map>
#include <optional>
#include <vector>

#include "scpm/binmatroid.hpp"
#include "scpm/esc.hpp"
#include "scpm/instance.hpp"
#include "scpm/multigraph.hpp"
#include "scpm/pattern_cover.hpp"

namespace scpm {

// Size guards. Defaults are deliberately tight; widen explicitly when a
// larger instance is known to be cheap (e.g. k = 1).
struct OracleLimits {
  int primal_max_m = 14;
  int primal_max_k = 4;
  int dual_max_m = 12;
  int dual_max_k = 3;
  int pattern_max_h = 8;
  int eoct_max_m = 16;
  int esc_max_n = 10;
  int esc_max_m = 24;
};

namespace oracle {

// Minimum F, lexicographically first among minima.
std::optional<PrimalSolution> solve_primal_bruteforce(const SpaceCoverInstance& inst, const OracleLimits& lim = {});
std::optional<DualSolution> solve_dual_bruteforce(const SpaceCoverInstance& inst, const OracleLimits& lim = {});
// Every inclusion-minimal F with |F| <= k, in (size, lex) order.
std::vector<std::vector<int>> minimal_primal_solutions(const SpaceCoverInstance& inst, const OracleLimits& lim = {});

// colors: if non-null, only embeddings whose image has pairwise distinct colors.
std::optional<Embedding> pattern_cover_bruteforce(const PatternCoverInstance& inst,
                                                  const std::vector<std::uint8_t>* colors = nullptr,
                                                  const OracleLimits& lim = {});

// Minimum S with G - S bipartite if |S| <= k.
std::optional<std::vector<int>> eoct_bruteforce(const MultiGraph& g, int k, const OracleLimits& lim = {});

// All e-preliminary partitions (as side masks) over the 2^n vertex subsets.
std::vector<std::vector<char>> preliminary_partitions_bruteforce(const EscInstance& inst, int term,
                                                                 const OracleLimits& lim = {});
// Full answer table, optimal per key.
EscAnswerTable annotated_esc_bruteforce(const AnnotatedEscInstance& inst, const OracleLimits& lim = {});
std::optional<EscSolution> esc_bruteforce(const EscInstance& inst, const OracleLimits& lim = {});

}  // namespace oracle

}  // namespace scpm
