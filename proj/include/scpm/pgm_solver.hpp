#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "scpm/instance.hpp"
#include "scpm/pattern_cover.hpp"

namespace scpm::pgm {

struct ReducedTerminals {
  std::vector<int> terminals;  // independent subset of T spanning all of T
  bool immediate_no = false;   // more than k independent terminals
};

ReducedTerminals reduce_terminals(const SpaceCoverInstance& inst);

struct EdgeTypes {
  int t = 0;
  std::vector<int> type;           // edge -> [0,t), first-occurrence numbering
  std::vector<Gf2Vector> classes;  // distinct columns of P
};

EdgeTypes edge_types(const Gf2Matrix& p);

// Multigraphs with 1..k edges, no isolated vertices, at most 2^t simple
// cycles and edge multiplicity at most t, one per isomorphism class, ordered
// by edge count. Cached per (k, t).
const std::vector<MultiGraph>& enumerate_backbones(int k, int t);
// Isomorphism-invariant encoding; equal iff isomorphic.
std::vector<int> canonical_form(const MultiGraph& h);

// Support of w + sum of the classes selected by hw.
std::vector<int> terminal_target_vertices(const Gf2Vector& w, std::uint32_t hw, const std::vector<Gf2Vector>& classes);

struct GuessContext {
  MultiGraph h;
  std::vector<int> forest;       // edges of the spanning forest
  std::vector<int> extra;        // remaining edges
  std::vector<int> label;        // type per edge of h
  std::vector<int> f_edge;       // per edge of h: pinned image or -1 (extra edges and edges inside D)
  std::vector<int> fstar;        // per vertex of h: pinned image or -1
  std::vector<int> terminals;    // reduced terminals
  std::vector<std::uint32_t> parity;       // h(W) per terminal
  std::vector<std::vector<int>> e_w;       // chosen E_W per terminal
};

// The guess admits a valid E_W for every terminal and its pinned edge images
// are feasible.
bool interesting_check(const GuessContext& ctx, const SpaceCoverInstance& inst);

struct PatternGuess {
  PatternCoverInstance pc;
  GuessContext ctx;
  std::vector<int> g_edge;  // edge of pc.g -> edge of the input graph
};

// Calls emit for every admissible guess until it returns false.
void build_pattern_instances(const SpaceCoverInstance& inst, const std::function<bool(const PatternGuess&)>& emit);

struct PgmOptions {
  PatternCoverOptions pattern;
  int cap_k = 8;
};

struct PgmStats {
  long long backbones = 0;
  long long guesses = 0;
  long long pattern_calls = 0;
  long long colorings = 0;
  long long verify_failures = 0;
};

std::optional<PrimalSolution> solve(const SpaceCoverInstance& inst, const PgmOptions& opt = {},
                                    PgmStats* stats = nullptr);

}  // namespace scpm::pgm
