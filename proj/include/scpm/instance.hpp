#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scpm/binmatroid.hpp"
#include "scpm/gf2.hpp"
#include "scpm/multigraph.hpp"

namespace scpm {

enum class Mode { primal, dual };

const char* mode_name(Mode m);

// (G, P, T, k): the representing matrix is A = I(G) + P over GF(2).
struct SpaceCoverInstance {
  MultiGraph g;
  Gf2Matrix p;  // n x m
  std::vector<int> terminals;
  int k = 0;
  Mode mode = Mode::primal;

  Gf2Matrix a() const;
  BinaryMatroid matroid() const { return BinaryMatroid(a()); }
  std::size_t r() const { return rank(p); }
  std::vector<char> terminal_mask() const;
  // Throws DimensionError / PreconditionError on malformed fields.
  void validate() const;

  bool operator==(const SpaceCoverInstance&) const = default;
};

struct PrimalSolution {
  std::vector<int> f;
  SpanCertificate cert;
};

struct DualSolution {
  std::vector<int> f;
  DualSpanCertificate cert;
};

using PrimalInstance = SpaceCoverInstance;
using DualInstance = SpaceCoverInstance;

// Canonical line-oriented text form:
//   SCPM v1 / mode primal|dual / n <n> m <m> k <k> / m lines `edge u v` /
//   `pert <count>` then `<row> <bits>` lines / `terminals i1 i2 ...`
std::string serialize_instance(const SpaceCoverInstance& inst);
SpaceCoverInstance parse_instance(std::string_view text);
SpaceCoverInstance load_instance(const std::string& path);
void save_instance(const SpaceCoverInstance& inst, const std::string& path);

}  // namespace scpm
