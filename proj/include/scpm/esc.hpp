#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "scpm/multigraph.hpp"

namespace scpm {

// A terminal of an Edge-Set Cover instance. edge == -1 marks a dummy.
struct EscTerminal {
  int edge = -1;
  std::uint32_t b = 0;           // bit i: required parity of |X cap V_i|
  std::vector<std::uint8_t> f;   // flip value per edge of g
  bool operator==(const EscTerminal&) const = default;
};

struct EscInstance {
  MultiGraph g;
  int k = 0;
  int t = 1;
  std::vector<int> vclass;  // vertex -> class in [0,t)
  std::vector<EscTerminal> terminals;

  std::vector<char> terminal_edge_mask() const;
  void validate() const;
};

struct EscSolution {
  std::vector<int> f;                   // sorted edge ids
  std::vector<std::vector<char>> x;     // side mask per terminal
  bool operator==(const EscSolution&) const = default;
};

enum class Fit { fits, almost_fits, neither };

// Vertex sets are 0/1 masks over V(G).
bool contributes(const EscInstance& inst, int edge, int term, const std::vector<char>& x);
std::vector<int> contribution(const EscInstance& inst, int term, const std::vector<char>& x);
std::uint32_t parity_mask(const EscInstance& inst, const std::vector<char>& x);
// Almost fit ignores parities; fit uses the terminal's own b.
Fit fits(const EscInstance& inst, const std::vector<char>& x, int term);
bool almost_fits(const EscInstance& inst, const std::vector<char>& x, int term);
// Almost fits and at most k contributing edges besides the terminal itself.
bool is_preliminary(const EscInstance& inst, const std::vector<char>& x, int term);
bool verify_esc_solution(const EscInstance& inst, const EscSolution& sol);

struct AnnotatedEscInstance {
  EscInstance esc;
  std::vector<int> w;                    // boundary vertices
  std::vector<std::vector<int>> w1, w2;  // per terminal: forced into X / out of X
};

// h[i]: parity mask for terminal i; l[i]: bit j set iff w[j] is in L for terminal i.
struct EscKey {
  std::vector<std::uint32_t> h;
  std::vector<std::uint32_t> l;
  auto operator<=>(const EscKey&) const = default;
};

// Absent key: no solution for that key.
using EscAnswerTable = std::map<EscKey, EscSolution>;

std::uint32_t boundary_mask(const std::vector<int>& w, const std::vector<char>& x);
bool pins_respected(const AnnotatedEscInstance& inst, int term, const std::vector<char>& x);
// The solution realizes `key` for the annotated instance (parities from h, not from b).
bool verify_table_entry(const AnnotatedEscInstance& inst, const EscKey& key, const EscSolution& sol);
// Lexicographic order among candidate optima: size first, then edge ids.
bool better_solution(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace scpm
