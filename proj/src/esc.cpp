#include "scpm/esc.hpp"

#include <algorithm>

#include "scpm/error.hpp"

namespace scpm {

std::vector<char> EscInstance::terminal_edge_mask() const {
  std::vector<char> mask(g.m(), 0);
  for (const auto& term : terminals) {
    if (term.edge >= 0) mask[term.edge] = 1;
  }
  return mask;
}

void EscInstance::validate() const {
  if (static_cast<int>(vclass.size()) != g.n()) throw DimensionError("esc: vclass size differs from n");
  if (t < 1 || t > 32) throw DimensionError("esc: t out of range");
  for (int c : vclass) {
    if (c < 0 || c >= t) throw DimensionError("esc: vertex class out of range");
  }
  if (k < 0) throw PreconditionError("esc: negative budget");
  std::vector<char> seen(g.m(), 0);
  for (const auto& term : terminals) {
    if (static_cast<int>(term.f.size()) != g.m()) throw DimensionError("esc: flip vector size differs from m");
    if (term.edge >= g.m()) throw DimensionError("esc: terminal edge out of range");
    if (term.edge >= 0) {
      if (seen[term.edge]) throw PreconditionError("esc: duplicate terminal edge");
      seen[term.edge] = 1;
    }
  }
}

bool contributes(const EscInstance& inst, int edge, int term, const std::vector<char>& x) {
  const auto& ed = inst.g.edge(edge);
  bool split = (x[ed.u] != 0) != (x[ed.v] != 0);
  return split != (inst.terminals[term].f[edge] != 0);
}

std::vector<int> contribution(const EscInstance& inst, int term, const std::vector<char>& x) {
  std::vector<int> out;
  for (int e = 0; e < inst.g.m(); ++e) {
    if (contributes(inst, e, term, x)) out.push_back(e);
  }
  return out;
}

std::uint32_t parity_mask(const EscInstance& inst, const std::vector<char>& x) {
  std::uint32_t mask = 0;
  for (int v = 0; v < inst.g.n(); ++v) {
    if (x[v]) mask ^= 1u << inst.vclass[v];
  }
  return mask;
}

bool almost_fits(const EscInstance& inst, const std::vector<char>& x, int term) {
  const int own = inst.terminals[term].edge;
  for (const auto& other : inst.terminals) {
    if (other.edge < 0) continue;
    if (contributes(inst, other.edge, term, x) != (other.edge == own)) return false;
  }
  return true;
}

Fit fits(const EscInstance& inst, const std::vector<char>& x, int term) {
  if (!almost_fits(inst, x, term)) return Fit::neither;
  return parity_mask(inst, x) == inst.terminals[term].b ? Fit::fits : Fit::almost_fits;
}

bool is_preliminary(const EscInstance& inst, const std::vector<char>& x, int term) {
  if (!almost_fits(inst, x, term)) return false;
  int count = 0;
  for (int e : contribution(inst, term, x)) {
    if (e != inst.terminals[term].edge) ++count;
  }
  return count <= inst.k;
}

namespace {

bool covered(const EscInstance& inst, int term, const std::vector<char>& x, const std::vector<int>& f) {
  for (int e : contribution(inst, term, x)) {
    if (e != inst.terminals[term].edge && !std::binary_search(f.begin(), f.end(), e)) return false;
  }
  return true;
}

bool valid_edge_set(const EscInstance& inst, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) > inst.k || !std::is_sorted(f.begin(), f.end())) return false;
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) return false;
  auto tmask = inst.terminal_edge_mask();
  for (int e : f) {
    if (e < 0 || e >= inst.g.m() || tmask[e]) return false;
  }
  return true;
}

}  // namespace

bool verify_esc_solution(const EscInstance& inst, const EscSolution& sol) {
  if (!valid_edge_set(inst, sol.f) || sol.x.size() != inst.terminals.size()) return false;
  for (std::size_t i = 0; i < inst.terminals.size(); ++i) {
    if (static_cast<int>(sol.x[i].size()) != inst.g.n()) return false;
    if (fits(inst, sol.x[i], static_cast<int>(i)) != Fit::fits) return false;
    if (!covered(inst, static_cast<int>(i), sol.x[i], sol.f)) return false;
  }
  return true;
}

std::uint32_t boundary_mask(const std::vector<int>& w, const std::vector<char>& x) {
  std::uint32_t mask = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (x[w[j]]) mask |= 1u << j;
  }
  return mask;
}

bool pins_respected(const AnnotatedEscInstance& inst, int term, const std::vector<char>& x) {
  if (!inst.w1.empty()) {
    for (int v : inst.w1[term]) {
      if (!x[v]) return false;
    }
  }
  if (!inst.w2.empty()) {
    for (int v : inst.w2[term]) {
      if (x[v]) return false;
    }
  }
  return true;
}

bool verify_table_entry(const AnnotatedEscInstance& inst, const EscKey& key, const EscSolution& sol) {
  const EscInstance& esc = inst.esc;
  const std::size_t nt = esc.terminals.size();
  if (key.h.size() != nt || key.l.size() != nt || sol.x.size() != nt) return false;
  if (!valid_edge_set(esc, sol.f)) return false;
  for (std::size_t i = 0; i < nt; ++i) {
    const auto& x = sol.x[i];
    const int term = static_cast<int>(i);
    if (static_cast<int>(x.size()) != esc.g.n()) return false;
    if (!almost_fits(esc, x, term) || parity_mask(esc, x) != key.h[i]) return false;
    if (boundary_mask(inst.w, x) != key.l[i] || !pins_respected(inst, term, x)) return false;
    if (!covered(esc, term, x, sol.f)) return false;
  }
  return true;
}

bool better_solution(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace scpm
