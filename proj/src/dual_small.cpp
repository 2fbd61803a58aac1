#include <algorithm>
#include <map>
#include <tuple>

#include "scpm/dual_solver.hpp"
#include "scpm/eoct.hpp"
#include "scpm/error.hpp"

namespace scpm::dual {

namespace {

using ClassKey = std::tuple<int, int, std::vector<std::uint8_t>>;

ClassKey class_key(const EscInstance& inst, int e) {
  const auto& ed = inst.g.edge(e);
  std::vector<std::uint8_t> sig;
  sig.reserve(inst.terminals.size());
  for (const auto& term : inst.terminals) sig.push_back(term.f[e]);
  return {std::min(ed.u, ed.v), std::max(ed.u, ed.v), std::move(sig)};
}

constexpr int kMaxSmallComponents = 22;

}  // namespace

EscInstance reduce_multiplicity(const EscInstance& inst, std::vector<int>* kept) {
  auto tmask = inst.terminal_edge_mask();
  std::map<ClassKey, int> count;
  std::vector<int> keep;
  for (int e = 0; e < inst.g.m(); ++e) {
    if (tmask[e] || ++count[class_key(inst, e)] <= inst.k + 1) keep.push_back(e);
  }
  std::vector<int> local(inst.g.m(), -1);
  EscInstance out;
  out.g = MultiGraph(inst.g.n());
  for (int e : keep) {
    local[e] = out.g.add_edge(inst.g.edge(e).u, inst.g.edge(e).v);
  }
  out.k = inst.k;
  out.t = inst.t;
  out.vclass = inst.vclass;
  for (const auto& term : inst.terminals) {
    EscTerminal nt;
    nt.edge = term.edge < 0 ? -1 : local[term.edge];
    nt.b = term.b;
    for (int e : keep) nt.f.push_back(term.f[e]);
    out.terminals.push_back(std::move(nt));
  }
  if (kept) *kept = std::move(keep);
  return out;
}

EscAnswerTable solve_small(const AnnotatedEscInstance& ainst) {
  std::vector<int> kept;
  const EscInstance esc = reduce_multiplicity(ainst.esc, &kept);
  AnnotatedEscInstance red{esc, ainst.w, ainst.w1, ainst.w2};
  const int n = esc.g.n();
  const int m = esc.g.m();
  const int nt = static_cast<int>(esc.terminals.size());
  auto tmask = esc.terminal_edge_mask();
  auto adj = esc.g.adjacency();

  // Within a parallel class only prefixes need to be tried.
  std::vector<int> free_edges, prev(m, -1);
  std::map<ClassKey, int> last;
  for (int e = 0; e < m; ++e) {
    if (tmask[e]) continue;
    free_edges.push_back(e);
    auto key = class_key(esc, e);
    auto it = last.find(key);
    if (it != last.end()) prev[e] = it->second;
    last[key] = e;
  }

  EscAnswerTable table;
  std::vector<char> in_f(m, 0), keep(m, 0), x(n);
  std::vector<int> side(n), comp_of(n);

  auto visit = [&](const std::vector<int>& f) {
    for (int e = 0; e < m; ++e) keep[e] = !in_f[e] && !tmask[e];
    auto comps = connected_components(esc.g, keep);
    const int r = static_cast<int>(comps.size());
    if (r > kMaxSmallComponents) throw SizeGuardError("solve_small: too many components");
    for (int c = 0; c < r; ++c) {
      for (int v : comps[c]) comp_of[v] = c;
    }
    using SubKey = std::pair<std::uint32_t, std::uint32_t>;
    std::vector<std::map<SubKey, std::vector<char>>> sub(nt);
    for (int i = 0; i < nt; ++i) {
      const auto& fl = esc.terminals[i].f;
      // Non-contributing kept edges force relative sides.
      std::fill(side.begin(), side.end(), -1);
      for (const auto& comp : comps) {
        std::vector<int> stack{comp.front()};
        side[comp.front()] = 0;
        while (!stack.empty()) {
          int u = stack.back();
          stack.pop_back();
          for (auto [v, e] : adj[u]) {
            if (!keep[e] || side[v] >= 0) continue;
            side[v] = side[u] ^ fl[e];
            stack.push_back(v);
          }
        }
      }
      for (int e = 0; e < m; ++e) {
        if (!keep[e]) continue;
        const auto& ed = esc.g.edge(e);
        if ((side[ed.u] ^ side[ed.v]) != fl[e]) return;
      }
      for (std::uint32_t a = 0; a < (1u << r); ++a) {
        for (int v = 0; v < n; ++v) x[v] = static_cast<char>(side[v] ^ (a >> comp_of[v] & 1u));
        if (!almost_fits(esc, x, i) || !pins_respected(red, i, x)) continue;
        sub[i].emplace(SubKey{parity_mask(esc, x), boundary_mask(red.w, x)}, x);
      }
      if (sub[i].empty()) return;
    }
    std::vector<int> fo;
    for (int e : f) fo.push_back(kept[e]);
    std::vector<std::map<SubKey, std::vector<char>>::const_iterator> it(nt);
    for (int i = 0; i < nt; ++i) it[i] = sub[i].begin();
    while (true) {
      EscKey key;
      for (int i = 0; i < nt; ++i) {
        key.h.push_back(it[i]->first.first);
        key.l.push_back(it[i]->first.second);
      }
      if (!table.count(key)) {
        EscSolution sol;
        sol.f = fo;
        for (int i = 0; i < nt; ++i) sol.x.push_back(it[i]->second);
        table.emplace(std::move(key), std::move(sol));
      }
      int i = 0;
      while (i < nt && ++it[i] == sub[i].end()) {
        it[i] = sub[i].begin();
        ++i;
      }
      if (i == nt) break;
    }
  };

  const int nf = static_cast<int>(free_edges.size());
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start, int left) -> void {
    if (left == 0) {
      visit(cur);
      return;
    }
    for (int j = start; j <= nf - left; ++j) {
      int e = free_edges[j];
      if (prev[e] >= 0 && !in_f[prev[e]]) continue;
      cur.push_back(e);
      in_f[e] = 1;
      self(self, j + 1, left - 1);
      in_f[e] = 0;
      cur.pop_back();
    }
  };
  for (int size = 0; size <= std::min(esc.k, nf); ++size) rec(rec, 0, size);
  return table;
}

std::optional<std::vector<char>> preliminary_partition(const EscInstance& inst, int term) {
  const int n = inst.g.n();
  const int heavy = inst.k + 1;
  const auto& own = inst.terminals[term];
  auto tmask = inst.terminal_edge_mask();
  MultiGraph h(n);
  // Force the endpoints of e onto different sides (split) or the same side.
  auto force = [&](int u, int v, bool split) {
    if (split) {
      for (int j = 0; j < heavy; ++j) h.add_edge(u, v);
    } else {
      int w = h.add_vertex();
      for (int j = 0; j < heavy; ++j) {
        h.add_edge(u, w);
        h.add_edge(w, v);
      }
    }
  };
  for (int e = 0; e < inst.g.m(); ++e) {
    const auto& ed = inst.g.edge(e);
    if (tmask[e]) {
      // contributes iff split != f
      bool must = e == own.edge;
      force(ed.u, ed.v, must != (own.f[e] != 0));
    } else if (own.f[e]) {
      h.add_edge(ed.u, ed.v);
    } else {
      int w = h.add_vertex();
      h.add_edge(ed.u, w);
      h.add_edge(w, ed.v);
    }
  }
  auto res = eoct::solve(h, inst.k);
  if (!res) return std::nullopt;
  std::vector<char> x(n);
  for (int v = 0; v < n; ++v) x[v] = res->side[v] == 0;
  return x;
}

bool e_aligned(const EscInstance& inst, const std::vector<char>& z1, const std::vector<char>& z2, long long q) {
  const int n = inst.g.n();
  long long moved = 0;
  for (int v = 0; v < n; ++v) moved += (z1[v] != 0) != (z2[v] != 0);
  if (moved > q) return false;
  long long cut = 0;
  for (const auto& ed : inst.g.edges()) {
    bool a = (z1[ed.u] != 0) != (z2[ed.u] != 0);
    bool b = (z1[ed.v] != 0) != (z2[ed.v] != 0);
    cut += a != b;
  }
  return cut <= 2LL * (inst.k + 1);
}

bool e_close(const EscInstance& inst, const std::vector<char>& z1, const std::vector<char>& z2, long long q) {
  if (e_aligned(inst, z1, z2, q)) return true;
  std::vector<char> flipped(z1.size());
  for (std::size_t v = 0; v < z1.size(); ++v) flipped[v] = !z1[v];
  return e_aligned(inst, flipped, z2, q);
}

}  // namespace scpm::dual
