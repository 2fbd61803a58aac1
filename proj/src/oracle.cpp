#include "scpm/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "scpm/error.hpp"

namespace scpm::oracle {

namespace {

// Calls visit(subset) for every subset of `items` with size <= k, in
// (size, lexicographic) order. visit returns false to stop.
void for_each_subset(const std::vector<int>& items, int k, const std::function<bool(const std::vector<int>&)>& visit) {
  const int n = static_cast<int>(items.size());
  std::vector<int> cur;
  bool stop = false;
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (stop) return;
    if (left == 0) {
      if (!visit(cur)) stop = true;
      return;
    }
    for (int i = start; i <= n - left && !stop; ++i) {
      cur.push_back(items[i]);
      rec(i + 1, left - 1);
      cur.pop_back();
    }
  };
  for (int s = 0; s <= std::min(k, n) && !stop; ++s) rec(0, s);
}

std::vector<int> non_terminals(const SpaceCoverInstance& inst) {
  auto mask = inst.terminal_mask();
  std::vector<int> out;
  for (int e = 0; e < inst.g.m(); ++e) {
    if (!mask[e]) out.push_back(e);
  }
  return out;
}

bool primal_covers(const std::vector<Gf2Vector>& cols, const std::vector<int>& f, const std::vector<int>& t) {
  Gf2Eliminator el(cols.empty() ? 0 : cols[0].size());
  for (int e : f) el.insert(cols[e]);
  for (int e : t) {
    if (!el.contains(cols[e])) return false;
  }
  return true;
}

void check_primal_guard(const SpaceCoverInstance& inst, const OracleLimits& lim) {
  inst.validate();
  if (inst.g.m() > lim.primal_max_m || inst.k > lim.primal_max_k) {
    throw SizeGuardError("primal oracle: m or k above guard");
  }
}

}  // namespace

std::optional<PrimalSolution> solve_primal_bruteforce(const SpaceCoverInstance& inst, const OracleLimits& lim) {
  check_primal_guard(inst, lim);
  const auto cols = inst.a().columns();
  std::optional<std::vector<int>> best;
  for_each_subset(non_terminals(inst), inst.k, [&](const std::vector<int>& f) {
    if (!primal_covers(cols, f, inst.terminals)) return true;
    best = f;
    return false;
  });
  if (!best) return std::nullopt;
  auto cert = span_contains(inst.matroid(), *best, inst.terminals);
  if (!cert) throw std::logic_error("primal oracle: certificate missing for a covering set");
  return PrimalSolution{*best, *cert};
}

std::vector<std::vector<int>> minimal_primal_solutions(const SpaceCoverInstance& inst, const OracleLimits& lim) {
  check_primal_guard(inst, lim);
  const auto cols = inst.a().columns();
  std::vector<std::vector<int>> out;
  for_each_subset(non_terminals(inst), inst.k, [&](const std::vector<int>& f) {
    if (!primal_covers(cols, f, inst.terminals)) return true;
    // Span is monotone, so single deletions decide minimality.
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto smaller = f;
      smaller.erase(smaller.begin() + static_cast<long>(i));
      if (primal_covers(cols, smaller, inst.terminals)) return true;
    }
    out.push_back(f);
    return true;
  });
  return out;
}

std::optional<DualSolution> solve_dual_bruteforce(const SpaceCoverInstance& inst, const OracleLimits& lim) {
  inst.validate();
  if (inst.g.m() > lim.dual_max_m || inst.k > lim.dual_max_k) throw SizeGuardError("dual oracle: m or k above guard");
  const int m = inst.g.m();
  const Gf2Matrix a = inst.a();
  Gf2Eliminator rows(m);
  for (std::size_t r = 0; r < a.rows(); ++r) rows.insert(a.row(r));
  const BinaryMatroid mat(a);
  std::optional<DualSolution> best;
  for_each_subset(non_terminals(inst), inst.k, [&](const std::vector<int>& f) {
    DualSpanCertificate cert;
    const int fs = static_cast<int>(f.size());
    for (int w : inst.terminals) {
      bool found = false;
      for (std::uint32_t sub = 0; sub < (1u << fs) && !found; ++sub) {
        std::vector<int> cocycle;
        for (int i = 0; i < fs; ++i) {
          if (sub >> i & 1u) cocycle.push_back(f[i]);
        }
        Gf2Vector chi(m);
        chi.set(w);
        for (int e : cocycle) chi.set(e);
        if (!rows.contains(chi)) continue;
        auto fw = cocycle;
        cocycle.push_back(w);
        std::sort(cocycle.begin(), cocycle.end());
        auto cc = is_cocycle(mat, cocycle);
        if (!cc) throw std::logic_error("dual oracle: row-space member is not a cocycle");
        cert[w] = DualWitness{fw, *cc};
        found = true;
      }
      if (!found) return true;
    }
    best = DualSolution{f, cert};
    return false;
  });
  return best;
}

std::optional<Embedding> pattern_cover_bruteforce(const PatternCoverInstance& inst,
                                                  const std::vector<std::uint8_t>* colors, const OracleLimits& lim) {
  const MultiGraph& h = inst.h;
  const MultiGraph& g = inst.g;
  if (h.n() > lim.pattern_max_h) throw SizeGuardError("pattern oracle: |V(H)| above guard");
  if (colors && static_cast<int>(colors->size()) != g.n()) throw DimensionError("pattern oracle: coloring size");
  std::vector<int> pin(h.n(), -1);
  for (std::size_t i = 0; i < inst.u.size(); ++i) pin[inst.u[i]] = inst.f[i];
  std::vector<int> vmap(h.n(), -1);
  std::vector<char> used(g.n(), 0);
  std::set<int> used_colors;
  std::vector<int> emap(h.m(), -1);
  std::vector<char> edge_used(g.m(), 0);

  auto candidates = [&](int he) {
    std::vector<int> out;
    int a = vmap[h.edge(he).u], b = vmap[h.edge(he).v];
    for (int ge = 0; ge < g.m(); ++ge) {
      const auto& ed = g.edge(ge);
      if (inst.ell_g[ge] != inst.ell_h[he]) continue;
      if ((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) out.push_back(ge);
    }
    return out;
  };
  std::function<bool(int)> assign_edges = [&](int he) -> bool {
    if (he == h.m()) return true;
    for (int ge : candidates(he)) {
      if (edge_used[ge]) continue;
      edge_used[ge] = 1;
      emap[he] = ge;
      if (assign_edges(he + 1)) return true;
      edge_used[ge] = 0;
    }
    emap[he] = -1;
    return false;
  };
  std::function<bool(int)> assign_vertices = [&](int v) -> bool {
    if (v == h.n()) return assign_edges(0);
    for (int x = 0; x < g.n(); ++x) {
      if (used[x] || (pin[v] >= 0 && pin[v] != x)) continue;
      if (colors && used_colors.count((*colors)[x])) continue;
      used[x] = 1;
      vmap[v] = x;
      if (colors) used_colors.insert((*colors)[x]);
      if (assign_vertices(v + 1)) return true;
      if (colors) used_colors.erase((*colors)[x]);
      used[x] = 0;
      vmap[v] = -1;
    }
    return false;
  };
  if (!assign_vertices(0)) return std::nullopt;
  return Embedding{vmap, emap};
}

std::optional<std::vector<int>> eoct_bruteforce(const MultiGraph& g, int k, const OracleLimits& lim) {
  if (g.m() > lim.eoct_max_m) throw SizeGuardError("eoct oracle: m above guard");
  if (k < 0) return std::nullopt;
  std::vector<int> all(g.m());
  for (int e = 0; e < g.m(); ++e) all[e] = e;
  std::optional<std::vector<int>> best;
  for_each_subset(all, k, [&](const std::vector<int>& s) {
    std::vector<char> drop(g.m(), 0);
    for (int e : s) drop[e] = 1;
    MultiGraph rest(g.n());
    for (int e = 0; e < g.m(); ++e) {
      if (!drop[e]) rest.add_edge(g.edge(e).u, g.edge(e).v);
    }
    if (!is_bipartite(rest)) return true;
    best = s;
    return false;
  });
  return best;
}

std::vector<std::vector<char>> preliminary_partitions_bruteforce(const EscInstance& inst, int term,
                                                                 const OracleLimits& lim) {
  const int n = inst.g.n();
  if (n > lim.esc_max_n) throw SizeGuardError("esc oracle: n above guard");
  std::vector<std::vector<char>> out;
  std::vector<char> x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int v = 0; v < n; ++v) x[v] = static_cast<char>(mask >> v & 1u);
    if (is_preliminary(inst, x, term)) out.push_back(x);
  }
  return out;
}

EscAnswerTable annotated_esc_bruteforce(const AnnotatedEscInstance& inst, const OracleLimits& lim) {
  const EscInstance& esc = inst.esc;
  const int n = esc.g.n();
  const int m = esc.g.m();
  if (n > lim.esc_max_n || m > lim.esc_max_m) throw SizeGuardError("esc oracle: n or m above guard");
  const int nt = static_cast<int>(esc.terminals.size());

  // Per terminal: (h, l) -> list of (contribution mask, first side mask).
  struct Option {
    std::uint64_t cont;
    std::vector<char> x;
  };
  std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Option>>> options(nt);
  std::vector<char> x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int v = 0; v < n; ++v) x[v] = static_cast<char>(mask >> v & 1u);
    for (int i = 0; i < nt; ++i) {
      if (!almost_fits(esc, x, i) || !pins_respected(inst, i, x)) continue;
      std::uint64_t cont = 0;
      for (int e : contribution(esc, i, x)) {
        if (e != esc.terminals[i].edge) cont |= std::uint64_t{1} << e;
      }
      auto& list = options[i][{parity_mask(esc, x), boundary_mask(inst.w, x)}];
      auto same = std::find_if(list.begin(), list.end(), [&](const Option& o) { return o.cont == cont; });
      if (same == list.end()) list.push_back({cont, x});
    }
  }

  auto tmask = esc.terminal_edge_mask();
  std::vector<int> free_edges;
  for (int e = 0; e < m; ++e) {
    if (!tmask[e]) free_edges.push_back(e);
  }
  EscAnswerTable table;
  for_each_subset(free_edges, esc.k, [&](const std::vector<int>& f) {
    std::uint64_t fmask = 0;
    for (int e : f) fmask |= std::uint64_t{1} << e;
    // Realizable subkeys per terminal with a witness side.
    std::vector<std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, const std::vector<char>*>>> sub(nt);
    for (int i = 0; i < nt; ++i) {
      for (const auto& [key, list] : options[i]) {
        for (const auto& o : list) {
          if ((o.cont & ~fmask) == 0) {
            sub[i].push_back({key, &o.x});
            break;
          }
        }
      }
      if (sub[i].empty()) return true;
    }
    std::vector<std::size_t> idx(nt, 0);
    while (true) {
      EscKey key;
      EscSolution sol;
      sol.f = f;
      for (int i = 0; i < nt; ++i) {
        key.h.push_back(sub[i][idx[i]].first.first);
        key.l.push_back(sub[i][idx[i]].first.second);
        sol.x.push_back(*sub[i][idx[i]].second);
      }
      table.emplace(std::move(key), std::move(sol));
      int i = 0;
      while (i < nt && ++idx[i] == sub[i].size()) idx[i++] = 0;
      if (i == nt) break;
    }
    return true;
  });
  return table;
}

std::optional<EscSolution> esc_bruteforce(const EscInstance& inst, const OracleLimits& lim) {
  AnnotatedEscInstance ann{inst, {}, {}, {}};
  auto table = annotated_esc_bruteforce(ann, lim);
  EscKey key;
  for (const auto& term : inst.terminals) {
    key.h.push_back(term.b);
    key.l.push_back(0);
  }
  auto it = table.find(key);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

}  // namespace scpm::oracle
