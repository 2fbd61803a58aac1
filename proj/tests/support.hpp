#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "scpm/instance.hpp"
#include "scpm/pattern_cover.hpp"

namespace scpm::testing {

inline MultiGraph path_graph(int n) {
  MultiGraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

inline MultiGraph cycle_graph(int n) {
  MultiGraph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

inline MultiGraph complete_graph(int n) {
  MultiGraph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

// Triangle with edges 0:(0,1) 1:(1,2) 2:(0,2).
inline MultiGraph triangle() { return MultiGraph(3, {{0, 1}, {1, 2}, {0, 2}}); }

inline MultiGraph bowtie() { return MultiGraph(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}}); }

// Two K6 joined by a path of 7 edges (vertices 5..12).
inline MultiGraph barbell() {
  MultiGraph g(18);
  for (int c = 0; c < 2; ++c) {
    for (int u = 0; u < 6; ++u) {
      for (int v = u + 1; v < 6; ++v) g.add_edge((c ? 12 : 0) + u, (c ? 12 : 0) + v);
    }
  }
  for (int v = 5; v < 12; ++v) g.add_edge(v, v + 1);
  return g;
}

inline SpaceCoverInstance make_instance(MultiGraph g, std::vector<int> terminals, int k, Mode mode,
                                        Gf2Matrix p = {}) {
  SpaceCoverInstance inst;
  if (p.rows() == 0) p = Gf2Matrix(g.n(), g.m());
  inst.g = std::move(g);
  inst.p = std::move(p);
  inst.terminals = std::move(terminals);
  inst.k = k;
  inst.mode = mode;
  return inst;
}

// Dual instance around g whose P has every row equal to one vector r.
// Planted: r = cut(S) + terminal + up to k other columns, so the answer is
// often yes; otherwise r is uniform.
inline SpaceCoverInstance planted_dual(const MultiGraph& g, int k, int nt, bool plant, std::mt19937_64& rng) {
  const int n = g.n(), m = g.m();
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> terms(perm.begin(), perm.begin() + nt);
  std::sort(terms.begin(), terms.end());
  Gf2Vector r(m);
  if (plant) {
    std::vector<char> s(n);
    int cnt = 0;
    for (int v = 0; v < n; ++v) {
      s[v] = rng() % 2;
      cnt += s[v];
    }
    if (cnt % 2 == 0) s[0] = !s[0];
    for (int e = 0; e < m; ++e) {
      if (s[g.edge(e).u] != s[g.edge(e).v]) r.flip(e);
    }
    r.flip(terms[0]);
    const int extra = static_cast<int>(rng() % (k + 1));
    for (int j = 0; j < extra; ++j) r.flip(perm[nt + rng() % (m - nt)]);
  } else {
    for (int e = 0; e < m; ++e) {
      if (rng() % 2) r.flip(e);
    }
  }
  Gf2Matrix p(n, m);
  for (int v = 0; v < n; ++v) p.set_row(v, r);
  return make_instance(g, terms, k, Mode::dual, std::move(p));
}

// Random labeled forest H pinned into a random labeled multigraph G. Half the
// time (when H fits) G contains a planted copy of H so yes-instances are
// common.
inline PatternCoverInstance random_pattern_instance(std::mt19937_64& rng, int nh, int ng, int t) {
  PatternCoverInstance pc;
  pc.h = MultiGraph(nh);
  for (int v = 1; v < nh; ++v) {
    if (rng() % 5 == 0) continue;  // leave a forest, not always a tree
    pc.h.add_edge(static_cast<int>(rng() % v), v);
    pc.ell_h.push_back(static_cast<int>(rng() % t));
  }
  pc.g = MultiGraph(ng);
  std::vector<int> place(ng);
  for (int i = 0; i < ng; ++i) place[i] = i;
  std::shuffle(place.begin(), place.end(), rng);
  if (nh <= ng && rng() % 2) {
    for (int e = 0; e < pc.h.m(); ++e) {
      pc.g.add_edge(place[pc.h.edge(e).u], place[pc.h.edge(e).v]);
      pc.ell_g.push_back(pc.ell_h[e]);
    }
  }
  const int extra = ng + static_cast<int>(rng() % ng);
  for (int i = 0; i < extra; ++i) {
    int u = static_cast<int>(rng() % ng), v = static_cast<int>(rng() % ng);
    if (u == v && rng() % 3) v = (v + 1) % ng;
    pc.g.add_edge(u, v);
    pc.ell_g.push_back(static_cast<int>(rng() % t));
  }
  const int pins = std::min<int>(nh, static_cast<int>(rng() % 3));
  for (int i = 0; i < pins; ++i) {
    pc.u.push_back(i);
    pc.f.push_back(rng() % 2 ? place[i] : static_cast<int>(rng() % ng));
  }
  // Images of distinct pinned vertices must differ.
  for (std::size_t i = 1; i < pc.f.size(); ++i) {
    if (pc.f[i] == pc.f[0]) pc.f[i] = (pc.f[0] + 1) % ng;
  }
  return pc;
}

}  // namespace scpm::testing
