#include "scpm/hardness.hpp"

#include <algorithm>
#include <functional>

#include "scpm/error.hpp"

namespace scpm::hardness {

namespace {

std::vector<int> part_of(const McInstance& mc) {
  std::vector<int> part(mc.g.n(), -1);
  for (std::size_t i = 0; i < mc.parts.size(); ++i) {
    for (int v : mc.parts[i]) {
      if (v < 0 || v >= mc.g.n()) throw DimensionError("mc: part vertex out of range");
      if (part[v] >= 0) throw PreconditionError("mc: parts overlap");
      part[v] = static_cast<int>(i);
    }
  }
  for (int p : part) {
    if (p < 0) throw PreconditionError("mc: parts do not cover V(G)");
  }
  return part;
}

}  // namespace

GeneratedInstance from_multicolored_clique(const McInstance& mc) {
  const int k = static_cast<int>(mc.parts.size());
  if (k < 2) throw PreconditionError("mc: need k >= 2");
  auto part = part_of(mc);
  const int n = mc.g.n();
  GeneratedInstance out;
  MultiGraph g(n);
  // Copy of G without intra-part edges; each part becomes independent.
  std::vector<std::pair<int, int>> copy_pairs;  // (i, j) with i < j per copied edge
  for (const auto& ed : mc.g.edges()) {
    if (part[ed.u] == part[ed.v]) {
      ++out.dropped_edges;
      continue;
    }
    g.add_edge(ed.u, ed.v);
    copy_pairs.emplace_back(std::min(part[ed.u], part[ed.v]), std::max(part[ed.u], part[ed.v]));
  }
  const int copied = g.m();
  std::vector<int> hub(k), xs(k);
  for (int i = 0; i < k; ++i) hub[i] = g.add_vertex();
  std::vector<int> spoke_part;
  for (int i = 0; i < k; ++i) {
    auto members = mc.parts[i];
    std::sort(members.begin(), members.end());
    for (int v : members) {
      g.add_edge(hub[i], v);
      spoke_part.push_back(i);
    }
  }
  const int first_hub_edge = g.m();
  std::vector<std::pair<int, int>> hub_pairs;
  for (int s = 0; s < k; ++s) {
    for (int t = s + 1; t < k; ++t) {
      g.add_edge(hub[s], hub[t]);
      hub_pairs.emplace_back(s, t);
    }
  }
  for (int i = 0; i < k; ++i) xs[i] = g.add_vertex();
  std::vector<std::vector<int>> ys(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) ys[i][j] = g.add_vertex();
  }

  const int m = g.m();
  Gf2Matrix p(g.n(), m);
  for (int e = 0; e < copied; ++e) {
    auto [i, j] = copy_pairs[e];
    p.set(ys[i][j], e);
  }
  for (int e = copied; e < first_hub_edge; ++e) p.set(xs[spoke_part[e - copied]], e);
  for (std::size_t h = 0; h < hub_pairs.size(); ++h) {
    auto [s, t] = hub_pairs[h];
    const int e = first_hub_edge + static_cast<int>(h);
    p.set(xs[s], e);
    p.set(xs[t], e);
    p.set(ys[s][t], e);
  }

  out.inst.g = std::move(g);
  out.inst.p = std::move(p);
  for (int e = first_hub_edge; e < m; ++e) out.inst.terminals.push_back(e);
  out.inst.k = k * (k + 1) / 2;
  out.inst.mode = Mode::primal;
  return out;
}

GeneratedInstance from_3dm(const TdmInstance& tdm) {
  if (tdm.q < 1) throw PreconditionError("3dm: need q >= 1");
  const int q = tdm.q;
  for (const auto& tr : tdm.triples) {
    for (int c : tr) {
      if (c < 0 || c >= q) throw DimensionError("3dm: triple coordinate out of range");
    }
  }
  const int p = static_cast<int>(tdm.triples.size());
  // x: [0,q), y: [q,2q), z: [2q,3q), s: [3q,3q+p), then a, b.
  MultiGraph g(3 * q + p + 2);
  for (int r = 0; r < p; ++r) {
    const int s = 3 * q + r;
    g.add_edge(s, tdm.triples[r][0]);
    g.add_edge(s, q + tdm.triples[r][1]);
    g.add_edge(s, 2 * q + tdm.triples[r][2]);
  }
  const int a = 3 * q + p, b = a + 1;
  const int aa = g.add_edge(a, a);
  const int bb = g.add_edge(b, b);
  Gf2Matrix pm(g.n(), g.m());
  for (int i = 0; i < q; ++i) {
    pm.set(i, aa);
    pm.set(q + i, aa);
    pm.set(i, bb);
    pm.set(2 * q + i, bb);
  }
  GeneratedInstance out;
  out.inst.g = std::move(g);
  out.inst.p = std::move(pm);
  out.inst.terminals = {aa, bb};
  out.inst.k = 3 * q;
  out.inst.mode = Mode::primal;
  return out;
}

bool has_multicolored_clique(const McInstance& mc) {
  const int k = static_cast<int>(mc.parts.size());
  part_of(mc);
  const int n = mc.g.n();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& ed : mc.g.edges()) {
    if (ed.u != ed.v) adj[ed.u][ed.v] = adj[ed.v][ed.u] = 1;
  }
  std::vector<int> pick;
  std::function<bool(int)> rec = [&](int i) {
    if (i == k) return true;
    for (int v : mc.parts[i]) {
      bool ok = true;
      for (int u : pick) ok = ok && adj[u][v];
      if (!ok) continue;
      pick.push_back(v);
      if (rec(i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

bool has_3d_matching(const TdmInstance& tdm) {
  const int q = tdm.q;
  std::vector<char> used(3 * q, 0);
  // Cover x coordinates in order.
  std::function<bool(int)> rec = [&](int x) {
    if (x == q) return true;
    for (const auto& tr : tdm.triples) {
      if (tr[0] != x || used[q + tr[1]] || used[2 * q + tr[2]]) continue;
      used[q + tr[1]] = used[2 * q + tr[2]] = 1;
      if (rec(x + 1)) return true;
      used[q + tr[1]] = used[2 * q + tr[2]] = 0;
    }
    return false;
  };
  return rec(0);
}

}  // namespace scpm::hardness
