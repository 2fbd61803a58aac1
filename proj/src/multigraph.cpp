#include "scpm/multigraph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "scpm/error.hpp"

namespace scpm {

MultiGraph::MultiGraph(int n, std::vector<Edge> edges) : n_(n) {
  for (const auto& e : edges) add_edge(e.u, e.v);
}

int MultiGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw DimensionError("edge endpoint out of range");
  edges_.push_back({u, v});
  return m() - 1;
}

std::vector<std::vector<std::pair<int, int>>> MultiGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(n_);
  for (int e = 0; e < m(); ++e) {
    const auto& ed = edges_[e];
    adj[ed.u].push_back({ed.v, e});
    if (!ed.is_loop()) adj[ed.v].push_back({ed.u, e});
  }
  return adj;
}

std::vector<int> MultiGraph::degrees() const {
  std::vector<int> d(n_, 0);
  for (const auto& e : edges_) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

std::string MultiGraph::to_text() const {
  std::ostringstream out;
  out << n_ << '\n';
  for (const auto& e : edges_) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

MultiGraph MultiGraph::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::optional<MultiGraph> g;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (!g) {
      int n = -1;
      if (!(ls >> n) || n < 0) throw ParseError(lineno, "expected vertex count");
      g.emplace(n);
      continue;
    }
    int u = 0, v = 0;
    if (!(ls >> u >> v)) throw ParseError(lineno, "expected 'u v'");
    if (u < 0 || v < 0 || u >= g->n() || v >= g->n()) throw ParseError(lineno, "endpoint out of range");
    g->add_edge(u, v);
  }
  if (!g) throw ParseError(lineno, "empty edge list");
  return *g;
}

MultiGraph induced_subgraph(const MultiGraph& g, const std::vector<int>& vertices, std::vector<int>* vertex_map,
                            std::vector<int>* edge_map) {
  std::vector<int> vmap(g.n(), -1);
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) vmap[vertices[i]] = i;
  MultiGraph h(static_cast<int>(vertices.size()));
  std::vector<int> emap;
  for (int e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (vmap[ed.u] < 0 || vmap[ed.v] < 0) continue;
    h.add_edge(vmap[ed.u], vmap[ed.v]);
    emap.push_back(e);
  }
  if (vertex_map) *vertex_map = std::move(vmap);
  if (edge_map) *edge_map = std::move(emap);
  return h;
}

MultiGraph edge_subgraph(const MultiGraph& g, const std::vector<int>& edge_ids, std::vector<int>* vertex_of) {
  std::vector<int> vmap(g.n(), -1);
  std::vector<int> back;
  auto id = [&](int v) {
    if (vmap[v] < 0) {
      vmap[v] = static_cast<int>(back.size());
      back.push_back(v);
    }
    return vmap[v];
  };
  std::vector<Edge> es;
  for (int e : edge_ids) {
    int a = id(g.edge(e).u);
    int b = id(g.edge(e).v);
    es.push_back({a, b});
  }
  if (vertex_of) *vertex_of = back;
  return MultiGraph(static_cast<int>(back.size()), es);
}

Gf2Matrix incidence_matrix(const MultiGraph& g) {
  Gf2Matrix m(g.n(), g.m());
  for (int e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (ed.is_loop()) continue;
    m.set(ed.u, e);
    m.set(ed.v, e);
  }
  return m;
}

std::vector<std::vector<int>> connected_components(const MultiGraph& g, const std::vector<char>& keep) {
  std::vector<int> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e = 0; e < g.m(); ++e) {
    if (!keep.empty() && !keep[e]) continue;
    int a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> slot(g.n(), -1);
  std::vector<std::vector<int>> comps;
  for (int v = 0; v < g.n(); ++v) {
    int r = find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[slot[r]].push_back(v);
  }
  return comps;
}

std::vector<std::vector<int>> connected_components(const MultiGraph& g) { return connected_components(g, {}); }

bool is_connected(const MultiGraph& g) { return connected_components(g).size() <= 1; }

bool is_bipartite(const MultiGraph& g, std::vector<int>* side) {
  std::vector<int> col(g.n(), -1);
  auto adj = g.adjacency();
  for (int s = 0; s < g.n(); ++s) {
    if (col[s] >= 0) continue;
    col[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto [y, e] : adj[x]) {
        if (col[y] < 0) {
          col[y] = col[x] ^ 1;
          q.push(y);
        } else if (col[y] == col[x]) {
          return false;
        }
      }
    }
  }
  if (side) *side = std::move(col);
  return true;
}

long long count_simple_cycles(const MultiGraph& g) {
  const int m = g.m();
  if (m > 16) throw SizeGuardError("count_simple_cycles: more than 16 edges");
  long long count = 0;
  std::vector<int> deg(g.n());
  std::vector<int> parent(g.n());
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::fill(deg.begin(), deg.end(), 0);
    for (int e = 0; e < m; ++e) {
      if (mask >> e & 1u) {
        ++deg[g.edge(e).u];
        ++deg[g.edge(e).v];
      }
    }
    bool ok = true;
    for (int v = 0; v < g.n() && ok; ++v) ok = deg[v] == 0 || deg[v] == 2;
    if (!ok) continue;
    // Every touched vertex has degree 2; it is one cycle iff connected.
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int comps = 0;
    for (int v = 0; v < g.n(); ++v) comps += deg[v] > 0;
    for (int e = 0; e < m; ++e) {
      if (!(mask >> e & 1u)) continue;
      int a = find(g.edge(e).u), b = find(g.edge(e).v);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    if (comps == 1) ++count;
  }
  return count;
}

std::vector<int> spanning_forest(const MultiGraph& g) {
  std::vector<int> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> out;
  for (int e = 0; e < g.m(); ++e) {
    int a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a == b) continue;
    parent[a] = b;
    out.push_back(e);
  }
  return out;
}

namespace {

bool side_ok(const MultiGraph& g, const std::vector<char>& in_x, long long q, long long p, EdgeSeparation* out) {
  const int n = g.n();
  long long nx = std::count(in_x.begin(), in_x.end(), 1);
  if (nx <= q || n - nx <= q) return false;
  std::vector<int> cross;
  for (int e = 0; e < g.m(); ++e) {
    if (in_x[g.edge(e).u] != in_x[g.edge(e).v]) {
      cross.push_back(e);
      if (static_cast<long long>(cross.size()) > p) return false;
    }
  }
  std::vector<char> keep(g.m(), 0);
  for (int e = 0; e < g.m(); ++e) keep[e] = in_x[g.edge(e).u] == in_x[g.edge(e).v];
  auto comps = connected_components(g, keep);
  if (comps.size() != 2) return false;
  out->x.clear();
  out->y.clear();
  for (int v = 0; v < n; ++v) (in_x[v] ? out->x : out->y).push_back(v);
  out->cross = std::move(cross);
  return true;
}

std::optional<EdgeSeparation> exact_separation(const MultiGraph& g, long long q, long long p) {
  const int n = g.n();
  std::vector<std::uint32_t> nbr(n, 0);
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    nbr[e.u] |= 1u << e.v;
    nbr[e.v] |= 1u << e.u;
  }
  auto connected = [&](std::uint32_t set) {
    std::uint32_t seen = set & (~set + 1), frontier = seen;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= nbr[std::countr_zero(f)];
      next &= set & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == set;
  };
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
  for (const auto& e : g.edges()) {
    if (!e.is_loop()) ends.push_back({1u << e.u, 1u << e.v});
  }
  // Vertex 0 always sits in X so each partition is visited once.
  for (std::uint32_t rest = 0; rest < (1u << (n - 1)); ++rest) {
    std::uint32_t x = (rest << 1) | 1u;
    long long nx = std::popcount(x);
    if (nx <= q || n - nx <= q) continue;
    long long cross = 0;
    for (auto [a, b] : ends) {
      cross += ((x & a) != 0) != ((x & b) != 0);
      if (cross > p) break;
    }
    if (cross > p) continue;
    if (!connected(x) || !connected(full & ~x)) continue;
    EdgeSeparation sep;
    for (int v = 0; v < n; ++v) ((x >> v & 1u) ? sep.x : sep.y).push_back(v);
    for (int e = 0; e < g.m(); ++e) {
      if (((x >> g.edge(e).u) & 1u) != ((x >> g.edge(e).v) & 1u)) sep.cross.push_back(e);
    }
    return sep;
  }
  return std::nullopt;
}

// Above the exact range: BFS-grown balls and random contractions, each
// candidate verified against the definition.
std::optional<EdgeSeparation> heuristic_separation(const MultiGraph& g, long long q, long long p) {
  const int n = g.n();
  auto adj = g.adjacency();
  EdgeSeparation sep;
  std::vector<char> in_x(n);
  for (int s = 0; s < n; ++s) {
    std::fill(in_x.begin(), in_x.end(), 0);
    std::vector<char> seen(n, 0);
    std::queue<int> bfs;
    bfs.push(s);
    seen[s] = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      in_x[v] = 1;
      if (side_ok(g, in_x, q, p, &sep)) return sep;
      for (auto [w, e] : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          bfs.push(w);
        }
      }
    }
  }
  std::mt19937_64 rng(0x5eed);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<int> order(g.m());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    int groups = n;
    for (int e : order) {
      if (groups <= 2) break;
      int a = find(g.edge(e).u), b = find(g.edge(e).v);
      if (a == b) continue;
      parent[a] = b;
      --groups;
    }
    int r0 = find(0);
    for (int v = 0; v < n; ++v) in_x[v] = find(v) == r0;
    if (side_ok(g, in_x, q, p, &sep)) return sep;
  }
  return std::nullopt;
}

}  // namespace

std::optional<EdgeSeparation> good_edge_separation(const MultiGraph& g, long long q, long long p) {
  if (!is_connected(g)) throw PreconditionError("good_edge_separation: graph is disconnected");
  const int n = g.n();
  if (q < 0) q = 0;
  if (q >= n || 2 * (q + 1) > n) return std::nullopt;
  if (n <= 20) return exact_separation(g, q, p);
  return heuristic_separation(g, q, p);
}

}  // namespace scpm
