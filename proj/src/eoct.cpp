#include "scpm/eoct.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>

#include "scpm/error.hpp"

namespace scpm::eoct {

namespace {

// Union-find carrying the parity of each vertex relative to its root.
struct ParityDsu {
  std::vector<int> parent;
  std::vector<int> parity;

  explicit ParityDsu(int n) : parent(n), parity(n, 0) { std::iota(parent.begin(), parent.end(), 0); }

  std::pair<int, int> find(int x) {
    int par = 0;
    int r = x;
    while (parent[r] != r) {
      par ^= parity[r];
      r = parent[r];
    }
    // Path compression with parity fix-up.
    int acc = par;
    while (parent[x] != x) {
      int next = parent[x];
      int old = parity[x];
      parent[x] = r;
      parity[x] = acc;
      acc ^= old;
      x = next;
    }
    return {r, par};
  }

  // Require parity(a) ^ parity(b) == want; false on contradiction.
  bool unite(int a, int b, int want) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == want;
    parent[ra] = rb;
    parity[ra] = pa ^ pb ^ want;
    return true;
  }
};

class UnitFlow {
 public:
  explicit UnitFlow(int n) : head_(n, -1) {}

  void add_undirected(int u, int v, int cap) {
    add_arc(u, v, cap);
    add_arc(v, u, cap);
  }
  void add_directed(int u, int v, int cap) {
    add_arc(u, v, cap);
    add_arc(v, u, 0);
  }

  // Augments until `limit` is exceeded; returns the flow value (<= limit + 1).
  int run(int s, int t, int limit) {
    int flow = 0;
    std::vector<int> via(head_.size());
    while (flow <= limit) {
      std::fill(via.begin(), via.end(), -1);
      std::queue<int> q;
      q.push(s);
      via[s] = -2;
      while (!q.empty() && via[t] == -1) {
        int x = q.front();
        q.pop();
        for (int a = head_[x]; a >= 0; a = arcs_[a].next) {
          if (arcs_[a].cap > 0 && via[arcs_[a].to] == -1) {
            via[arcs_[a].to] = a;
            q.push(arcs_[a].to);
          }
        }
      }
      if (via[t] == -1) break;
      for (int x = t; x != s; x = arcs_[via[x] ^ 1].to) {
        --arcs_[via[x]].cap;
        ++arcs_[via[x] ^ 1].cap;
      }
      ++flow;
    }
    return flow;
  }

  std::vector<char> reachable(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int a = head_[x]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    int cap;
    int next;
  };
  void add_arc(int u, int v, int cap) {
    arcs_.push_back({v, cap, head_[u]});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
  }
  std::vector<int> head_;
  std::vector<Arc> arcs_;
};

constexpr int kInf = 1 << 28;

// Given a solution `s` of size budget + 1 for the edge set `active`, find
// one of size <= budget.
std::optional<std::vector<int>> compress(const MultiGraph& g, const std::vector<int>& active,
                                         const std::vector<int>& s, int budget) {
  const int n = g.n();
  std::vector<char> in_s(g.m(), 0);
  for (int e : s) in_s[e] = 1;
  MultiGraph h(n);
  std::vector<int> h_edge;
  for (int e : active) {
    if (!in_s[e]) {
      h.add_edge(g.edge(e).u, g.edge(e).v);
      h_edge.push_back(e);
    }
  }
  std::vector<int> col;
  is_bipartite(h, &col);
  const int ns = static_cast<int>(s.size());
  for (std::uint32_t keep = 0; keep < (1u << ns); ++keep) {
    const int deleted = ns - std::popcount(keep);
    const int left = budget - deleted;
    if (left < 0) continue;
    ParityDsu dsu(n);
    bool consistent = true;
    std::vector<int> ends;
    for (int i = 0; i < ns && consistent; ++i) {
      if (!(keep >> i & 1u)) continue;
      const auto& ed = g.edge(s[i]);
      consistent = dsu.unite(ed.u, ed.v, col[ed.u] == col[ed.v] ? 1 : 0);
      ends.push_back(ed.u);
      ends.push_back(ed.v);
    }
    if (!consistent) continue;
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    std::vector<int> roots;
    for (int v : ends) roots.push_back(dsu.find(v).first);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    const int groups = static_cast<int>(roots.size());
    // The all-flipped and all-kept assignments are symmetric; fix group 0.
    const std::uint32_t assignments = groups == 0 ? 1u : (1u << (groups - 1));
    for (std::uint32_t a = 0; a < assignments; ++a) {
      UnitFlow flow(n + 2);
      const int src = n, snk = n + 1;
      for (int i = 0; i < h.m(); ++i) flow.add_undirected(h.edge(i).u, h.edge(i).v, 1);
      for (int v : ends) {
        auto [r, par] = dsu.find(v);
        int gi = static_cast<int>(std::lower_bound(roots.begin(), roots.end(), r) - roots.begin());
        int root_flip = gi == 0 ? 0 : static_cast<int>(a >> (gi - 1) & 1u);
        if (root_flip ^ par) {
          flow.add_directed(src, v, kInf);
        } else {
          flow.add_directed(v, snk, kInf);
        }
      }
      int value = flow.run(src, snk, left);
      if (value > left) continue;
      auto reach = flow.reachable(src);
      std::vector<int> out;
      for (int i = 0; i < ns; ++i) {
        if (!(keep >> i & 1u)) out.push_back(s[i]);
      }
      for (int i = 0; i < h.m(); ++i) {
        if (reach[h.edge(i).u] != reach[h.edge(i).v]) out.push_back(h_edge[i]);
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<EoctResult> solve(const MultiGraph& g, int k) {
  if (k > kMaxBudget) throw SizeGuardError("eoct::solve: budget above 12");
  if (k < 0) return std::nullopt;
  std::vector<int> loops;
  for (int e = 0; e < g.m(); ++e) {
    if (g.edge(e).is_loop()) loops.push_back(e);
  }
  if (static_cast<int>(loops.size()) > k) return std::nullopt;
  const int budget = k - static_cast<int>(loops.size());
  std::vector<int> s;
  std::vector<int> active;
  ParityDsu dsu(g.n());
  for (int e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (ed.is_loop()) continue;
    active.push_back(e);
    if (dsu.unite(ed.u, ed.v, 1)) continue;
    s.push_back(e);
    if (static_cast<int>(s.size()) <= budget) continue;
    auto smaller = compress(g, active, s, budget);
    if (!smaller) return std::nullopt;
    s = std::move(*smaller);
    std::vector<char> in_s(g.m(), 0);
    for (int x : s) in_s[x] = 1;
    dsu = ParityDsu(g.n());
    for (int x : active) {
      if (!in_s[x]) dsu.unite(g.edge(x).u, g.edge(x).v, 1);
    }
  }
  EoctResult res;
  res.s = s;
  res.s.insert(res.s.end(), loops.begin(), loops.end());
  std::sort(res.s.begin(), res.s.end());
  res.side.assign(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) res.side[v] = dsu.find(v).second;
  return res;
}

int minimize(const MultiGraph& g) {
  for (int k = 0; k <= kMaxBudget; ++k) {
    if (solve(g, k)) return k;
  }
  throw SizeGuardError("eoct::minimize: optimum above 12");
}

}  // namespace scpm::eoct
