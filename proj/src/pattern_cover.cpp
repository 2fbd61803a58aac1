#include "scpm/pattern_cover.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <random>
#include <unordered_map>

#include "scpm/derand.hpp"
#include "scpm/error.hpp"

namespace scpm::pattern_cover {

namespace {

struct Child {
  int vertex;
  int label;
  int edge;
};

// Rooted forest layout plus per-(vertex,label) neighbor lists of G.
struct Prepared {
  int kh = 0;
  int ng = 0;
  std::vector<int> pin;                    // H vertex -> pinned G vertex or -1
  std::vector<std::vector<Child>> children;
  std::vector<std::vector<int>> size_from;  // size_from[v][j]: v plus children j..end
  std::vector<int> roots;
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> nbr;  // (x,label) -> (y, lowest edge)
};

Prepared prepare(const PatternCoverInstance& inst) {
  const MultiGraph& h = inst.h;
  Prepared pr;
  pr.kh = h.n();
  pr.ng = inst.g.n();
  if (static_cast<int>(inst.ell_h.size()) != h.m() || static_cast<int>(inst.ell_g.size()) != inst.g.m()) {
    throw DimensionError("pattern cover: label vector sizes differ from edge counts");
  }
  if (inst.u.size() != inst.f.size()) throw DimensionError("pattern cover: pinned map size mismatch");
  if (static_cast<int>(spanning_forest(h).size()) != h.m()) throw PreconditionError("pattern cover: H is not a forest");
  pr.pin.assign(pr.kh, -1);
  std::vector<char> used(pr.ng, 0);
  for (std::size_t i = 0; i < inst.u.size(); ++i) {
    int v = inst.u[i], x = inst.f[i];
    if (v < 0 || v >= pr.kh || x < 0 || x >= pr.ng) throw DimensionError("pattern cover: pin out of range");
    if (used[x] || pr.pin[v] >= 0) throw PreconditionError("pattern cover: pinning map is not injective");
    used[x] = 1;
    pr.pin[v] = x;
  }
  auto adj = h.adjacency();
  for (auto& a : adj) std::sort(a.begin(), a.end());
  pr.children.assign(pr.kh, {});
  std::vector<int> parent(pr.kh, -2);
  std::vector<int> order;
  for (int r = 0; r < pr.kh; ++r) {
    if (parent[r] != -2) continue;
    parent[r] = -1;
    pr.roots.push_back(r);
    std::vector<int> stack{r};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto [w, e] : adj[v]) {
        if (parent[w] != -2) continue;
        parent[w] = v;
        pr.children[v].push_back({w, inst.ell_h[e], e});
        stack.push_back(w);
      }
    }
  }
  for (auto& ch : pr.children) {
    std::sort(ch.begin(), ch.end(), [](const Child& a, const Child& b) { return a.vertex < b.vertex; });
  }
  pr.size_from.assign(pr.kh, {});
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    auto& sf = pr.size_from[v];
    sf.assign(pr.children[v].size() + 1, 1);
    for (int j = static_cast<int>(pr.children[v].size()) - 1; j >= 0; --j) {
      sf[j] = sf[j + 1] + pr.size_from[pr.children[v][j].vertex][0];
    }
  }
  const MultiGraph& g = inst.g;
  for (int e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (ed.is_loop()) continue;
    for (int side = 0; side < 2; ++side) {
      int x = side ? ed.v : ed.u, y = side ? ed.u : ed.v;
      auto& list = pr.nbr[{x, inst.ell_g[e]}];
      auto pos = std::find_if(list.begin(), list.end(), [&](auto& p) { return p.first == y; });
      if (pos == list.end()) list.push_back({y, e});
    }
  }
  return pr;
}

class ColorfulDp {
 public:
  ColorfulDp(const Prepared& pr, const std::vector<std::uint8_t>& c) : pr_(pr), c_(c) {}

  std::optional<Embedding> run() {
    const int kh = pr_.kh;
    const std::uint32_t full = kh == 32 ? ~0u : (1u << kh) - 1;
    const int trees = static_cast<int>(pr_.roots.size());
    // N[i][C]: the first i trees embed colorfully using exactly colors C.
    std::vector<std::unordered_map<std::uint32_t, std::pair<std::uint32_t, int>>> choice(trees + 1);
    std::vector<std::vector<std::uint32_t>> reach(trees + 1);
    reach[0].push_back(0);
    for (int i = 0; i < trees; ++i) {
      int root = pr_.roots[i];
      int need = pr_.size_from[root][0];
      for (std::uint32_t prev : reach[i]) {
        std::uint32_t rest = full & ~prev;
        for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
          if (std::popcount(sub) == need && !choice[i + 1].count(prev | sub)) {
            for (int x = 0; x < pr_.ng; ++x) {
              if (m(root, x, 0, sub)) {
                choice[i + 1][prev | sub] = {prev, x};
                reach[i + 1].push_back(prev | sub);
                break;
              }
            }
          }
          if (sub == 0) break;
        }
      }
    }
    if (!choice[trees].count(full) && !(trees == 0)) return std::nullopt;
    Embedding emb;
    emb.vertex_map.assign(kh, -1);
    emb.edge_map.assign(0, -1);
    edge_image_.clear();
    std::uint32_t cur = full;
    for (int i = trees; i > 0; --i) {
      auto [prev, x] = choice[i].at(cur);
      rebuild(pr_.roots[i - 1], x, 0, cur & ~prev, emb);
      cur = prev;
    }
    return emb;
  }

  const std::map<int, int>& edge_image() const { return edge_image_; }

 private:
  bool m(int v, int x, int j, std::uint32_t set) {
    if (pr_.pin[v] >= 0 && x != pr_.pin[v]) return false;
    if (!(set >> c_[x] & 1u)) return false;
    if (std::popcount(set) != pr_.size_from[v][j]) return false;
    if (j == static_cast<int>(pr_.children[v].size())) return true;
    std::uint64_t key = ((((static_cast<std::uint64_t>(v) * pr_.ng + x) << 6) | static_cast<std::uint64_t>(j)) << 32) | set;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second.first;
    auto res = step(v, x, j, set);
    memo_[key] = res;
    return res.first;
  }

  // Returns success plus the chosen (y, child color set) packed.
  std::pair<bool, std::pair<int, std::uint32_t>> step(int v, int x, int j, std::uint32_t set) {
    const Child& ch = pr_.children[v][j];
    auto it = pr_.nbr.find({x, ch.label});
    if (it == pr_.nbr.end()) return {false, {-1, 0}};
    const int need = pr_.size_from[ch.vertex][0];
    const std::uint32_t rest = set & ~(1u << c_[x]);
    for (auto [y, e] : it->second) {
      if (pr_.pin[ch.vertex] >= 0 && y != pr_.pin[ch.vertex]) continue;
      if (!(rest >> c_[y] & 1u)) continue;
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        if (std::popcount(sub) == need && (sub >> c_[y] & 1u) && m(ch.vertex, y, 0, sub) &&
            m(v, x, j + 1, set & ~sub)) {
          return {true, {y, sub}};
        }
        if (sub == 0) break;
      }
    }
    return {false, {-1, 0}};
  }

  void rebuild(int v, int x, int j, std::uint32_t set, Embedding& emb) {
    emb.vertex_map[v] = x;
    if (j == static_cast<int>(pr_.children[v].size())) return;
    std::uint64_t key = ((((static_cast<std::uint64_t>(v) * pr_.ng + x) << 6) | static_cast<std::uint64_t>(j)) << 32) | set;
    auto [y, sub] = memo_.at(key).second;
    const Child& ch = pr_.children[v][j];
    for (auto [yy, e] : pr_.nbr.at({x, ch.label})) {
      if (yy == y) {
        edge_image_[ch.edge] = e;
        break;
      }
    }
    rebuild(ch.vertex, y, 0, sub, emb);
    rebuild(v, x, j + 1, set & ~sub, emb);
  }

  const Prepared& pr_;
  const std::vector<std::uint8_t>& c_;
  std::unordered_map<std::uint64_t, std::pair<bool, std::pair<int, std::uint32_t>>> memo_;
  std::map<int, int> edge_image_;
};

std::optional<Embedding> run_coloring(const PatternCoverInstance& inst, const Prepared& pr,
                                      const std::vector<std::uint8_t>& c) {
  ColorfulDp dp(pr, c);
  auto emb = dp.run();
  if (!emb) return std::nullopt;
  emb->edge_map.assign(inst.h.m(), -1);
  for (auto [he, ge] : dp.edge_image()) emb->edge_map[he] = ge;
  return emb;
}

// All vertices pinned: the embedding is forced up to the choice of edges.
std::optional<Embedding> solve_pinned(const PatternCoverInstance& inst, const Prepared& pr) {
  Embedding emb;
  emb.vertex_map = pr.pin;
  emb.edge_map.assign(inst.h.m(), -1);
  for (int e = 0; e < inst.h.m(); ++e) {
    int x = pr.pin[inst.h.edge(e).u], y = pr.pin[inst.h.edge(e).v];
    auto it = pr.nbr.find({x, inst.ell_h[e]});
    if (it == pr.nbr.end()) return std::nullopt;
    for (auto [yy, ge] : it->second) {
      if (yy == y) emb.edge_map[e] = ge;
    }
    if (emb.edge_map[e] < 0) return std::nullopt;
  }
  return emb;
}

}  // namespace

bool verify(const PatternCoverInstance& inst, const Embedding& emb) {
  const MultiGraph& h = inst.h;
  const MultiGraph& g = inst.g;
  if (static_cast<int>(emb.vertex_map.size()) != h.n() || static_cast<int>(emb.edge_map.size()) != h.m()) {
    return false;
  }
  std::vector<char> used(g.n(), 0);
  for (int x : emb.vertex_map) {
    if (x < 0 || x >= g.n() || used[x]) return false;
    used[x] = 1;
  }
  std::vector<char> edge_used(g.m(), 0);
  for (int e = 0; e < h.m(); ++e) {
    int ge = emb.edge_map[e];
    if (ge < 0 || ge >= g.m() || edge_used[ge]) return false;
    edge_used[ge] = 1;
    int a = emb.vertex_map[h.edge(e).u], b = emb.vertex_map[h.edge(e).v];
    const auto& ged = g.edge(ge);
    if (!((ged.u == a && ged.v == b) || (ged.u == b && ged.v == a))) return false;
    if (inst.ell_h[e] != inst.ell_g[ge]) return false;
  }
  for (std::size_t i = 0; i < inst.u.size(); ++i) {
    if (emb.vertex_map[inst.u[i]] != inst.f[i]) return false;
  }
  return true;
}

std::optional<Embedding> colorful_solve(const PatternCoverInstance& inst, const std::vector<std::uint8_t>& c,
                                        int cap) {
  if (inst.h.n() > cap || inst.h.n() > 31) throw SizeGuardError("pattern cover: |V(H)| above cap");
  if (static_cast<int>(c.size()) != inst.g.n()) throw DimensionError("coloring length differs from |V(G)|");
  for (auto col : c) {
    if (col >= std::max(1, inst.h.n())) throw DimensionError("color out of range");
  }
  Prepared pr = prepare(inst);
  if (pr.kh == 0) return Embedding{};
  auto emb = run_coloring(inst, pr, c);
  if (emb && !verify(inst, *emb)) throw std::logic_error("colorful_solve produced an invalid embedding");
  return emb;
}

std::optional<Embedding> solve(const PatternCoverInstance& inst, const PatternCoverOptions& opt,
                               PatternCoverStats* stats) {
  const int kh = inst.h.n();
  if (kh > opt.cap || kh > 31) throw SizeGuardError("pattern cover: |V(H)| above cap");
  Prepared pr = prepare(inst);
  if (kh == 0) return Embedding{};
  if (kh > inst.g.n()) return std::nullopt;
  if (std::count(pr.pin.begin(), pr.pin.end(), -1) == 0) {
    auto emb = solve_pinned(inst, pr);
    if (emb && !verify(inst, *emb)) throw std::logic_error("pattern cover produced an invalid embedding");
    return emb;
  }
  std::vector<std::vector<std::uint8_t>> random_colorings;
  const std::vector<std::vector<std::uint8_t>>* colorings = nullptr;
  if (opt.kind == PatternCoverOptions::Kind::deterministic) {
    colorings = &cached_hash_family(inst.g.n(), kh).functions;
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> col(0, kh - 1);
    random_colorings.assign(opt.trials, std::vector<std::uint8_t>(inst.g.n()));
    for (auto& c : random_colorings) {
      for (auto& x : c) x = static_cast<std::uint8_t>(col(rng));
    }
    colorings = &random_colorings;
  }
  const long long total = static_cast<long long>(colorings->size());
  std::optional<Embedding> found;
  long long tried = 0;
  if (opt.policy == ExecPolicy::serial) {
    for (long long i = 0; i < total && !found; ++i) {
      ++tried;
      found = run_coloring(inst, pr, (*colorings)[i]);
    }
  } else {
    // Lowest successful coloring index wins, as in the serial loop.
    std::atomic<long long> best{total};
    std::vector<std::optional<Embedding>> slot(total);
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : tried)
    for (long long i = 0; i < total; ++i) {
      if (i > best.load()) continue;
      ++tried;
      slot[i] = run_coloring(inst, pr, (*colorings)[i]);
      if (slot[i]) {
        long long cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
    if (best.load() < total) found = slot[best.load()];
    tried = std::min(tried, total);
  }
  if (stats) stats->colorings += tried;
  if (found && !verify(inst, *found)) throw std::logic_error("pattern cover produced an invalid embedding");
  return found;
}

}  // namespace scpm::pattern_cover
