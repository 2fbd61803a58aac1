#include <algorithm>
#include <map>
#include <optional>
#include <tuple>

#include "scpm/derand.hpp"
#include "scpm/dual_solver.hpp"
#include "scpm/error.hpp"

namespace scpm::dual {

namespace {

void merge_entry(EscAnswerTable& table, const EscKey& key, EscSolution sol) {
  auto it = table.find(key);
  if (it == table.end()) {
    table.emplace(key, std::move(sol));
  } else if (better_solution(sol.f, it->second.f)) {
    it->second = std::move(sol);
  }
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

constexpr int kMaxExhaustiveColoring = 20;

// A sub-instance around one small component D of G - P, solved directly.
struct Piece {
  std::vector<int> d;
  std::vector<std::pair<EscKey, EscSolution>> entries;  // keys and edges in global terms, x over D only
};

bool solve_piece(const AnnotatedEscInstance& ainst, const std::vector<std::vector<char>>& yp, int budget,
                 const std::vector<int>& d, Piece& piece) {
  const EscInstance& esc = ainst.esc;
  const int n = esc.g.n();
  const int nt = static_cast<int>(esc.terminals.size());
  std::vector<char> in_d(n, 0), in_sub(n, 0);
  for (int v : d) in_d[v] = in_sub[v] = 1;
  std::vector<int> sub_edges;
  for (int e = 0; e < esc.g.m(); ++e) {
    const auto& ed = esc.g.edge(e);
    if (!in_d[ed.u] && !in_d[ed.v]) continue;
    sub_edges.push_back(e);
    in_sub[ed.u] = in_sub[ed.v] = 1;
  }
  std::vector<int> verts, local(n, -1);
  for (int v = 0; v < n; ++v) {
    if (in_sub[v]) {
      local[v] = static_cast<int>(verts.size());
      verts.push_back(v);
    }
  }
  std::vector<int> elocal(esc.g.m(), -1);
  AnnotatedEscInstance sub;
  sub.esc.g = MultiGraph(static_cast<int>(verts.size()));
  for (int e : sub_edges) elocal[e] = sub.esc.g.add_edge(local[esc.g.edge(e).u], local[esc.g.edge(e).v]);
  sub.esc.k = budget;
  sub.esc.t = esc.t;
  for (int v : verts) sub.esc.vclass.push_back(esc.vclass[v]);
  std::vector<int> wpos;
  for (std::size_t j = 0; j < ainst.w.size(); ++j) {
    if (in_d[ainst.w[j]]) {
      sub.w.push_back(local[ainst.w[j]]);
      wpos.push_back(static_cast<int>(j));
    }
  }
  sub.w1.resize(nt);
  sub.w2.resize(nt);
  std::vector<std::uint32_t> outside(nt, 0);
  for (int i = 0; i < nt; ++i) {
    const auto& term = esc.terminals[i];
    EscTerminal st;
    st.edge = term.edge >= 0 ? elocal[term.edge] : -1;
    st.b = term.b;
    for (int e : sub_edges) st.f.push_back(term.f[e]);
    sub.esc.terminals.push_back(std::move(st));
    for (int v : verts) {
      if (in_d[v]) continue;
      (yp[i][v] ? sub.w1[i] : sub.w2[i]).push_back(local[v]);
      if (yp[i][v]) outside[i] ^= 1u << esc.vclass[v];
    }
    if (!ainst.w1.empty()) {
      for (int v : ainst.w1[i]) {
        if (in_d[v]) sub.w1[i].push_back(local[v]);
      }
    }
    if (!ainst.w2.empty()) {
      for (int v : ainst.w2[i]) {
        if (in_d[v]) sub.w2[i].push_back(local[v]);
      }
    }
  }
  auto table = solve_small(sub);
  if (table.empty()) return false;
  piece.d = d;
  piece.entries.clear();
  for (const auto& [key, sol] : table) {
    EscKey gk;
    EscSolution gs;
    for (int i = 0; i < nt; ++i) {
      gk.h.push_back(key.h[i] ^ outside[i]);
      std::uint32_t l = 0;
      for (std::size_t j = 0; j < wpos.size(); ++j) {
        if (key.l[i] >> j & 1u) l |= 1u << wpos[j];
      }
      gk.l.push_back(l);
      std::vector<char> x(n, 0);
      for (int v : d) x[v] = sol.x[i][local[v]];
      gs.x.push_back(std::move(x));
    }
    for (int e : sol.f) gs.f.push_back(sub_edges[e]);
    piece.entries.emplace_back(std::move(gk), std::move(gs));
  }
  return true;
}

// Piece answers depend only on (budget, D) once the alignment is fixed.
using PieceCache = std::map<std::pair<int, std::vector<int>>, std::optional<Piece>>;

void colored_round(const AnnotatedEscInstance& ainst, const RecursParams& prm, const std::vector<std::vector<char>>& yp,
                   const std::vector<std::uint8_t>& color, PieceCache& cache, EscAnswerTable& out) {
  const EscInstance& esc = ainst.esc;
  const int n = esc.g.n();
  const int nt = static_cast<int>(esc.terminals.size());
  std::vector<char> keep(esc.g.m(), 0);
  for (int e = 0; e < esc.g.m(); ++e) {
    const auto& ed = esc.g.edge(e);
    keep[e] = !color[ed.u] && !color[ed.v];
  }
  const long long cap = prm.q > (1LL << 40) / std::max(nt, 1) ? (1LL << 40) : prm.q * nt;
  std::vector<std::vector<int>> small;
  std::vector<char> fixed(n, 1);
  for (auto& comp : connected_components(esc.g, keep)) {
    if (color[comp.front()] || static_cast<long long>(comp.size()) > cap) continue;
    for (int v : comp) fixed[v] = 0;
    small.push_back(std::move(comp));
  }

  auto tmask = esc.terminal_edge_mask();
  std::vector<int> f_fix;
  EscKey base;
  for (int i = 0; i < nt; ++i) {
    const auto& x = yp[i];
    const int own = esc.terminals[i].edge;
    for (int e = 0; e < esc.g.m(); ++e) {
      const auto& ed = esc.g.edge(e);
      if (!fixed[ed.u] || !fixed[ed.v]) continue;
      bool c = contributes(esc, e, i, x);
      if (tmask[e]) {
        if (c != (e == own)) return;
      } else if (c) {
        f_fix.push_back(e);
      }
    }
    if (!ainst.w1.empty()) {
      for (int v : ainst.w1[i]) {
        if (fixed[v] && !x[v]) return;
      }
    }
    if (!ainst.w2.empty()) {
      for (int v : ainst.w2[i]) {
        if (fixed[v] && x[v]) return;
      }
    }
    std::uint32_t h = 0, l = 0;
    for (int v = 0; v < n; ++v) {
      if (fixed[v] && x[v]) h ^= 1u << esc.vclass[v];
    }
    for (std::size_t j = 0; j < ainst.w.size(); ++j) {
      if (fixed[ainst.w[j]] && x[ainst.w[j]]) l |= 1u << j;
    }
    base.h.push_back(h);
    base.l.push_back(l);
  }
  std::sort(f_fix.begin(), f_fix.end());
  f_fix.erase(std::unique(f_fix.begin(), f_fix.end()), f_fix.end());
  const int budget = esc.k - static_cast<int>(f_fix.size());
  if (budget < 0) return;

  std::vector<const Piece*> pieces(small.size());
  for (std::size_t c = 0; c < small.size(); ++c) {
    auto [it, fresh] = cache.try_emplace({budget, small[c]});
    if (fresh) {
      Piece piece;
      if (solve_piece(ainst, yp, budget, small[c], piece)) it->second = std::move(piece);
    }
    if (!it->second) return;
    pieces[c] = &*it->second;
  }

  EscSolution start;
  start.f = f_fix;
  for (int i = 0; i < nt; ++i) {
    std::vector<char> x(n, 0);
    for (int v = 0; v < n; ++v) x[v] = fixed[v] ? yp[i][v] : 0;
    start.x.push_back(std::move(x));
  }
  std::map<EscKey, EscSolution> states;
  states.emplace(base, std::move(start));
  for (const Piece* piece : pieces) {
    std::map<EscKey, EscSolution> next;
    for (const auto& [key, part] : states) {
      for (const auto& [pk, ps] : piece->entries) {
        if (part.f.size() + ps.f.size() > static_cast<std::size_t>(esc.k)) continue;
        EscKey nk = key;
        for (int i = 0; i < nt; ++i) {
          nk.h[i] ^= pk.h[i];
          nk.l[i] |= pk.l[i];
        }
        auto f = sorted_union(part.f, ps.f);
        auto it = next.find(nk);
        if (it != next.end() && !better_solution(f, it->second.f)) continue;
        EscSolution sol{std::move(f), part.x};
        for (int i = 0; i < nt; ++i) {
          for (int v : piece->d) sol.x[i][v] = ps.x[i][v];
        }
        next[nk] = std::move(sol);
      }
    }
    states = std::move(next);
    if (states.empty()) return;
  }
  for (auto& [key, sol] : states) {
    if (verify_table_entry(ainst, key, sol)) merge_entry(out, key, std::move(sol));
  }
}

EscAnswerTable unbreakable_case(const AnnotatedEscInstance& ainst, const RecursParams& prm, DualStats* stats) {
  const EscInstance& esc = ainst.esc;
  const int n = esc.g.n();
  const int nt = static_cast<int>(esc.terminals.size());
  if (nt == 0) return solve_small(ainst);
  std::vector<std::vector<char>> y(nt);
  for (int i = 0; i < nt; ++i) {
    auto yi = preliminary_partition(esc, i);
    if (!yi) return {};
    y[i] = std::move(*yi);
  }
  // Two preliminary partitions differ (up to swapping sides) on pieces of at
  // most q vertices each, at most 2(k+1)q vertices in total, bounded by at
  // most 2(k+1) edges.
  const long long c = 2LL * (esc.k + 1);
  const long long span = prm.q > (1LL << 40) ? (1LL << 40) : c * (prm.q + 1);
  const long long kk = span >= n ? n : std::min<long long>(span * nt, n);
  const long long pp = 2LL * (esc.k + 1) * nt;

  std::vector<std::vector<std::uint8_t>> all;
  const std::vector<std::vector<std::uint8_t>>* colorings = nullptr;
  if (kk < n) {
    colorings = &cached_universal_set(n, static_cast<int>(kk), static_cast<int>(std::min(pp, kk))).functions;
  }
  // All 2^n colorings when that is no larger than the family.
  if (!colorings || (n <= kMaxExhaustiveColoring && (std::size_t{1} << n) <= colorings->size())) {
    if (n > kMaxExhaustiveColoring) throw SizeGuardError("unbreakable case: exhaustive coloring too large");
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::uint8_t> c(n);
      for (int v = 0; v < n; ++v) c[v] = mask >> v & 1u;
      all.push_back(std::move(c));
    }
    colorings = &all;
  }

  EscAnswerTable out;
  std::vector<std::vector<char>> yp(nt);
  for (std::uint32_t al = 0; al < (1u << nt); ++al) {
    for (int i = 0; i < nt; ++i) {
      yp[i] = y[i];
      if (al >> i & 1u) {
        for (auto& c : yp[i]) c = !c;
      }
    }
    PieceCache cache;
    for (const auto& color : *colorings) {
      if (stats) ++stats->colorings;
      colored_round(ainst, prm, yp, color, cache, out);
    }
  }
  return out;
}

EscAnswerTable breakable_case(const AnnotatedEscInstance& ainst, const EdgeSeparation& sep, const RecursParams& prm,
                              DualStats* stats, int depth) {
  const EscInstance& esc = ainst.esc;
  const int n = esc.g.n();
  auto [q, boundary] = choose_side(ainst, sep);
  auto side = side_instance(ainst, q, boundary);
  auto q_table = recurs(side.inst, prm, stats, depth + 1);
  if (q_table.empty()) return {};

  auto fallback = [&]() {
    if (stats) ++stats->fallbacks;
    return solve_small(ainst);
  };
  auto rep = build_replacement(ainst, q, side, q_table);
  if (rep.star.esc.g.n() >= n) return fallback();
  auto star_table = recurs(rep.star, prm, stats, depth + 1);
  EscAnswerTable out;
  for (const auto& [key, sol] : star_table) {
    auto lifted = lift_replacement(rep, sol, n);
    if (!verify_table_entry(ainst, key, lifted)) return fallback();
    out.emplace(key, std::move(lifted));
  }
  return out;
}

}  // namespace

SideChoice choose_side(const AnnotatedEscInstance& ainst, const EdgeSeparation& sep) {
  const EscInstance& esc = ainst.esc;
  const int n = esc.g.n();
  std::vector<char> in_x(n, 0);
  for (int v : sep.x) in_x[v] = 1;
  int wx = 0;
  for (int v : ainst.w) wx += in_x[v];
  const int wy = static_cast<int>(ainst.w.size()) - wx;
  // Fewer boundary vertices; on a tie the larger side, which has more to compress.
  bool pick_x = wx != wy ? wx < wy : sep.x.size() >= sep.y.size();
  SideChoice out;
  out.q = pick_x ? sep.x : sep.y;
  std::sort(out.q.begin(), out.q.end());
  std::vector<char> in_q(n, 0);
  for (int v : out.q) in_q[v] = 1;
  for (int e : sep.cross) {
    const auto& ed = esc.g.edge(e);
    out.boundary.push_back(in_q[ed.u] ? ed.u : ed.v);
  }
  for (int v : ainst.w) {
    if (in_q[v]) out.boundary.push_back(v);
  }
  std::sort(out.boundary.begin(), out.boundary.end());
  out.boundary.erase(std::unique(out.boundary.begin(), out.boundary.end()), out.boundary.end());
  return out;
}

SideInstance side_instance(const AnnotatedEscInstance& ainst, const std::vector<int>& side,
                           const std::vector<int>& boundary) {
  const EscInstance& esc = ainst.esc;
  SideInstance out;
  std::vector<int> vmap;
  out.inst.esc.g = induced_subgraph(esc.g, side, &vmap, &out.edges);
  out.vertices = side;
  out.inst.esc.k = esc.k;
  out.inst.esc.t = esc.t;
  for (int v : side) out.inst.esc.vclass.push_back(esc.vclass[v]);
  std::vector<int> elocal(esc.g.m(), -1);
  for (std::size_t j = 0; j < out.edges.size(); ++j) elocal[out.edges[j]] = static_cast<int>(j);
  const int nt = static_cast<int>(esc.terminals.size());
  for (const auto& term : esc.terminals) {
    EscTerminal st;
    st.edge = term.edge >= 0 ? elocal[term.edge] : -1;
    st.b = term.b;
    for (int e : out.edges) st.f.push_back(term.f[e]);
    out.inst.esc.terminals.push_back(std::move(st));
  }
  for (int v : boundary) {
    if (vmap[v] < 0) throw PreconditionError("side_instance: boundary vertex outside the side");
    out.inst.w.push_back(vmap[v]);
  }
  if (!ainst.w1.empty() || !ainst.w2.empty()) {
    out.inst.w1.resize(nt);
    out.inst.w2.resize(nt);
    for (int i = 0; i < nt; ++i) {
      if (!ainst.w1.empty()) {
        for (int v : ainst.w1[i]) {
          if (vmap[v] >= 0) out.inst.w1[i].push_back(vmap[v]);
        }
      }
      if (!ainst.w2.empty()) {
        for (int v : ainst.w2[i]) {
          if (vmap[v] >= 0) out.inst.w2[i].push_back(vmap[v]);
        }
      }
    }
  }
  return out;
}

Replacement build_replacement(const AnnotatedEscInstance& ainst, const std::vector<int>& q, const SideInstance& side,
                              const EscAnswerTable& q_table) {
  const EscInstance& esc = ainst.esc;
  const int n = esc.g.n();
  const int nt = static_cast<int>(esc.terminals.size());
  std::vector<char> in_q(n, 0), star(n, 0);
  for (int v : q) in_q[v] = 1;
  // V*: endpoints of stored F, Q-endpoints of terminals, boundary of the side.
  for (const auto& [key, sol] : q_table) {
    for (int e : sol.f) {
      const auto& ed = side.inst.esc.g.edge(e);
      star[side.vertices[ed.u]] = star[side.vertices[ed.v]] = 1;
    }
  }
  for (const auto& term : esc.terminals) {
    if (term.edge < 0) continue;
    const auto& ed = esc.g.edge(term.edge);
    if (in_q[ed.u]) star[ed.u] = 1;
    if (in_q[ed.v]) star[ed.v] = 1;
  }
  for (int v : side.inst.w) star[side.vertices[v]] = 1;

  std::vector<int> local(n, -1);
  for (std::size_t j = 0; j < side.vertices.size(); ++j) local[side.vertices[j]] = static_cast<int>(j);
  auto pin = [&](const std::vector<std::vector<int>>& pins, int i, int v) {
    return !pins.empty() && std::find(pins[i].begin(), pins[i].end(), v) != pins[i].end();
  };
  std::map<std::vector<char>, std::vector<int>> groups;
  for (int v : q) {
    if (star[v]) continue;
    std::vector<char> sig;
    sig.push_back(static_cast<char>(esc.vclass[v]));
    for (int i = 0; i < nt; ++i) sig.push_back(static_cast<char>(pin(ainst.w1, i, v) + 2 * pin(ainst.w2, i, v)));
    for (const auto& [key, sol] : q_table) {
      for (int i = 0; i < nt; ++i) sig.push_back(sol.x[i][local[v]]);
    }
    groups[sig].push_back(v);
  }

  // Each class keeps an odd number of members merged into its lowest vertex.
  std::vector<int> rep_of(n, -1), cls(n, -1);
  int cid = 0;
  for (auto& [sig, members] : groups) {
    std::sort(members.begin(), members.end());
    if (members.size() % 2 == 0) members.pop_back();
    for (int v : members) {
      rep_of[v] = members.front();
      cls[v] = cid;
    }
    ++cid;
  }

  Replacement out;
  out.image.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (rep_of[v] >= 0 && rep_of[v] != v) continue;
    out.image[v] = static_cast<int>(out.origin.size());
    out.origin.push_back(v);
  }
  out.members.resize(out.origin.size());
  for (int v = 0; v < n; ++v) {
    if (rep_of[v] >= 0) out.image[v] = out.image[rep_of[v]];
    out.members[out.image[v]].push_back(v);
  }

  auto tmask = esc.terminal_edge_mask();
  const int cap = esc.k + 1;
  std::map<std::tuple<int, int, std::vector<std::uint8_t>>, int> count;
  EscInstance& s = out.star.esc;
  s.g = MultiGraph(static_cast<int>(out.origin.size()));
  std::vector<int> elocal(esc.g.m(), -1);
  for (int e = 0; e < esc.g.m(); ++e) {
    const auto& ed = esc.g.edge(e);
    if (cls[ed.u] >= 0 && cls[ed.u] == cls[ed.v]) continue;
    int a = out.image[ed.u], b = out.image[ed.v];
    if (!tmask[e]) {
      std::vector<std::uint8_t> sig;
      for (const auto& term : esc.terminals) sig.push_back(term.f[e]);
      if (++count[{std::min(a, b), std::max(a, b), std::move(sig)}] > cap) continue;
    }
    elocal[e] = s.g.add_edge(a, b);
    out.edge_origin.push_back(e);
  }
  s.k = esc.k;
  s.t = esc.t;
  for (int v : out.origin) s.vclass.push_back(esc.vclass[v]);
  for (const auto& term : esc.terminals) {
    EscTerminal st;
    st.edge = term.edge >= 0 ? elocal[term.edge] : -1;
    st.b = term.b;
    for (int e : out.edge_origin) st.f.push_back(term.f[e]);
    s.terminals.push_back(std::move(st));
  }
  for (int v : ainst.w) out.star.w.push_back(out.image[v]);
  auto map_pins = [&](const std::vector<std::vector<int>>& pins, std::vector<std::vector<int>>& dst) {
    if (pins.empty()) return;
    dst.resize(nt);
    for (int i = 0; i < nt; ++i) {
      for (int v : pins[i]) dst[i].push_back(out.image[v]);
      std::sort(dst[i].begin(), dst[i].end());
      dst[i].erase(std::unique(dst[i].begin(), dst[i].end()), dst[i].end());
    }
  };
  map_pins(ainst.w1, out.star.w1);
  map_pins(ainst.w2, out.star.w2);
  return out;
}

EscSolution lift_replacement(const Replacement& rep, const EscSolution& sol, int n) {
  EscSolution out;
  for (int e : sol.f) out.f.push_back(rep.edge_origin[e]);
  std::sort(out.f.begin(), out.f.end());
  for (const auto& xs : sol.x) {
    std::vector<char> x(n, 0);
    for (int v = 0; v < n; ++v) x[v] = xs[rep.image[v]];
    out.x.push_back(std::move(x));
  }
  return out;
}

EscAnswerTable recurs(const AnnotatedEscInstance& inst, const RecursParams& prm, DualStats* stats, int depth) {
  if (stats) stats->max_depth = std::max(stats->max_depth, depth);
  const int n = inst.esc.g.n();
  if (n <= prm.s) {
    if (stats) ++stats->small;
    return solve_small(inst);
  }
  auto sep = good_edge_separation(inst.esc.g, prm.q, prm.p);
  if (!sep) {
    if (stats) ++stats->unbreakable;
    return unbreakable_case(inst, prm, stats);
  }
  if (stats) ++stats->breakable;
  return breakable_case(inst, *sep, prm, stats, depth);
}

}  // namespace scpm::dual
