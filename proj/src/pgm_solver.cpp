#include "scpm/pgm_solver.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>

#include "scpm/error.hpp"

namespace scpm::pgm {

ReducedTerminals reduce_terminals(const SpaceCoverInstance& inst) {
  inst.validate();
  const Gf2Matrix a = inst.a();
  Gf2Eliminator el(a.rows());
  ReducedTerminals out;
  for (int w : inst.terminals) {
    if (el.insert(a.column(w))) out.terminals.push_back(w);
  }
  out.immediate_no = static_cast<int>(out.terminals.size()) > inst.k;
  return out;
}

EdgeTypes edge_types(const Gf2Matrix& p) {
  auto dc = distinct_columns(p);
  EdgeTypes out;
  out.t = static_cast<int>(dc.classes.size());
  out.type = dc.class_of;
  out.classes = dc.classes;
  return out;
}

std::vector<int> terminal_target_vertices(const Gf2Vector& w, std::uint32_t hw,
                                          const std::vector<Gf2Vector>& classes) {
  Gf2Vector acc = w;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (hw >> i & 1u) acc ^= classes[i];
  }
  std::vector<int> out;
  for (auto v : acc.support()) out.push_back(static_cast<int>(v));
  return out;
}

namespace {

// Colour refinement; returns a stable colour per vertex.
std::vector<int> refine(const MultiGraph& h, const std::vector<int>& vertices) {
  std::map<int, int> local;
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  const int n = static_cast<int>(vertices.size());
  std::vector<std::vector<int>> nbrs(n);
  std::vector<int> loops(n, 0);
  for (const auto& e : h.edges()) {
    auto iu = local.find(e.u);
    if (iu == local.end()) continue;
    int a = iu->second, b = local.at(e.v);
    if (a == b) {
      ++loops[a];
    } else {
      nbrs[a].push_back(b);
      nbrs[b].push_back(a);
    }
  }
  std::vector<int> color(n);
  for (int i = 0; i < n; ++i) color[i] = loops[i] * 1000 + static_cast<int>(nbrs[i].size());
  for (int round = 0; round < n; ++round) {
    std::map<std::pair<int, std::vector<int>>, int> sig;
    std::vector<std::pair<int, std::vector<int>>> keys(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> around;
      for (int j : nbrs[i]) around.push_back(color[j]);
      std::sort(around.begin(), around.end());
      keys[i] = {color[i], around};
      sig.emplace(keys[i], 0);
    }
    int next = 0;
    for (auto& kv : sig) kv.second = next++;
    std::vector<int> updated(n);
    for (int i = 0; i < n; ++i) updated[i] = sig.at(keys[i]);
    bool same = std::set<int>(updated.begin(), updated.end()).size() == std::set<int>(color.begin(), color.end()).size();
    color = updated;
    if (same) break;
  }
  return color;
}

// Minimum edge encoding of one component over orderings compatible with the
// refined colours.
std::vector<int> component_form(const MultiGraph& h, const std::vector<int>& comp) {
  const int n = static_cast<int>(comp.size());
  auto color = refine(h, comp);
  std::map<int, int> local;
  for (int i = 0; i < n; ++i) local[comp[i]] = i;
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : h.edges()) {
    auto iu = local.find(e.u);
    if (iu != local.end()) edges.push_back({iu->second, local.at(e.v)});
  }
  std::map<int, std::vector<int>> cells;
  for (int i = 0; i < n; ++i) cells[color[i]].push_back(i);
  std::vector<std::vector<int>> cell_list;
  std::vector<int> cell_colors;
  for (auto& [c, members] : cells) {
    cell_list.push_back(members);
    cell_colors.push_back(c);
  }
  std::vector<int> pos(n, -1);
  std::vector<int> best;
  bool have = false;
  // Enumerate all orderings cell by cell.
  std::vector<std::vector<int>> perm = cell_list;
  std::function<void(std::size_t, int)> rec = [&](std::size_t ci, int offset) {
    if (ci == perm.size()) {
      std::vector<std::pair<int, int>> enc;
      for (auto [a, b] : edges) enc.push_back({std::min(pos[a], pos[b]), std::max(pos[a], pos[b])});
      std::sort(enc.begin(), enc.end());
      std::vector<int> flat;
      for (auto [a, b] : enc) {
        flat.push_back(a);
        flat.push_back(b);
      }
      if (!have || flat < best) {
        best = flat;
        have = true;
      }
      return;
    }
    auto& cell = perm[ci];
    std::sort(cell.begin(), cell.end());
    do {
      for (std::size_t j = 0; j < cell.size(); ++j) pos[cell[j]] = offset + static_cast<int>(j);
      rec(ci + 1, offset + static_cast<int>(cell.size()));
    } while (std::next_permutation(cell.begin(), cell.end()));
  };
  rec(0, 0);
  std::vector<int> out{n, static_cast<int>(edges.size())};
  out.insert(out.end(), cell_colors.begin(), cell_colors.end());
  for (auto& cell : cell_list) out.push_back(static_cast<int>(cell.size()));
  out.push_back(-1);
  out.insert(out.end(), best.begin(), best.end());
  return out;
}

}  // namespace

std::vector<int> canonical_form(const MultiGraph& h) {
  std::vector<std::vector<int>> parts;
  for (const auto& comp : connected_components(h)) parts.push_back(component_form(h, comp));
  std::sort(parts.begin(), parts.end());
  std::vector<int> out;
  for (auto& p : parts) {
    out.push_back(-2);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

namespace {

int multiplicity(const MultiGraph& h, int u, int v) {
  int c = 0;
  for (const auto& e : h.edges()) {
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) ++c;
  }
  return c;
}

std::vector<MultiGraph> build_backbones(int k, int t) {
  const long long cycle_cap = t >= 62 ? (1ll << 62) : (1ll << t);
  std::vector<MultiGraph> out;
  std::vector<MultiGraph> level{MultiGraph(0)};
  for (int e = 1; e <= k; ++e) {
    std::map<std::vector<int>, MultiGraph> next;
    for (const auto& g : level) {
      const int n = g.n();
      std::vector<std::pair<int, int>> adds;
      for (int u = 0; u < n; ++u) {
        for (int v = u; v < n; ++v) adds.push_back({u, v});
        adds.push_back({u, n});
      }
      adds.push_back({n, n});
      adds.push_back({n, n + 1});
      for (auto [u, v] : adds) {
        MultiGraph h = g;
        while (h.n() <= std::max(u, v)) h.add_vertex();
        h.add_edge(u, v);
        if (multiplicity(h, u, v) > t) continue;
        if (count_simple_cycles(h) > cycle_cap) continue;
        auto form = canonical_form(h);
        next.emplace(std::move(form), std::move(h));
      }
    }
    level.clear();
    for (auto& [form, h] : next) {
      out.push_back(h);
      level.push_back(h);
    }
  }
  return out;
}

std::uint32_t odd_mask(const MultiGraph& h, std::uint32_t sub) {
  std::uint32_t odd = 0;
  for (int e = 0; e < h.m(); ++e) {
    if (!(sub >> e & 1u)) continue;
    const auto& ed = h.edge(e);
    if (ed.is_loop()) continue;
    odd ^= 1u << ed.u;
    odd ^= 1u << ed.v;
  }
  return odd;
}

std::uint32_t type_parity(const std::vector<int>& label, std::uint32_t sub) {
  std::uint32_t par = 0;
  for (std::size_t e = 0; e < label.size(); ++e) {
    if (sub >> e & 1u) par ^= 1u << label[e];
  }
  return par;
}

struct Prepared {
  const SpaceCoverInstance* inst = nullptr;
  Gf2Matrix a;
  std::vector<Gf2Vector> cols;
  ReducedTerminals red;
  EdgeTypes types;
  std::vector<int> usable;                          // representatives of distinct nonzero non-terminal columns
  std::map<std::tuple<int, int, int>, int> by_pair;  // (min, max, type) -> usable edge
  std::vector<int> usable_types;
  std::map<std::pair<int, std::uint32_t>, std::vector<int>> target_cache;

  const std::vector<int>& target(int w, std::uint32_t par) {
    auto key = std::make_pair(w, par);
    auto it = target_cache.find(key);
    if (it != target_cache.end()) return it->second;
    return target_cache[key] = terminal_target_vertices(cols[w], par, types.classes);
  }
};

Prepared prepare(const SpaceCoverInstance& inst) {
  Prepared pr;
  pr.inst = &inst;
  pr.a = inst.a();
  pr.cols = pr.a.columns();
  pr.red = reduce_terminals(inst);
  pr.types = edge_types(inst.p);
  auto tmask = inst.terminal_mask();
  std::set<Gf2Vector> seen;
  std::set<int> tys;
  for (int e = 0; e < inst.g.m(); ++e) {
    if (tmask[e] || pr.cols[e].is_zero() || !seen.insert(pr.cols[e]).second) continue;
    pr.usable.push_back(e);
    const auto& ed = inst.g.edge(e);
    pr.by_pair[{std::min(ed.u, ed.v), std::max(ed.u, ed.v), pr.types.type[e]}] = e;
    if (!ed.is_loop()) tys.insert(pr.types.type[e]);
  }
  pr.usable_types.assign(tys.begin(), tys.end());
  return pr;
}

struct Option {
  std::uint32_t sub;
  std::uint32_t odd;
  std::uint32_t parity;
};

class Enumerator {
 public:
  Enumerator(Prepared& pr, const std::function<bool(const PatternGuess&)>& emit, PgmStats* stats)
      : pr_(pr), emit_(emit), stats_(stats) {}

  // Returns false once emit asked to stop.
  bool run_backbone(const MultiGraph& h) {
    h_ = &h;
    const int n = pr_.inst->g.n();
    if (h.n() > n || h.n() > 31 || h.m() > 31) return true;
    forest_ = spanning_forest(h);
    std::sort(forest_.begin(), forest_.end());
    extra_.clear();
    for (int e = 0; e < h.m(); ++e) {
      if (!std::binary_search(forest_.begin(), forest_.end(), e)) extra_.push_back(e);
    }
    f_.assign(h.n(), -1);
    f_edge_.assign(h.m(), -1);
    g_used_.assign(n, 0);
    e_used_.assign(pr_.inst->g.m(), 0);
    label_.assign(h.m(), 0);
    return assign_extra(0);
  }

 private:
  bool assign_extra(std::size_t i) {
    if (i == extra_.size()) return assign_labels(0);
    const int he = extra_[i];
    const auto& hed = h_->edge(he);
    for (int ge : pr_.usable) {
      if (e_used_[ge]) continue;
      const auto& ged = pr_.inst->g.edge(ge);
      if (ged.is_loop() != hed.is_loop()) continue;
      for (int orient = 0; orient < (ged.is_loop() ? 1 : 2); ++orient) {
        int x = orient ? ged.v : ged.u, y = orient ? ged.u : ged.v;
        std::vector<int> newly;
        bool ok = true;
        for (auto [hv, gv] : {std::pair{hed.u, x}, std::pair{hed.v, y}}) {
          if (f_[hv] == gv) continue;
          if (f_[hv] >= 0 || g_used_[gv]) {
            ok = false;
            break;
          }
          f_[hv] = gv;
          g_used_[gv] = 1;
          newly.push_back(hv);
        }
        if (ok) {
          e_used_[ge] = 1;
          f_edge_[he] = ge;
          label_[he] = pr_.types.type[ge];
          bool go = assign_extra(i + 1);
          e_used_[ge] = 0;
          f_edge_[he] = -1;
          if (!go) {
            undo(newly);
            return false;
          }
        }
        undo(newly);
      }
    }
    return true;
  }

  void undo(const std::vector<int>& newly) {
    for (int hv : newly) {
      g_used_[f_[hv]] = 0;
      f_[hv] = -1;
    }
  }

  bool assign_labels(std::size_t i) {
    if (i == forest_.size()) return with_labels();
    for (int ty : pr_.usable_types) {
      label_[forest_[i]] = ty;
      if (!assign_labels(i + 1)) return false;
    }
    return true;
  }

  bool with_labels() {
    const auto& terms = pr_.red.terminals;
    const int mh = h_->m();
    options_.assign(terms.size(), {});
    for (std::size_t wi = 0; wi < terms.size(); ++wi) {
      std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
      for (std::uint32_t sub = 0; sub < (1u << mh); ++sub) {
        std::uint32_t odd = odd_mask(*h_, sub);
        std::uint32_t par = type_parity(label_, sub);
        const auto& tgt = pr_.target(terms[wi], par);
        if (std::popcount(odd) != static_cast<int>(tgt.size())) continue;
        bool ok = true;
        for (int v = 0; v < h_->n() && ok; ++v) {
          if (f_[v] < 0) continue;
          bool in_t = std::binary_search(tgt.begin(), tgt.end(), f_[v]);
          ok = in_t == static_cast<bool>(odd >> v & 1u);
        }
        if (!ok || !seen.insert({odd, par}).second) continue;
        options_[wi].push_back({sub, odd, par});
      }
      if (options_[wi].empty()) return true;
    }
    fstar_seen_.clear();
    choice_.assign(terms.size(), 0);
    return choose_options(0);
  }

  bool choose_options(std::size_t wi) {
    if (wi == options_.size()) return with_choice();
    for (std::size_t c = 0; c < options_[wi].size(); ++c) {
      choice_[wi] = c;
      if (!choose_options(wi + 1)) return false;
    }
    return true;
  }

  bool with_choice() {
    const auto& terms = pr_.red.terminals;
    const int nh = h_->n();
    std::map<std::uint32_t, std::vector<int>> h_class, g_class;
    for (int v = 0; v < nh; ++v) {
      if (f_[v] >= 0) continue;
      std::uint32_t sig = 0;
      for (std::size_t wi = 0; wi < terms.size(); ++wi) {
        if (options_[wi][choice_[wi]].odd >> v & 1u) sig |= 1u << wi;
      }
      if (sig) h_class[sig].push_back(v);
    }
    std::map<int, std::uint32_t> gsig;
    for (std::size_t wi = 0; wi < terms.size(); ++wi) {
      const auto& opt = options_[wi][choice_[wi]];
      for (int x : pr_.target(terms[wi], opt.parity)) gsig[x] |= 1u << wi;
    }
    for (auto [x, sig] : gsig) {
      if (!g_used_[x]) g_class[sig].push_back(x);
    }
    if (h_class.size() != g_class.size()) return true;
    for (auto& [sig, hv] : h_class) {
      auto it = g_class.find(sig);
      if (it == g_class.end() || it->second.size() != hv.size()) return true;
    }
    classes_.clear();
    for (auto& [sig, hv] : h_class) classes_.push_back({hv, g_class.at(sig)});
    fstar_ = f_;
    return assign_classes(0);
  }

  bool assign_classes(std::size_t ci) {
    if (ci == classes_.size()) {
      if (!fstar_seen_.insert(fstar_).second) return true;
      return emit_guess();
    }
    auto& [hv, gv] = classes_[ci];
    std::vector<int> perm = gv;
    std::sort(perm.begin(), perm.end());
    do {
      for (std::size_t j = 0; j < hv.size(); ++j) fstar_[hv[j]] = perm[j];
      if (!assign_classes(ci + 1)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int v : hv) fstar_[v] = -1;
    return true;
  }

  bool emit_guess() {
    const auto& g = pr_.inst->g;
    std::vector<int> f_edge = f_edge_;
    std::vector<char> excluded(g.m(), 0);
    for (int he : extra_) excluded[f_edge[he]] = 1;
    std::vector<int> hprime_edges;
    for (int he : forest_) {
      const auto& ed = h_->edge(he);
      int x = fstar_[ed.u], y = fstar_[ed.v];
      if (x < 0 || y < 0) {
        hprime_edges.push_back(he);
        continue;
      }
      auto it = pr_.by_pair.find({std::min(x, y), std::max(x, y), label_[he]});
      if (it == pr_.by_pair.end() || excluded[it->second]) return true;
      f_edge[he] = it->second;
      excluded[it->second] = 1;
    }
    PatternGuess guess;
    auto& pc = guess.pc;
    pc.g = MultiGraph(g.n());
    for (int ge : pr_.usable) {
      if (excluded[ge] || g.edge(ge).is_loop()) continue;
      pc.g.add_edge(g.edge(ge).u, g.edge(ge).v);
      pc.ell_g.push_back(pr_.types.type[ge]);
      guess.g_edge.push_back(ge);
    }
    pc.h = MultiGraph(h_->n());
    for (int he : hprime_edges) {
      pc.h.add_edge(h_->edge(he).u, h_->edge(he).v);
      pc.ell_h.push_back(label_[he]);
    }
    for (int v = 0; v < h_->n(); ++v) {
      if (fstar_[v] >= 0) {
        pc.u.push_back(v);
        pc.f.push_back(fstar_[v]);
      }
    }
    auto& ctx = guess.ctx;
    ctx.h = *h_;
    ctx.forest = forest_;
    ctx.extra = extra_;
    ctx.label = label_;
    ctx.f_edge = f_edge;
    ctx.fstar = fstar_;
    ctx.terminals = pr_.red.terminals;
    for (std::size_t wi = 0; wi < options_.size(); ++wi) {
      const auto& opt = options_[wi][choice_[wi]];
      ctx.parity.push_back(opt.parity);
      std::vector<int> ew;
      for (int e = 0; e < h_->m(); ++e) {
        if (opt.sub >> e & 1u) ew.push_back(e);
      }
      ctx.e_w.push_back(ew);
    }
    if (stats_) ++stats_->guesses;
    return emit_(guess);
  }

  Prepared& pr_;
  const std::function<bool(const PatternGuess&)>& emit_;
  PgmStats* stats_;
  const MultiGraph* h_ = nullptr;
  std::vector<int> forest_, extra_;
  std::vector<int> f_, f_edge_, label_, fstar_;
  std::vector<char> g_used_, e_used_;
  std::vector<std::vector<Option>> options_;
  std::vector<std::size_t> choice_;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> classes_;
  std::set<std::vector<int>> fstar_seen_;
};

bool prefilter(const Prepared& pr) {
  Gf2Eliminator el(pr.a.rows());
  for (int e : pr.usable) el.insert(pr.cols[e]);
  for (int w : pr.red.terminals) {
    if (!el.contains(pr.cols[w])) return false;
  }
  return true;
}

void enumerate(Prepared& pr, int cap_k, const std::function<bool(const PatternGuess&)>& emit, PgmStats* stats) {
  const auto& inst = *pr.inst;
  if (pr.red.immediate_no || pr.red.terminals.empty() || !prefilter(pr)) return;
  const int k = std::min<int>(inst.k, static_cast<int>(pr.usable.size()));
  if (k > cap_k) throw SizeGuardError("pgm: k above cap");
  if (pr.types.t > 31) throw SizeGuardError("pgm: more than 31 edge types");
  Enumerator en(pr, emit, stats);
  for (const auto& h : enumerate_backbones(k, pr.types.t)) {
    if (stats) ++stats->backbones;
    if (!en.run_backbone(h)) return;
  }
}

}  // namespace

const std::vector<MultiGraph>& enumerate_backbones(int k, int t) {
  if (k > 8) throw SizeGuardError("enumerate_backbones: k above 8");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<MultiGraph>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(k, t);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_backbones(k, t)).first;
  return it->second;
}

bool interesting_check(const GuessContext& ctx, const SpaceCoverInstance& inst) {
  const auto& h = ctx.h;
  const auto& g = inst.g;
  const auto types = edge_types(inst.p);
  const auto cols = inst.a().columns();
  auto tmask = inst.terminal_mask();
  if (static_cast<int>(ctx.fstar.size()) != h.n() || static_cast<int>(ctx.label.size()) != h.m()) return false;
  std::set<int> images;
  for (int he = 0; he < h.m(); ++he) {
    int ge = ctx.f_edge[he];
    const auto& hed = h.edge(he);
    bool inside = ctx.fstar[hed.u] >= 0 && ctx.fstar[hed.v] >= 0;
    if (ge < 0) {
      if (inside) return false;
      continue;
    }
    if (tmask[ge] || !images.insert(ge).second || types.type[ge] != ctx.label[he]) return false;
    const auto& ged = g.edge(ge);
    int x = ctx.fstar[hed.u], y = ctx.fstar[hed.v];
    if (!((ged.u == x && ged.v == y) || (ged.u == y && ged.v == x))) return false;
  }
  if (ctx.parity.size() != ctx.terminals.size()) return false;
  for (std::size_t wi = 0; wi < ctx.terminals.size(); ++wi) {
    auto tgt = terminal_target_vertices(cols[ctx.terminals[wi]], ctx.parity[wi], types.classes);
    bool found = false;
    for (std::uint32_t sub = 0; sub < (1u << h.m()) && !found; ++sub) {
      if (type_parity(ctx.label, sub) != ctx.parity[wi]) continue;
      std::uint32_t odd = odd_mask(h, sub);
      std::vector<int> img;
      bool ok = true;
      for (int v = 0; v < h.n() && ok; ++v) {
        if (!(odd >> v & 1u)) continue;
        if (ctx.fstar[v] < 0) ok = false;
        else img.push_back(ctx.fstar[v]);
      }
      std::sort(img.begin(), img.end());
      found = ok && img == tgt;
    }
    if (!found) return false;
  }
  return true;
}

void build_pattern_instances(const SpaceCoverInstance& inst, const std::function<bool(const PatternGuess&)>& emit) {
  Prepared pr = prepare(inst);
  enumerate(pr, 8, emit, nullptr);
}

std::optional<PrimalSolution> solve(const SpaceCoverInstance& inst, const PgmOptions& opt, PgmStats* stats) {
  Prepared pr = prepare(inst);
  if (pr.red.immediate_no) return std::nullopt;
  const BinaryMatroid mat = inst.matroid();
  if (pr.red.terminals.empty()) {
    auto cert = span_contains(mat, {}, inst.terminals);
    if (!cert) throw std::logic_error("pgm: dependent terminals not spanned by the empty set");
    return PrimalSolution{{}, *cert};
  }
  std::optional<PrimalSolution> result;
  enumerate(pr, opt.cap_k, [&](const PatternGuess& guess) {
    if (stats) ++stats->pattern_calls;
    PatternCoverStats ps;
    auto emb = pattern_cover::solve(guess.pc, opt.pattern, &ps);
    if (stats) stats->colorings += ps.colorings;
    if (!emb) return true;
    const auto& ctx = guess.ctx;
    std::vector<int> image = ctx.f_edge;
    int hp = 0;
    for (int he : ctx.forest) {
      if (image[he] >= 0) continue;
      image[he] = guess.g_edge[emb->edge_map[hp++]];
    }
    std::vector<int> f = image;
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) {
      if (stats) ++stats->verify_failures;
      return true;
    }
    // Certificate from the guessed E_W subsets, checked independently.
    SpanCertificate guessed;
    for (std::size_t wi = 0; wi < ctx.terminals.size(); ++wi) {
      std::vector<int> fw;
      for (int he : ctx.e_w[wi]) fw.push_back(image[he]);
      std::sort(fw.begin(), fw.end());
      guessed[ctx.terminals[wi]] = fw;
    }
    auto cert = span_contains(mat, f, inst.terminals);
    if (!cert || !verify_span_certificate(mat, f, ctx.terminals, guessed) ||
        !verify_span_certificate(mat, f, inst.terminals, *cert)) {
      if (stats) ++stats->verify_failures;
      return true;
    }
    result = PrimalSolution{f, *cert};
    return false;
  }, stats);
  return result;
}

}  // namespace scpm::pgm
