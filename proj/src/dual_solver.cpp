#include "scpm/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <omp.h>

#include "scpm/error.hpp"

namespace scpm::dual {

namespace {

constexpr long long kSaturate = std::numeric_limits<long long>::max() / 4;

long long sat_pow2(double exponent) {
  if (exponent >= 61) return kSaturate;
  return 1LL << static_cast<int>(std::ceil(exponent));
}

long long sat_mul(long long a, long long b) {
  if (a != 0 && b > kSaturate / a) return kSaturate;
  return a * b;
}

void add_stats(DualStats& into, const DualStats& s) {
  into.guesses += s.guesses;
  into.esc_calls += s.esc_calls;
  into.small += s.small;
  into.unbreakable += s.unbreakable;
  into.breakable += s.breakable;
  into.fallbacks += s.fallbacks;
  into.colorings += s.colorings;
  into.max_depth = std::max(into.max_depth, s.max_depth);
}

std::vector<std::uint32_t> decode_guess(std::uint64_t idx, int t, int nt) {
  std::vector<std::uint32_t> g(nt);
  const std::uint64_t base = std::uint64_t{1} << t;
  for (int i = 0; i < nt; ++i) {
    g[i] = static_cast<std::uint32_t>(idx % base);
    idx /= base;
  }
  return g;
}

struct Candidate {
  std::vector<std::uint32_t> guess;
  EscSolution sol;
};

}  // namespace

VertexTypes vertex_types(const Gf2Matrix& p) {
  auto dc = distinct_rows(p);
  VertexTypes out;
  out.t = static_cast<int>(dc.classes.size());
  out.vclass = std::move(dc.class_of);
  out.rows = std::move(dc.classes);
  if (out.t == 0) out.t = 1;
  return out;
}

EscInstance build_esc(const SpaceCoverInstance& inst, const std::vector<std::uint32_t>& guess) {
  auto vt = vertex_types(inst.p);
  if (guess.size() != inst.terminals.size()) throw DimensionError("build_esc: one parity guess per terminal");
  const int m = inst.g.m();
  EscInstance esc;
  esc.g = inst.g;
  esc.k = inst.k;
  esc.t = vt.t;
  esc.vclass = vt.vclass;
  if (esc.vclass.empty()) esc.vclass.assign(inst.g.n(), 0);
  for (std::size_t i = 0; i < guess.size(); ++i) {
    EscTerminal term;
    term.edge = inst.terminals[i];
    term.b = guess[i];
    Gf2Vector f(m);
    for (int j = 0; j < static_cast<int>(vt.rows.size()); ++j) {
      if (guess[i] >> j & 1u) f ^= vt.rows[j];
    }
    term.f.resize(m);
    for (int e = 0; e < m; ++e) term.f[e] = f.get(e);
    esc.terminals.push_back(std::move(term));
  }
  return esc;
}

RecursParams default_params(const DualOptions& opt, int t, int k, int terminals) {
  RecursParams prm;
  double ex = opt.lambda * (t + static_cast<double>(k) * k) * terminals;
  prm.q = ex >= 6 ? kSaturate : sat_pow2(std::pow(2.0, ex));
  if (opt.q_override) prm.q = *opt.q_override;
  prm.p = opt.p_override ? *opt.p_override : 2LL * (k + 1);
  long long q2 = sat_mul(prm.q, prm.q);
  prm.s = opt.s_override ? *opt.s_override : sat_mul(q2, q2);
  return prm;
}

bool heuristic_regime(const DualOptions& opt) {
  return opt.q_override.has_value() || opt.p_override.has_value() || opt.s_override.has_value();
}

std::optional<EscSolution> solve_esc(const EscInstance& inst, const RecursParams& prm, DualStats* stats) {
  inst.validate();
  if (stats) ++stats->esc_calls;
  const int nt = static_cast<int>(inst.terminals.size());
  // Per component: parity vector -> best partial solution.
  std::map<std::vector<std::uint32_t>, EscSolution> states;
  EscSolution empty;
  for (int i = 0; i < nt; ++i) empty.x.emplace_back(inst.g.n(), 0);
  states.emplace(std::vector<std::uint32_t>(nt, 0), std::move(empty));
  for (const auto& comp : connected_components(inst.g)) {
    AnnotatedEscInstance whole{inst, {}, {}, {}};
    auto side = side_instance(whole, comp, {});
    auto table = recurs(side.inst, prm, stats);
    std::map<std::vector<std::uint32_t>, EscSolution> next;
    for (const auto& [key, part] : states) {
      for (const auto& [ck, cs] : table) {
        if (part.f.size() + cs.f.size() > static_cast<std::size_t>(inst.k)) continue;
        auto h = key;
        for (int i = 0; i < nt; ++i) h[i] ^= ck.h[i];
        std::vector<int> f = part.f;
        for (int e : cs.f) f.push_back(side.edges[e]);
        std::sort(f.begin(), f.end());
        auto it = next.find(h);
        if (it != next.end() && !better_solution(f, it->second.f)) continue;
        EscSolution sol{std::move(f), part.x};
        for (int i = 0; i < nt; ++i) {
          for (std::size_t j = 0; j < comp.size(); ++j) sol.x[i][comp[j]] = cs.x[i][j];
        }
        next[h] = std::move(sol);
      }
    }
    states = std::move(next);
    if (states.empty()) return std::nullopt;
  }
  std::vector<std::uint32_t> target;
  for (const auto& term : inst.terminals) target.push_back(term.b);
  auto it = states.find(target);
  if (it == states.end()) return std::nullopt;
  if (!verify_esc_solution(inst, it->second)) throw std::logic_error("solve_esc: assembled solution fails to verify");
  return it->second;
}

std::optional<DualSolution> solve(const SpaceCoverInstance& inst, const DualOptions& opt, DualStats* stats) {
  inst.validate();
  if (inst.k > opt.max_k) throw SizeGuardError("dual solve: k above max_k");
  auto vt = vertex_types(inst.p);
  const int nt = static_cast<int>(inst.terminals.size());
  if (static_cast<long long>(vt.t) * nt > 24) throw SizeGuardError("dual solve: too many parity guesses");
  const auto prm = default_params(opt, vt.t, inst.k, nt);
  const std::uint64_t guesses = std::uint64_t{1} << (vt.t * nt);

  std::vector<std::optional<EscSolution>> found(guesses);
  std::vector<DualStats> local;
  if (opt.policy == ExecPolicy::parallel) {
    local.resize(omp_get_max_threads());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t g = 0; g < static_cast<std::int64_t>(guesses); ++g) {
      auto& st = local[omp_get_thread_num()];
      ++st.guesses;
      found[g] = solve_esc(build_esc(inst, decode_guess(g, vt.t, nt)), prm, &st);
    }
  } else {
    local.resize(1);
    for (std::uint64_t g = 0; g < guesses; ++g) {
      ++local[0].guesses;
      found[g] = solve_esc(build_esc(inst, decode_guess(g, vt.t, nt)), prm, &local[0]);
    }
  }
  if (stats) {
    for (const auto& s : local) add_stats(*stats, s);
  }

  std::optional<Candidate> best;
  for (std::uint64_t g = 0; g < guesses; ++g) {
    if (!found[g]) continue;
    if (!best || better_solution(found[g]->f, best->sol.f)) best = Candidate{decode_guess(g, vt.t, nt), *found[g]};
  }
  if (!best) return std::nullopt;

  auto esc = build_esc(inst, best->guess);
  auto matroid = inst.matroid();
  DualSolution out;
  out.f = best->sol.f;
  for (int i = 0; i < nt; ++i) {
    const int e = inst.terminals[i];
    DualWitness wit;
    for (int c : contribution(esc, i, best->sol.x[i])) {
      if (c != e) wit.f_w.push_back(c);
    }
    for (int v = 0; v < inst.g.n(); ++v) {
      if (best->sol.x[i][v]) wit.cert.x.push_back(v);
    }
    out.cert[e] = std::move(wit);
  }
  if (!verify_dual_certificate(matroid, out.f, inst.terminals, out.cert)) {
    throw std::logic_error("dual solve: certificate fails to verify");
  }
  return out;
}

}  // namespace scpm::dual
