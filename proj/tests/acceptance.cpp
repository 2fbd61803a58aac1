// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <bit>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "scpm/cli.hpp"
#include "scpm/derand.hpp"
#include "scpm/dual_solver.hpp"
#include "scpm/eoct.hpp"
#include "scpm/generator.hpp"
#include "scpm/hardness.hpp"
#include "scpm/oracle.hpp"
#include "scpm/pattern_cover.hpp"
#include "scpm/pgm_solver.hpp"
#include "support.hpp"

using namespace scpm;
using namespace scpm::testing;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kC1MaxSeconds = 300.0;
constexpr double kC2MaxSeconds = 600.0;
constexpr int kC1Count = 500;
constexpr int kC2Count = 300;
constexpr int kC3Count = 20;
constexpr int kC4Count = 20;
constexpr int kC4MinReplacements = 10;
constexpr int kC6Count = 300;
constexpr int kC6ColorfulCount = 100;
constexpr int kC7Count = 200;
constexpr int kC9SampledSix = 200;
constexpr int kC10Count = 100;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool same_answer(const auto& a, const auto& b) {
  return a.has_value() == b.has_value() && (!a || a->f.size() == b->f.size());
}

// ---- criterion 1 / 5 corpus

std::vector<SpaceCoverInstance> primal_corpus() {
  std::mt19937_64 rng(20240611);
  std::vector<SpaceCoverInstance> out;
  int yes = 0, no = 0;
  while (static_cast<int>(out.size()) < kC1Count) {
    RandomParams prm;
    prm.n = 3 + rng() % 5;
    prm.m = std::min(10, prm.n + 1 + static_cast<int>(rng() % 6));
    prm.k = 1 + rng() % 3;
    prm.r = rng() % 3;
    prm.terminals = 1 + rng() % 3;
    auto inst = random_instance(prm, rng);
    // Rejection sampling keeps the two answers balanced.
    bool y = oracle::solve_primal_bruteforce(inst).has_value();
    if (y && yes >= kC1Count / 2) continue;
    if (!y && no >= kC1Count / 2) continue;
    (y ? yes : no)++;
    out.push_back(std::move(inst));
  }
  return out;
}

Outcome criterion1(const std::vector<SpaceCoverInstance>& corpus) {
  auto t0 = Clock::now();
  fs::path dir = fs::temp_directory_path() / "scpm_acceptance_c1";
  fs::create_directories(dir);
  int agree = 0, sizes = 0, yes = 0, checked = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& inst = corpus[i];
    auto o = oracle::solve_primal_bruteforce(inst);
    auto s = pgm::solve(inst);
    agree += o.has_value() == s.has_value();
    sizes += same_answer(o, s);
    if (!s) continue;
    ++yes;
    cli::ResultReport rep;
    rep.yes = true;
    rep.mode = Mode::primal;
    rep.witness = s->f;
    rep.span = s->cert;
    auto ipath = (dir / "inst.txt").string(), rpath = (dir / "report.json").string();
    save_instance(inst, ipath);
    std::ofstream(rpath) << cli::report_to_json(rep).dump();
    std::ostringstream out, err;
    checked += cli::cmd_check(ipath, rpath, out, err) == 0;
  }
  fs::remove_all(dir);
  const double sec = seconds_since(t0);
  const int n = static_cast<int>(corpus.size());
  Outcome o;
  o.pass = agree == n && checked == yes && sec <= kC1MaxSeconds;
  o.detail = fmt("status %d/%d, size %d/%d, cmd_check %d/%d yes-witnesses, %.1f s (limit %.0f s)", agree, n, sizes, n,
                 checked, yes, sec, kC1MaxSeconds);
  return o;
}

Outcome criterion5(const std::vector<SpaceCoverInstance>& corpus) {
  long long minimal = 0, violations = 0;
  for (const auto& inst : corpus) {
    const int t = pgm::edge_types(inst.p).t;
    for (const auto& f : oracle::minimal_primal_solutions(inst)) {
      ++minimal;
      if (count_simple_cycles(edge_subgraph(inst.g, f)) > (1LL << t)) ++violations;
    }
  }
  return {violations == 0, fmt("%lld minimal solutions, %lld with more than 2^t cycles", minimal, violations)};
}

Outcome criterion2() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(20240612);
  int agree = 0, sizes = 0, certs = 0, yes = 0, other_branch = 0;
  for (int i = 0; i < kC2Count; ++i) {
    RandomParams prm;
    prm.n = 3 + rng() % 4;
    prm.m = std::min(9, prm.n + static_cast<int>(rng() % 5));
    prm.k = rng() % 3;
    prm.r = rng() % 2;
    prm.terminals = 1 + rng() % 2;
    prm.mode = Mode::dual;
    auto inst = random_instance(prm, rng);
    auto o = oracle::solve_dual_bruteforce(inst);
    dual::DualStats st;
    auto s = dual::solve(inst, {}, &st);
    other_branch += st.unbreakable + st.breakable > 0;
    agree += o.has_value() == s.has_value();
    sizes += same_answer(o, s);
    if (s) {
      ++yes;
      certs += verify_dual_certificate(inst.matroid(), s->f, inst.terminals, s->cert);
    }
  }
  const double sec = seconds_since(t0);
  return {agree == kC2Count && certs == yes && other_branch == 0 && sec <= kC2MaxSeconds,
          fmt("status %d/%d, size %d/%d, certificates %d/%d, non-small branches %d, %.1f s (limit %.0f s)", agree,
              kC2Count, sizes, kC2Count, certs, yes, other_branch, sec, kC2MaxSeconds)};
}

Outcome criterion3() {
  std::mt19937_64 rng(20240613);
  OracleLimits lim;
  lim.dual_max_m = 400;
  const auto k17 = complete_graph(17);
  int agree = 0, fired = 0, yes = 0;
  for (int i = 0; i < kC3Count; ++i) {
    auto inst = planted_dual(k17, 1, 1 + (i % 4 == 3), i % 2 == 0, rng);
    dual::DualOptions opt;
    opt.q_override = 2;
    opt.p_override = 2;
    dual::DualStats st;
    auto s = dual::solve(inst, opt, &st);
    auto o = oracle::solve_dual_bruteforce(inst, lim);
    fired += st.unbreakable > 0;
    agree += same_answer(o, s);
    yes += o.has_value();
  }
  return {agree == kC3Count && fired == kC3Count,
          fmt("K17 q=2 p=2: unbreakable branch fired %d/%d, oracle agreement %d/%d (%d yes)", fired, kC3Count, agree,
              kC3Count, yes)};
}

Outcome criterion4() {
  std::mt19937_64 rng(20240614);
  OracleLimits lim;
  lim.dual_max_m = 400;
  int agree = 0, fired = 0, fallbacks = 0;
  for (int i = 0; i < kC4Count; ++i) {
    MultiGraph g = i % 2 == 0 ? path_graph(17 + i % 5) : barbell();
    auto inst = planted_dual(g, 1 + i % 2, 1 + (i % 3 == 2), i % 2 == 0 || i % 3 == 0, rng);
    dual::DualOptions opt;
    opt.q_override = 2;
    dual::DualStats st;
    auto s = dual::solve(inst, opt, &st);
    auto o = oracle::solve_dual_bruteforce(inst, lim);
    fired += st.breakable > 0;
    fallbacks += st.fallbacks > 0;
    agree += same_answer(o, s);
  }

  // Replacement tables brute-forced on both sides.
  int tested = 0, compressed = 0, bad = 0;
  for (int attempt = 0; attempt < 4000 && compressed < kC4MinReplacements; ++attempt) {
    const int n = 8 + rng() % 3;
    AnnotatedEscInstance a;
    a.esc.g = path_graph(n);
    const int chords = rng() % 4;
    for (int j = 0; j < chords; ++j) {
      int u = static_cast<int>(rng() % n);
      a.esc.g.add_edge(u, std::min(n - 1, u + 1 + static_cast<int>(rng() % 2)));
    }
    const int m = a.esc.g.m();
    a.esc.k = 1 + rng() % 2;
    a.esc.t = 1 + rng() % 2;
    for (int v = 0; v < n; ++v) a.esc.vclass.push_back(static_cast<int>(rng() % a.esc.t));
    const int nt = 1 + rng() % 2;
    for (int t = 0; t < nt; ++t) {
      EscTerminal term;
      term.edge = t == 0 ? 0 : m - 1;
      for (int e = 0; e < m; ++e) term.f.push_back(rng() % 4 == 0);
      a.esc.terminals.push_back(term);
    }
    auto sep = good_edge_separation(a.esc.g, 2, 2 * (a.esc.k + 1));
    if (!sep) continue;
    auto [q, boundary] = dual::choose_side(a, *sep);
    auto side = dual::side_instance(a, q, boundary);
    auto q_table = oracle::annotated_esc_bruteforce(side.inst);
    if (q_table.empty()) continue;
    auto rep = dual::build_replacement(a, q, side, q_table);
    auto before = oracle::annotated_esc_bruteforce(a);
    auto after = oracle::annotated_esc_bruteforce(rep.star);
    ++tested;
    compressed += rep.star.esc.g.n() < n;
    bool ok = before.size() == after.size();
    for (const auto& [key, sol] : before) {
      auto it = after.find(key);
      ok = ok && it != after.end() && it->second.f.size() == sol.f.size();
    }
    bad += !ok;
  }
  return {agree == kC4Count && fired == kC4Count && compressed >= kC4MinReplacements && bad == 0,
          fmt("paths/barbells q=2: breakable branch fired %d/%d (%d with a small-case fallback), oracle agreement "
              "%d/%d; replacement tables %d checked, %d compressed, %d mismatches",
              fired, kC4Count, fallbacks, agree, kC4Count, tested, compressed, bad)};
}

Outcome criterion6() {
  std::mt19937_64 rng(20240616);
  int agree = 0, yes = 0, valid = 0;
  for (int i = 0; i < kC6Count; ++i) {
    auto pc = random_pattern_instance(rng, 1 + rng() % 6, 4 + rng() % 7, 1 + rng() % 3);
    auto s = pattern_cover::solve(pc);
    auto o = oracle::pattern_cover_bruteforce(pc);
    agree += s.has_value() == o.has_value();
    if (s) {
      ++yes;
      valid += pattern_cover::verify(pc, *s);
    }
  }
  int colorful = 0;
  for (int i = 0; i < kC6ColorfulCount; ++i) {
    auto pc = random_pattern_instance(rng, 1 + rng() % 6, 4 + rng() % 7, 1 + rng() % 3);
    std::vector<std::uint8_t> c(pc.g.n());
    for (auto& x : c) x = static_cast<std::uint8_t>(rng() % pc.h.n());
    colorful += pattern_cover::colorful_solve(pc, c).has_value() == oracle::pattern_cover_bruteforce(pc, &c).has_value();
  }
  return {agree == kC6Count && valid == yes && colorful == kC6ColorfulCount,
          fmt("deterministic %d/%d (%d yes, %d verified), colorful %d/%d", agree, kC6Count, yes, valid, colorful,
              kC6ColorfulCount)};
}

Outcome criterion7() {
  std::mt19937_64 rng(20240617);
  int agree = 0, with_loops = 0, with_parallel = 0;
  for (int i = 0; i < kC7Count; ++i) {
    const int n = 2 + rng() % 7;
    const int m = 1 + rng() % 12;
    auto g = random_multigraph(n, m, 0.15, rng);
    std::set<std::pair<int, int>> pairs;
    bool loop = false, parallel = false;
    for (const auto& e : g.edges()) {
      if (e.is_loop()) {
        loop = true;
      } else if (!pairs.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second) {
        parallel = true;
      }
    }
    with_loops += loop;
    with_parallel += parallel;
    auto o = oracle::eoct_bruteforce(g, 12);
    const int best = static_cast<int>(o->size());
    bool ok = eoct::minimize(g) == best;
    auto s = eoct::solve(g, best);
    ok = ok && s && static_cast<int>(s->s.size()) <= best;
    if (best > 0) ok = ok && !eoct::solve(g, best - 1);
    agree += ok;
  }
  return {agree == kC7Count && with_loops > 0 && with_parallel > 0,
          fmt("%d/%d agree (%d graphs with loops, %d with parallel edges)", agree, kC7Count, with_loops, with_parallel)};
}

// Exhaustive checks written independently of derand's own verifier.
bool hash_family_ok(const HashFamily& fam) {
  const int n = fam.n, k = fam.k;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != k) continue;
    bool hit = false;
    for (const auto& f : fam.functions) {
      std::uint64_t seen = 0;
      bool inj = true;
      for (int v = 0; v < n && inj; ++v) {
        if (!(s >> v & 1)) continue;
        inj = !(seen >> f[v] & 1);
        seen |= std::uint64_t{1} << f[v];
      }
      if (inj) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

long long universal_missing(const UniversalSet& us) {
  const int n = us.n, k = us.k, p = us.p;
  long long missing = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != k) continue;
    std::vector<int> idx;
    for (int v = 0; v < n; ++v) {
      if (s >> v & 1) idx.push_back(v);
    }
    std::vector<char> got(1u << k, 0);
    for (const auto& f : us.functions) {
      std::uint32_t pat = 0;
      for (int j = 0; j < k; ++j) pat |= static_cast<std::uint32_t>(f[idx[j]] & 1) << j;
      got[pat] = 1;
    }
    for (std::uint32_t pat = 0; pat < (1u << k); ++pat) {
      if (std::popcount(pat) == p && !got[pat]) ++missing;
    }
  }
  return missing;
}

Outcome criterion8() {
  int families = 0, bad_families = 0;
  for (int n = 2; n <= 12; ++n) {
    for (int k = 2; k <= n; ++k) {
      ++families;
      bad_families += !hash_family_ok(build_hash_family(n, k));
    }
  }
  int sets = 0;
  long long missing = 0;
  for (int n = 1; n <= 12; ++n) {
    for (int k = 1; k <= std::min(n, 4); ++k) {
      for (int p = 0; p <= k; ++p) {
        ++sets;
        missing += universal_missing(build_universal_set(n, k, p));
      }
    }
  }
  return {bad_families == 0 && missing == 0,
          fmt("hash families %d built, %d missing a subset; universal sets %d built, %lld missing patterns", families,
              bad_families, sets, missing)};
}

Outcome criterion9() {
  using namespace hardness;
  OracleLimits lim;
  lim.primal_max_m = 40;
  lim.primal_max_k = 6;
  int mc = 0, mc_bad = 0, mc_solver_bad = 0, budget_bad = 0;
  auto run_mc = [&](const McInstance& inst, bool with_solver) {
    auto gen = from_multicolored_clique(inst);
    const int k = static_cast<int>(inst.parts.size());
    budget_bad += gen.inst.k != k * (k + 1) / 2;
    const bool src = has_multicolored_clique(inst);
    const bool got = oracle::solve_primal_bruteforce(gen.inst, lim).has_value();
    ++mc;
    mc_bad += src != got;
    if (with_solver) mc_solver_bad += pgm::solve(gen.inst).has_value() != src;
  };
  // All 2-part partitions of 4 vertices (vertex 3 fixed in part 1) times all edge subsets.
  for (int part = 1; part < 8; ++part) {
    for (int mask = 0; mask < 64; ++mask) {
      McInstance inst{MultiGraph(4), {{}, {}}};
      for (int v = 0; v < 4; ++v) inst.parts[(part >> v & 1) ? 0 : 1].push_back(v);
      int b = 0;
      for (int u = 0; u < 4; ++u) {
        for (int v = u + 1; v < 4; ++v) {
          if (mask >> b++ & 1) inst.g.add_edge(u, v);
        }
      }
      run_mc(inst, true);
    }
  }
  std::mt19937_64 rng(20240619);
  for (int i = 0; i < kC9SampledSix; ++i) {
    McInstance inst{MultiGraph(6), {{}, {}}};
    for (int v = 0; v < 6; ++v) inst.parts[v == 0 ? 0 : v == 5 ? 1 : rng() % 2].push_back(v);
    for (int u = 0; u < 6; ++u) {
      for (int v = u + 1; v < 6; ++v) {
        if (rng() % 3 == 0) inst.g.add_edge(u, v);
      }
    }
    run_mc(inst, false);
  }

  int tdm = 0, tdm_bad = 0, tdm_solver_bad = 0, rank_bad = 0;
  for (int q = 1; q <= 2; ++q) {
    const int all = q * q * q;
    for (int mask = 0; mask < (1 << all); ++mask) {
      TdmInstance inst{q, {}};
      for (int i = 0; i < all; ++i) {
        if (mask >> i & 1) inst.triples.push_back({i % q, (i / q) % q, i / (q * q)});
      }
      auto gen = from_3dm(inst);
      budget_bad += gen.inst.k != 3 * q;
      rank_bad += gen.inst.r() > 2;
      const bool src = has_3d_matching(inst);
      ++tdm;
      tdm_bad += src != oracle::solve_primal_bruteforce(gen.inst, lim).has_value();
      if (q == 1) tdm_solver_bad += pgm::solve(gen.inst).has_value() != src;
    }
  }
  return {mc_bad == 0 && tdm_bad == 0 && budget_bad == 0 && rank_bad == 0 && mc_solver_bad == 0 &&
              tdm_solver_bad == 0,
          fmt("multicolored clique %d instances, %d mismatches (solver cross-check %d); 3DM %d instances, %d "
              "mismatches (solver cross-check q=1: %d); budget errors %d, rank > 2: %d",
              mc, mc_bad, mc_solver_bad, tdm, tdm_bad, tdm_solver_bad, budget_bad, rank_bad)};
}

EscInstance random_esc(std::mt19937_64& rng, const MultiGraph& g, int k, int nt) {
  EscInstance esc;
  esc.g = g;
  esc.k = k;
  esc.vclass.assign(g.n(), 0);
  std::vector<int> perm(g.m());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < nt && i < g.m(); ++i) {
    EscTerminal term;
    term.edge = perm[i];
    for (int e = 0; e < g.m(); ++e) term.f.push_back(rng() % 3 == 0);
    esc.terminals.push_back(term);
  }
  return esc;
}

Outcome criterion10() {
  std::mt19937_64 rng(20240620);
  int presence = 0, presence_ok = 0;
  for (int i = 0; i < kC10Count; ++i) {
    const int n = 3 + rng() % 8;
    auto esc = random_esc(rng, random_multigraph(n, n + rng() % 8, 0.1, rng), rng() % 3, 1 + rng() % 2);
    for (int j = 0; j < static_cast<int>(esc.terminals.size()); ++j) {
      ++presence;
      auto pp = dual::preliminary_partition(esc, j);
      bool ok = pp.has_value() == !oracle::preliminary_partitions_bruteforce(esc, j).empty();
      presence_ok += ok && (!pp || is_preliminary(esc, *pp, j));
    }
  }

  // Unbreakable corpus: complete graphs, stars, K_{2,m}, and random graphs
  // certified (q, 2(k+1))-unbreakable by exact search.
  enum Family { complete, star, k2m, random, families };
  const char* family_name[families] = {"complete", "star", "K_{2,m}", "random"};
  std::vector<std::pair<Family, MultiGraph>> graphs;
  for (int n = 5; n <= 8; ++n) graphs.push_back({complete, complete_graph(n)});
  for (int leaves = 4; leaves <= 7; ++leaves) {
    MultiGraph g(leaves + 1);
    for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
    graphs.push_back({star, g});
  }
  for (int m = 3; m <= 5; ++m) {
    MultiGraph g(m + 2);
    for (int v = 2; v < m + 2; ++v) {
      g.add_edge(0, v);
      g.add_edge(1, v);
    }
    graphs.push_back({k2m, g});
  }
  while (graphs.size() < 200) {
    const int n = 4 + rng() % 6;
    auto g = random_multigraph(n, n + 1 + rng() % n, 0.05, rng);
    if (is_connected(g)) graphs.push_back({random, g});
  }
  long long pairs[families] = {}, literal[families] = {}, corrected = 0;
  int used_graphs[families] = {};
  for (const auto& [fam, g] : graphs) {
    bool used = false;
    for (int draw = 0; draw < 10; ++draw) {
      const int k = rng() % 4;
      const long long q = 1 + rng() % 2;
      if (good_edge_separation(g, q, 2 * (k + 1))) continue;
      used = true;
      auto esc = random_esc(rng, g, k, 1);
      auto all = oracle::preliminary_partitions_bruteforce(esc, 0);
      for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = a + 1; b < all.size(); ++b) {
          ++pairs[fam];
          literal[fam] += !dual::e_close(esc, all[a], all[b], q);
          corrected += !dual::e_close(esc, all[a], all[b], q * 2 * (k + 1));
        }
      }
    }
    used_graphs[fam] += used;
  }
  std::string breakdown;
  long long literal_total = 0;
  for (int f = 0; f < families; ++f) {
    literal_total += literal[f];
    breakdown += fmt("%s%s %lld/%lld on %d graphs", f ? ", " : "", family_name[f], literal[f], pairs[f], used_graphs[f]);
  }
  return {presence_ok == presence && literal_total == 0,
          fmt("preliminary partition presence %d/%d; pairs not e-close at radius q (%s); at radius 2(k+1)q: %lld",
              presence_ok, presence, breakdown.c_str(), corrected)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    auto t0 = Clock::now();
    Outcome o = fn();
    failed += !o.pass;
    std::cout << "C" << id << (id < 10 ? "  " : " ") << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail
              << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
  };
  std::vector<SpaceCoverInstance> corpus;
  report(1, "primal solver vs brute force", [&] {
    corpus = primal_corpus();
    return criterion1(corpus);
  });
  report(2, "dual solver vs brute force", criterion2);
  report(3, "unbreakable branch on K17", criterion3);
  report(4, "breakable branch and replacement tables", criterion4);
  report(5, "cycle bound on minimal solutions", [&] { return criterion5(corpus); });
  report(6, "pattern cover vs brute force", criterion6);
  report(7, "edge bipartization vs brute force", criterion7);
  report(8, "hash families and universal sets", criterion8);
  report(9, "hardness constructions", criterion9);
  report(10, "preliminary partitions and closeness", criterion10);
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
