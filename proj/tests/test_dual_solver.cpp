#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "scpm/dual_solver.hpp"
#include "scpm/error.hpp"
#include "scpm/generator.hpp"
#include "scpm/oracle.hpp"
#include "support.hpp"

using namespace scpm;
using namespace scpm::testing;

namespace {

EscInstance single_terminal_esc(MultiGraph g, int edge, std::vector<std::uint8_t> f, int k) {
  EscInstance esc;
  esc.vclass.assign(g.n(), 0);
  esc.g = std::move(g);
  esc.k = k;
  esc.terminals.push_back({edge, 0, std::move(f)});
  return esc;
}

AnnotatedEscInstance random_annotated(std::mt19937_64& rng, int n, int m, int k, int nt, int t, int nw) {
  AnnotatedEscInstance a;
  a.esc.g = random_multigraph(n, m, 0.1, rng);
  a.esc.k = k;
  a.esc.t = t;
  for (int v = 0; v < n; ++v) a.esc.vclass.push_back(static_cast<int>(rng() % t));
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < nt; ++i) {
    EscTerminal term;
    term.edge = rng() % 4 == 0 ? -1 : perm[i];
    term.b = static_cast<std::uint32_t>(rng() % (1u << t));
    for (int e = 0; e < m; ++e) term.f.push_back(rng() % 3 == 0);
    a.esc.terminals.push_back(term);
  }
  std::vector<int> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::shuffle(vs.begin(), vs.end(), rng);
  a.w.assign(vs.begin(), vs.begin() + nw);
  return a;
}

}  // namespace

TEST(Esc, FitsWholeVertexSet) {
  // X = V(G): nothing is split, so exactly the flipped edges contribute.
  // Three vertices of class 0 give parity 1.
  auto esc = single_terminal_esc(triangle(), 0, {1, 0, 0}, 1);
  std::vector<char> all(3, 1);
  EXPECT_EQ(fits(esc, all, 0), Fit::almost_fits);
  EXPECT_EQ(contribution(esc, 0, all), (std::vector<int>{0}));
  esc.terminals[0].b = 1;
  EXPECT_EQ(fits(esc, all, 0), Fit::fits);
  esc.terminals[0].f = {0, 0, 0};
  EXPECT_EQ(fits(esc, all, 0), Fit::neither);
}

TEST(Esc, PreliminaryCountsNonTerminalContributions) {
  auto esc = single_terminal_esc(triangle(), 0, {0, 0, 0}, 1);
  std::vector<char> x{1, 0, 0};  // cuts edges 0 and 2
  EXPECT_TRUE(is_preliminary(esc, x, 0));
  esc.k = 0;
  EXPECT_FALSE(is_preliminary(esc, x, 0));
}

TEST(Esc, VertexTypesAndBuild) {
  EXPECT_EQ(dual::vertex_types(Gf2Matrix(3, 3)).t, 1);
  Gf2Matrix p(3, 3);
  p.set(1, 0);
  p.set(1, 2);
  auto vt = dual::vertex_types(p);
  EXPECT_EQ(vt.t, 2);
  EXPECT_EQ(vt.vclass, (std::vector<int>{0, 1, 0}));
  auto inst = make_instance(triangle(), {0}, 1, Mode::dual, p);
  auto esc = dual::build_esc(inst, {0b10});
  ASSERT_EQ(esc.terminals.size(), 1u);
  EXPECT_EQ(esc.terminals[0].f, (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(esc.terminals[0].b, 0b10u);
  auto esc0 = dual::build_esc(inst, {0b00});
  EXPECT_EQ(esc0.terminals[0].f, (std::vector<std::uint8_t>{0, 0, 0}));
}

TEST(Esc, DefaultParamsSaturate) {
  dual::DualOptions opt;
  auto prm = dual::default_params(opt, 1, 1, 1);
  EXPECT_EQ(prm.p, 4);
  EXPECT_GE(prm.q, 16);
  EXPECT_FALSE(dual::heuristic_regime(opt));
  opt.q_override = 2;
  opt.p_override = 2;
  prm = dual::default_params(opt, 1, 1, 1);
  EXPECT_EQ(prm.q, 2);
  EXPECT_EQ(prm.p, 2);
  EXPECT_EQ(prm.s, 16);
  EXPECT_TRUE(dual::heuristic_regime(opt));
}

TEST(Esc, MultiplicityReductionPreservesTable) {
  std::mt19937_64 rng(73);
  int reduced = 0;
  for (int it = 0; it < 80; ++it) {
    AnnotatedEscInstance a;
    a.esc.g = MultiGraph(4);
    for (int j = 0; j < 9; ++j) {
      int u = static_cast<int>(rng() % 3);
      a.esc.g.add_edge(u, u + 1);
    }
    a.esc.k = 1 + rng() % 2;
    a.esc.vclass.assign(4, 0);
    EscTerminal term;
    term.edge = 0;
    for (int e = 0; e < 9; ++e) term.f.push_back(rng() % 4 == 0);
    a.esc.terminals.push_back(term);
    std::vector<int> kept;
    AnnotatedEscInstance b = a;
    b.esc = dual::reduce_multiplicity(a.esc, &kept);
    reduced += b.esc.g.m() < a.esc.g.m();
    auto ta = oracle::annotated_esc_bruteforce(a), tb = oracle::annotated_esc_bruteforce(b);
    ASSERT_EQ(ta.size(), tb.size());
    for (const auto& [key, sol] : ta) {
      ASSERT_TRUE(tb.count(key));
      EXPECT_EQ(tb.at(key).f.size(), sol.f.size());
    }
  }
  EXPECT_GT(reduced, 0);
}

TEST(Esc, SolveSmallMatchesBruteForce) {
  std::mt19937_64 rng(79);
  for (int it = 0; it < 100; ++it) {
    const int n = 3 + rng() % 5;
    auto a = random_annotated(rng, n, n + rng() % 5, rng() % 3, 1 + rng() % 2, 1 + rng() % 2, rng() % 3);
    auto bt = oracle::annotated_esc_bruteforce(a);
    auto st = dual::solve_small(a);
    ASSERT_EQ(bt.size(), st.size());
    for (const auto& [key, sol] : st) {
      EXPECT_TRUE(verify_table_entry(a, key, sol));
      ASSERT_TRUE(bt.count(key));
      EXPECT_EQ(bt.at(key).f, sol.f);
    }
  }
}

TEST(Esc, PreliminaryPartitionPresence) {
  std::mt19937_64 rng(83);
  for (int it = 0; it < 60; ++it) {
    const int n = 3 + rng() % 6;
    auto a = random_annotated(rng, n, n + rng() % 6, rng() % 3, 1 + rng() % 2, 1, 0);
    for (int j = 0; j < static_cast<int>(a.esc.terminals.size()); ++j) {
      auto pp = dual::preliminary_partition(a.esc, j);
      EXPECT_EQ(pp.has_value(), !oracle::preliminary_partitions_bruteforce(a.esc, j).empty());
      if (pp) EXPECT_TRUE(is_preliminary(a.esc, *pp, j));
    }
  }
}

TEST(Esc, AlignedAndClose) {
  auto esc = single_terminal_esc(path_graph(5), 0, {0, 0, 0, 0}, 1);
  std::vector<char> z1{1, 0, 0, 0, 0}, z2{1, 1, 0, 0, 0}, z3{0, 1, 1, 1, 1};
  EXPECT_TRUE(dual::e_aligned(esc, z1, z1, 0));
  EXPECT_TRUE(dual::e_aligned(esc, z1, z2, 1));
  EXPECT_FALSE(dual::e_aligned(esc, z1, z2, 0));
  EXPECT_FALSE(dual::e_aligned(esc, z1, z3, 1));
  EXPECT_TRUE(dual::e_close(esc, z1, z3, 0));
}

TEST(Dual, SolveExamples) {
  // Expected sets frozen by tests/derive/derive_values.py.
  auto tri = dual::solve(make_instance(triangle(), {0}, 1, Mode::dual));
  ASSERT_TRUE(tri.has_value());
  EXPECT_EQ(tri->f, (std::vector<int>{1}));

  auto par = dual::solve(make_instance(MultiGraph(2, {{0, 1}, {0, 1}}), {0}, 1, Mode::dual));
  ASSERT_TRUE(par.has_value());
  EXPECT_EQ(par->f, (std::vector<int>{1}));

  auto bridge = dual::solve(make_instance(path_graph(4), {1}, 0, Mode::dual));
  ASSERT_TRUE(bridge.has_value());
  EXPECT_TRUE(bridge->f.empty());

  auto none = dual::solve(make_instance(triangle(), {}, 0, Mode::dual));
  ASSERT_TRUE(none.has_value());
  EXPECT_TRUE(none->f.empty());

  Gf2Matrix p(4, 4);
  p.set(2, 1);
  p.set(2, 3);
  auto c4 = dual::solve(make_instance(cycle_graph(4), {0}, 2, Mode::dual, p));
  ASSERT_TRUE(c4.has_value());
  EXPECT_EQ(c4->f, (std::vector<int>{1}));
}

TEST(Dual, TwoTrianglesCombine) {
  MultiGraph g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto two = dual::solve(make_instance(g, {0, 3}, 2, Mode::dual));
  ASSERT_TRUE(two.has_value());
  EXPECT_EQ(two->f, (std::vector<int>{1, 4}));
  EXPECT_FALSE(dual::solve(make_instance(g, {0, 3}, 1, Mode::dual)).has_value());
}

TEST(Dual, MultiwayCutStyle) {
  MultiGraph g(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 5}, {4, 5}});
  auto inst = make_instance(g, {0, 1, 2}, 2, Mode::dual);
  auto sol = dual::solve(inst);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->f, (std::vector<int>{3, 4}));
  EXPECT_TRUE(verify_dual_certificate(inst.matroid(), sol->f, inst.terminals, sol->cert));
}

TEST(Dual, Guards) {
  dual::DualOptions opt;
  opt.max_k = 1;
  EXPECT_THROW(dual::solve(make_instance(triangle(), {0}, 2, Mode::dual), opt), SizeGuardError);
}

TEST(Dual, ParallelPolicyMatchesSerial) {
  std::mt19937_64 rng(89);
  for (int it = 0; it < 40; ++it) {
    RandomParams prm;
    prm.n = 4 + rng() % 3;
    prm.m = 6 + rng() % 3;
    prm.k = 1 + rng() % 2;
    prm.r = 1;
    prm.terminals = 1 + rng() % 2;
    prm.mode = Mode::dual;
    auto inst = random_instance(prm, rng);
    dual::DualOptions par;
    par.policy = ExecPolicy::parallel;
    auto a = dual::solve(inst), b = dual::solve(inst, par);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_EQ(a->f, b->f);
  }
}
