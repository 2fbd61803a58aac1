#include <gtest/gtest.h>

#include "scpm/error.hpp"
#include "scpm/oracle.hpp"
#include "support.hpp"

using namespace scpm;
using namespace scpm::testing;

// Expected values frozen by tests/derive/derive_values.py.

TEST(PrimalOracle, Triangle) {
  auto sol = oracle::solve_primal_bruteforce(make_instance(triangle(), {0}, 2, Mode::primal));
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->f, (std::vector<int>{1, 2}));
  EXPECT_EQ(sol->cert.at(0), (std::vector<int>{1, 2}));
  EXPECT_FALSE(oracle::solve_primal_bruteforce(make_instance(triangle(), {0}, 1, Mode::primal)).has_value());
}

TEST(PrimalOracle, EmptyTerminalSetAndIsolatedColumn) {
  auto sol = oracle::solve_primal_bruteforce(make_instance(triangle(), {}, 0, Mode::primal));
  ASSERT_TRUE(sol.has_value());
  EXPECT_TRUE(sol->f.empty());
  // A bridge is outside the span of every other column.
  EXPECT_FALSE(oracle::solve_primal_bruteforce(make_instance(path_graph(4), {1}, 2, Mode::primal)).has_value());
}

TEST(PrimalOracle, MinimalSolutions) {
  auto tri = oracle::minimal_primal_solutions(make_instance(triangle(), {0}, 2, Mode::primal));
  EXPECT_EQ(tri, (std::vector<std::vector<int>>{{1, 2}}));
  auto c4 = oracle::minimal_primal_solutions(make_instance(cycle_graph(4), {0}, 3, Mode::primal));
  EXPECT_EQ(c4, (std::vector<std::vector<int>>{{1, 2, 3}}));
}

TEST(PrimalOracle, SizeGuard) {
  EXPECT_THROW(oracle::solve_primal_bruteforce(make_instance(complete_graph(6), {0}, 2, Mode::primal)),
               SizeGuardError);
  OracleLimits lim;
  lim.primal_max_m = 15;
  EXPECT_NO_THROW(oracle::solve_primal_bruteforce(make_instance(complete_graph(6), {0}, 2, Mode::primal), lim));
}

TEST(DualOracle, SmallCases) {
  auto tri = oracle::solve_dual_bruteforce(make_instance(triangle(), {0}, 1, Mode::dual));
  ASSERT_TRUE(tri.has_value());
  EXPECT_EQ(tri->f, (std::vector<int>{1}));
  auto par = oracle::solve_dual_bruteforce(make_instance(MultiGraph(2, {{0, 1}, {0, 1}}), {0}, 1, Mode::dual));
  ASSERT_TRUE(par.has_value());
  EXPECT_EQ(par->f, (std::vector<int>{1}));
  auto bridge = oracle::solve_dual_bruteforce(make_instance(path_graph(4), {1}, 0, Mode::dual));
  ASSERT_TRUE(bridge.has_value());
  EXPECT_TRUE(bridge->f.empty());
}

TEST(DualOracle, CertificatesVerify) {
  auto inst = make_instance(triangle(), {0}, 1, Mode::dual);
  auto sol = oracle::solve_dual_bruteforce(inst);
  ASSERT_TRUE(sol.has_value());
  EXPECT_TRUE(verify_dual_certificate(inst.matroid(), sol->f, inst.terminals, sol->cert));
}

TEST(PatternOracle, SingleEdgeIntoTriangle) {
  PatternCoverInstance pc;
  pc.g = triangle();
  pc.ell_g = {1, 1, 1};
  pc.h = MultiGraph(2, {{0, 1}});
  pc.ell_h = {1};
  auto emb = oracle::pattern_cover_bruteforce(pc);
  ASSERT_TRUE(emb.has_value());
  EXPECT_TRUE(pattern_cover::verify(pc, *emb));
  pc.ell_h = {2};
  EXPECT_FALSE(oracle::pattern_cover_bruteforce(pc).has_value());
}

TEST(EoctOracle, Examples) {
  EXPECT_EQ(oracle::eoct_bruteforce(triangle(), 1)->size(), 1u);
  EXPECT_TRUE(oracle::eoct_bruteforce(cycle_graph(4), 0)->empty());
  EXPECT_EQ(oracle::eoct_bruteforce(bowtie(), 2)->size(), 2u);
  EXPECT_FALSE(oracle::eoct_bruteforce(bowtie(), 1).has_value());
  EXPECT_EQ(oracle::eoct_bruteforce(complete_graph(4), 3)->size(), 2u);
}
