#include <gtest/gtest.h>

#include <random>

#include "scpm/error.hpp"
#include "scpm/generator.hpp"
#include "scpm/instance.hpp"
#include "support.hpp"

using namespace scpm;
using namespace scpm::testing;

TEST(Instance, RepresentationIsIncidencePlusP) {
  Gf2Matrix p(3, 3);
  p.set(0, 1);
  auto inst = make_instance(triangle(), {0}, 2, Mode::primal, p);
  auto a = inst.a();
  EXPECT_EQ(a.column(1).support(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(inst.r(), 1u);
}

TEST(Instance, Validate) {
  auto inst = make_instance(triangle(), {0}, 2, Mode::primal);
  EXPECT_NO_THROW(inst.validate());
  inst.terminals = {3};
  EXPECT_THROW(inst.validate(), DimensionError);
  inst.terminals = {0, 0};
  EXPECT_THROW(inst.validate(), PreconditionError);
  inst.terminals = {0};
  inst.p = Gf2Matrix(2, 3);
  EXPECT_THROW(inst.validate(), DimensionError);
}

TEST(Instance, SerializeRoundTrip500) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 500; ++it) {
    RandomParams prm;
    prm.n = 1 + rng() % 8;
    prm.m = 1 + rng() % 12;
    prm.r = rng() % 3;
    prm.terminals = 1 + rng() % std::min(prm.m, 3);
    prm.k = rng() % 4;
    prm.mode = rng() % 2 ? Mode::dual : Mode::primal;
    auto inst = random_instance(prm, rng);
    ASSERT_EQ(parse_instance(serialize_instance(inst)), inst);
  }
}

TEST(Instance, ParseErrorsCarryLineNumbers) {
  const std::string good = "SCPM v1\nmode primal\nn 2 m 1 k 1\nedge 0 1\npert 1\n0 1\nterminals 0\n";
  EXPECT_NO_THROW(parse_instance(good));
  auto line_of = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("SCPM v1\nmode primal\nn 2 m 1 k 1\nedge 0 1\npert 1\n0 1x\nterminals 0\n"), 6);
  EXPECT_EQ(line_of("SCPM v1\nmode primal\nn 2 m 1 k 1\nedge 0 5\npert 0\nterminals 0\n"), 4);
  EXPECT_EQ(line_of("SCPM v2\n"), 1);
  EXPECT_EQ(line_of("SCPM v1\nmode other\n"), 2);
  EXPECT_EQ(line_of("SCPM v1\nmode primal\nn 2 m 1 k 1\nedge 0 1\npert 1\n0 11\nterminals 0\n"), 6);
}
