#include <gtest/gtest.h>

#include <random>

#include "scpm/error.hpp"
#include "scpm/gf2.hpp"

using namespace scpm;

namespace {

std::vector<Gf2Vector> vecs(std::initializer_list<const char*> bits) {
  std::vector<Gf2Vector> out;
  for (const char* b : bits) out.push_back(Gf2Vector::from_string(b));
  return out;
}

Gf2Vector random_vector(std::size_t len, std::mt19937_64& rng) {
  Gf2Vector v(len);
  for (std::size_t i = 0; i < len; ++i) v.set(i, rng() & 1);
  return v;
}

}  // namespace

TEST(Gf2Vector, StringRoundTripAndBits) {
  auto v = Gf2Vector::from_string("10110");
  EXPECT_EQ(v.size(), 5u);
  EXPECT_EQ(v.to_string(), "10110");
  EXPECT_EQ(v.popcount(), 3u);
  EXPECT_EQ(v.lowest(), 0u);
  EXPECT_EQ(v.support(), (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(Gf2Vector(7).lowest(), 7u);
  EXPECT_THROW(Gf2Vector::from_string("10x"), std::invalid_argument);
}

TEST(Gf2Vector, XorAcrossWordBoundary) {
  Gf2Vector a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  b.set(100);
  auto c = a ^ b;
  EXPECT_EQ(c.support(), (std::vector<std::size_t>{0, 100, 129}));
  EXPECT_THROW(a ^= Gf2Vector(129), DimensionError);
}

TEST(Gf2Rank, DuplicateRowsAndZeroRow) {
  // Frozen by tests/derive/derive_values.py.
  EXPECT_EQ(rank(Gf2Matrix::from_string("101\n101\n000")), 1u);
  EXPECT_EQ(rank(Gf2Matrix(4, 5)), 0u);
  EXPECT_EQ(rank(vecs({"100", "010", "001"})), 3u);
}

TEST(Gf2Rank, TransposeInvariant) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    std::vector<Gf2Vector> rows;
    for (int r = 0; r < 7; ++r) rows.push_back(random_vector(11, rng));
    auto m = Gf2Matrix::from_rows(rows);
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(Gf2Span, CombinationFound) {
  auto c = in_span(vecs({"110", "011"}), Gf2Vector::from_string("101"));
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (Combination{0, 1}));
  EXPECT_FALSE(in_span(vecs({"110", "011"}), Gf2Vector::from_string("100")).has_value());
  auto zero = in_span(vecs({"110"}), Gf2Vector(3));
  ASSERT_TRUE(zero.has_value());
  EXPECT_TRUE(zero->empty());
}

TEST(Gf2Span, CombinationReproducesTarget) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    std::vector<Gf2Vector> set;
    for (int i = 0; i < 6; ++i) set.push_back(random_vector(8, rng));
    auto target = random_vector(8, rng);
    auto c = in_span(set, target);
    bool expect = rank(set) == [&] {
      auto s2 = set;
      s2.push_back(target);
      return rank(s2);
    }();
    ASSERT_EQ(c.has_value(), expect);
    if (c) {
      Gf2Vector acc(8);
      for (auto i : *c) acc ^= set[i];
      EXPECT_EQ(acc, target);
    }
  }
}

TEST(Gf2Basis, GreedyFirstIndices) {
  EXPECT_EQ(basis(vecs({"10", "10", "01"})), (std::vector<std::size_t>{0, 2}));
  EXPECT_TRUE(basis(vecs({"00", "00"})).empty());
}

TEST(Gf2Classes, DistinctColumnsOfLowRank) {
  // Rank-2 matrix as a sum of two outer products: at most 4 distinct columns.
  std::mt19937_64 rng(8);
  for (int it = 0; it < 30; ++it) {
    auto a = random_vector(6, rng), b = random_vector(6, rng);
    auto x = random_vector(6, rng), y = random_vector(6, rng);
    Gf2Matrix m(6, 6);
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) m.set(r, c, (a.get(r) && x.get(c)) != (b.get(r) && y.get(c)));
    }
    auto cls = distinct_columns(m);
    EXPECT_LE(cls.classes.size(), 4u);
    for (int c = 0; c < 6; ++c) EXPECT_EQ(cls.classes[cls.class_of[c]], m.column(c));
  }
  auto zero = distinct_rows(Gf2Matrix(3, 4));
  EXPECT_EQ(zero.classes.size(), 1u);
}

TEST(Gf2Eliminator, ExpressMatchesInSpan) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    Gf2Eliminator el(9);
    std::vector<Gf2Vector> inserted;
    for (int i = 0; i < 5; ++i) {
      auto v = random_vector(9, rng);
      el.insert(v);
      inserted.push_back(v);
    }
    EXPECT_EQ(el.rank(), rank(inserted));
    auto t = random_vector(9, rng);
    auto c = el.express(t);
    EXPECT_EQ(c.has_value(), in_span(inserted, t).has_value());
    if (c) {
      Gf2Vector acc(9);
      for (auto i : *c) acc ^= inserted[i];
      EXPECT_EQ(acc, t);
    }
  }
}

TEST(Gf2Matrix, ShapeErrors) {
  Gf2Matrix m(2, 3);
  EXPECT_THROW(m.set_row(0, Gf2Vector(4)), DimensionError);
  EXPECT_THROW(m ^= Gf2Matrix(3, 3), DimensionError);
  EXPECT_THROW(Gf2Matrix::from_string("10\n1"), DimensionError);
}
