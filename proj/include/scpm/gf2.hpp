#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scpm {

// Bit-packed vector over GF(2). Coordinates past size() are always zero.
class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t len);

  static Gf2Vector from_string(std::string_view bits);
  static Gf2Vector unit(std::size_t len, std::size_t i);

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear();

  bool is_zero() const;
  std::size_t popcount() const;
  // Index of the lowest set coordinate, or size() when zero.
  std::size_t lowest() const;
  std::vector<std::size_t> support() const;
  std::string to_string() const;

  Gf2Vector& operator^=(const Gf2Vector& o);
  friend Gf2Vector operator^(Gf2Vector a, const Gf2Vector& b) { return a ^= b; }
  bool operator==(const Gf2Vector& o) const = default;
  bool operator<(const Gf2Vector& o) const;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols);
  static Gf2Matrix from_rows(const std::vector<Gf2Vector>& rows);
  static Gf2Matrix from_columns(const std::vector<Gf2Vector>& cols, std::size_t rows);
  // One row of '0'/'1' characters per line.
  static Gf2Matrix from_string(std::string_view text);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { data_[r].set(c, value); }

  const Gf2Vector& row(std::size_t r) const { return data_[r]; }
  void set_row(std::size_t r, const Gf2Vector& v);
  Gf2Vector column(std::size_t c) const;
  std::vector<Gf2Vector> columns() const;

  Gf2Matrix transpose() const;
  bool is_zero() const;
  std::string to_string() const;

  Gf2Matrix& operator^=(const Gf2Matrix& o);
  friend Gf2Matrix operator^(Gf2Matrix a, const Gf2Matrix& b) { return a ^= b; }
  bool operator==(const Gf2Matrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Gf2Vector> data_;
};

// Indices of input vectors whose XOR is the target.
using Combination = std::vector<std::size_t>;

std::size_t rank(const Gf2Matrix& m);
std::size_t rank(const std::vector<Gf2Vector>& vectors);
std::optional<Combination> in_span(const std::vector<Gf2Vector>& basis_set, const Gf2Vector& target);
std::vector<std::size_t> basis(const std::vector<Gf2Vector>& vectors);

struct DistinctClasses {
  std::vector<Gf2Vector> classes;  // first-occurrence order
  std::vector<int> class_of;       // input index -> class index
};

DistinctClasses distinct_columns(const Gf2Matrix& m);
DistinctClasses distinct_rows(const Gf2Matrix& m);

// Incremental row-echelon basis that remembers, for every stored pivot row,
// which inserted vectors were combined to produce it.
class Gf2Eliminator {
 public:
  explicit Gf2Eliminator(std::size_t len) : len_(len) {}

  // Returns true if v was independent of everything inserted so far.
  bool insert(const Gf2Vector& v);
  std::optional<Combination> express(const Gf2Vector& target) const;
  bool contains(const Gf2Vector& target) const;
  std::size_t rank() const { return pivots_.size(); }
  std::size_t inserted() const { return inserted_; }

 private:
  struct Pivot {
    std::size_t bit;
    Gf2Vector vec;
    std::vector<std::uint64_t> combo;
  };
  std::size_t len_;
  std::size_t inserted_ = 0;
  std::vector<Pivot> pivots_;
};

}  // namespace scpm
