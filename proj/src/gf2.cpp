#include "scpm/gf2.hpp"

#include <bit>
#include <map>
#include <sstream>

#include "scpm/error.hpp"

namespace scpm {

namespace {

std::size_t word_count(std::size_t len) { return (len + 63) / 64; }

void combo_set(std::vector<std::uint64_t>& combo, std::size_t i) {
  if (combo.size() <= i / 64) combo.resize(i / 64 + 1, 0);
  combo[i / 64] ^= std::uint64_t{1} << (i % 64);
}

void combo_xor(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] ^= b[i];
}

Combination combo_indices(const std::vector<std::uint64_t>& combo) {
  Combination out;
  for (std::size_t w = 0; w < combo.size(); ++w) {
    std::uint64_t x = combo[w];
    while (x) {
      out.push_back(w * 64 + std::countr_zero(x));
      x &= x - 1;
    }
  }
  return out;
}

}  // namespace

Gf2Vector::Gf2Vector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

Gf2Vector Gf2Vector::from_string(std::string_view bits) {
  Gf2Vector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bitstring contains a character other than 0/1");
    }
  }
  return v;
}

Gf2Vector Gf2Vector::unit(std::size_t len, std::size_t i) {
  Gf2Vector v(len);
  v.set(i);
  return v;
}

void Gf2Vector::set(std::size_t i, bool value) {
  if (i >= len_) throw DimensionError("Gf2Vector index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

void Gf2Vector::clear() {
  for (auto& w : words_) w = 0;
}

bool Gf2Vector::is_zero() const {
  for (auto w : words_) {
    if (w) return false;
  }
  return true;
}

std::size_t Gf2Vector::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::size_t Gf2Vector::lowest() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
  }
  return len_;
}

std::vector<std::size_t> Gf2Vector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t x = words_[w];
    while (x) {
      out.push_back(w * 64 + std::countr_zero(x));
      x &= x - 1;
    }
  }
  return out;
}

std::string Gf2Vector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

Gf2Vector& Gf2Vector::operator^=(const Gf2Vector& o) {
  if (o.len_ != len_) throw DimensionError("Gf2Vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

bool Gf2Vector::operator<(const Gf2Vector& o) const {
  if (len_ != o.len_) return len_ < o.len_;
  return words_ < o.words_;
}

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, Gf2Vector(cols)) {}

Gf2Matrix Gf2Matrix::from_rows(const std::vector<Gf2Vector>& rows) {
  if (rows.empty()) return {};
  Gf2Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

Gf2Matrix Gf2Matrix::from_columns(const std::vector<Gf2Vector>& cols, std::size_t rows) {
  Gf2Matrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw DimensionError("column length mismatch");
    for (auto r : cols[c].support()) m.set(r, c);
  }
  return m;
}

Gf2Matrix Gf2Matrix::from_string(std::string_view text) {
  std::vector<Gf2Vector> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(Gf2Vector::from_string(line));
    if (rows.back().size() != rows.front().size()) throw DimensionError("ragged matrix rows");
  }
  return from_rows(rows);
}

void Gf2Matrix::set_row(std::size_t r, const Gf2Vector& v) {
  if (v.size() != cols_) throw DimensionError("row length mismatch");
  data_[r] = v;
}

Gf2Vector Gf2Matrix::column(std::size_t c) const {
  if (c >= cols_) throw DimensionError("column index out of range");
  Gf2Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (data_[r].get(c)) v.set(r);
  }
  return v;
}

std::vector<Gf2Vector> Gf2Matrix::columns() const {
  std::vector<Gf2Vector> out(cols_, Gf2Vector(rows_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (auto c : data_[r].support()) out[c].set(r);
  }
  return out;
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (auto c : data_[r].support()) t.set(c, r);
  }
  return t;
}

bool Gf2Matrix::is_zero() const {
  for (const auto& r : data_) {
    if (!r.is_zero()) return false;
  }
  return true;
}

std::string Gf2Matrix::to_string() const {
  std::string s;
  for (const auto& r : data_) {
    s += r.to_string();
    s += '\n';
  }
  return s;
}

Gf2Matrix& Gf2Matrix::operator^=(const Gf2Matrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("matrix shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) data_[r] ^= o.data_[r];
  return *this;
}

bool Gf2Eliminator::insert(const Gf2Vector& v) {
  if (v.size() != len_) throw DimensionError("vector length mismatch");
  Gf2Vector x = v;
  std::vector<std::uint64_t> combo;
  combo_set(combo, inserted_++);
  for (const auto& p : pivots_) {
    if (x.get(p.bit)) {
      x ^= p.vec;
      combo_xor(combo, p.combo);
    }
  }
  if (x.is_zero()) return false;
  pivots_.push_back({x.lowest(), std::move(x), std::move(combo)});
  return true;
}

std::optional<Combination> Gf2Eliminator::express(const Gf2Vector& target) const {
  if (target.size() != len_) throw DimensionError("vector length mismatch");
  Gf2Vector x = target;
  std::vector<std::uint64_t> combo;
  for (const auto& p : pivots_) {
    if (x.get(p.bit)) {
      x ^= p.vec;
      combo_xor(combo, p.combo);
    }
  }
  if (!x.is_zero()) return std::nullopt;
  return combo_indices(combo);
}

bool Gf2Eliminator::contains(const Gf2Vector& target) const {
  Gf2Vector x = target;
  for (const auto& p : pivots_) {
    if (x.get(p.bit)) x ^= p.vec;
  }
  return x.is_zero();
}

std::size_t rank(const std::vector<Gf2Vector>& vectors) {
  if (vectors.empty()) return 0;
  Gf2Eliminator e(vectors[0].size());
  for (const auto& v : vectors) e.insert(v);
  return e.rank();
}

std::size_t rank(const Gf2Matrix& m) {
  // Row rank; the matrix itself is never touched.
  std::vector<Gf2Vector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rank(rows);
}

std::optional<Combination> in_span(const std::vector<Gf2Vector>& basis_set, const Gf2Vector& target) {
  Gf2Eliminator e(target.size());
  for (const auto& v : basis_set) {
    if (v.size() != target.size()) throw DimensionError("in_span length mismatch");
    e.insert(v);
  }
  return e.express(target);
}

std::vector<std::size_t> basis(const std::vector<Gf2Vector>& vectors) {
  std::vector<std::size_t> out;
  if (vectors.empty()) return out;
  Gf2Eliminator e(vectors[0].size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (e.insert(vectors[i])) out.push_back(i);
  }
  return out;
}

namespace {

DistinctClasses classify(const std::vector<Gf2Vector>& items) {
  DistinctClasses out;
  std::map<Gf2Vector, int> seen;
  out.class_of.reserve(items.size());
  for (const auto& v : items) {
    auto [it, fresh] = seen.emplace(v, static_cast<int>(out.classes.size()));
    if (fresh) out.classes.push_back(v);
    out.class_of.push_back(it->second);
  }
  return out;
}

}  // namespace

DistinctClasses distinct_columns(const Gf2Matrix& m) { return classify(m.columns()); }

DistinctClasses distinct_rows(const Gf2Matrix& m) {
  std::vector<Gf2Vector> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return classify(rows);
}

}  // namespace scpm
