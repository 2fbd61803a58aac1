#pragma once

#include <map>
#include <optional>
#include <vector>

#include "scpm/gf2.hpp"

namespace scpm {

// Binary matroid on the columns of a representing matrix.
class BinaryMatroid {
 public:
  BinaryMatroid() = default;
  explicit BinaryMatroid(Gf2Matrix rep);

  const Gf2Matrix& rep() const { return rep_; }
  int size() const { return static_cast<int>(rep_.cols()); }
  int rows() const { return static_cast<int>(rep_.rows()); }
  const Gf2Vector& column(int e) const { return cols_[e]; }
  const Gf2Vector& row(int v) const { return rep_.row(v); }

 private:
  Gf2Matrix rep_;
  std::vector<Gf2Vector> cols_;
};

// terminal column -> subset of the solution whose columns XOR to it
using SpanCertificate = std::map<int, std::vector<int>>;

struct CocycleCertificate {
  std::vector<int> x;  // rows whose sum is the characteristic vector
  bool operator==(const CocycleCertificate&) const = default;
};

struct DualWitness {
  std::vector<int> f_w;  // F_W: F_W together with the terminal is a cocycle
  CocycleCertificate cert;
};

using DualSpanCertificate = std::map<int, DualWitness>;

Gf2Vector characteristic_vector(int m, const std::vector<int>& cols);

bool is_independent(const BinaryMatroid& m, const std::vector<int>& f);
std::optional<SpanCertificate> span_contains(const BinaryMatroid& m, const std::vector<int>& f,
                                             const std::vector<int>& t);
std::optional<CocycleCertificate> is_cocycle(const BinaryMatroid& m, const std::vector<int>& f);
std::optional<DualSpanCertificate> dual_span_contains(const BinaryMatroid& m, const std::vector<int>& f,
                                                      const std::vector<int>& t);

// Direct XOR re-checks used by the CLI checker and the tests.
bool verify_span_certificate(const BinaryMatroid& m, const std::vector<int>& f, const std::vector<int>& t,
                             const SpanCertificate& cert);
bool verify_cocycle(const BinaryMatroid& m, const std::vector<int>& cocycle, const CocycleCertificate& cert);
bool verify_dual_certificate(const BinaryMatroid& m, const std::vector<int>& f, const std::vector<int>& t,
                             const DualSpanCertificate& cert);

}  // namespace scpm
