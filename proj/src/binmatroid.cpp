#include "scpm/binmatroid.hpp"

#include <algorithm>
#include <set>

#include "scpm/error.hpp"

namespace scpm {

namespace {

void check_range(const BinaryMatroid& m, const std::vector<int>& cols) {
  for (int c : cols) {
    if (c < 0 || c >= m.size()) throw DimensionError("column index out of range");
  }
}

void check_disjoint(const std::vector<int>& f, const std::vector<int>& t) {
  std::set<int> fs(f.begin(), f.end());
  for (int w : t) {
    if (fs.count(w)) throw PreconditionError("solution set and terminal set overlap");
  }
}

}  // namespace

BinaryMatroid::BinaryMatroid(Gf2Matrix rep) : rep_(std::move(rep)), cols_(rep_.columns()) {}

Gf2Vector characteristic_vector(int m, const std::vector<int>& cols) {
  Gf2Vector v(m);
  for (int c : cols) v.set(c);
  return v;
}

bool is_independent(const BinaryMatroid& m, const std::vector<int>& f) {
  check_range(m, f);
  Gf2Eliminator e(m.rows());
  for (int c : f) {
    if (!e.insert(m.column(c))) return false;
  }
  return true;
}

std::optional<SpanCertificate> span_contains(const BinaryMatroid& m, const std::vector<int>& f,
                                             const std::vector<int>& t) {
  check_range(m, f);
  check_range(m, t);
  check_disjoint(f, t);
  Gf2Eliminator e(m.rows());
  for (int c : f) e.insert(m.column(c));
  SpanCertificate cert;
  for (int w : t) {
    auto combo = e.express(m.column(w));
    if (!combo) return std::nullopt;
    std::vector<int> fw;
    for (auto i : *combo) fw.push_back(f[i]);
    std::sort(fw.begin(), fw.end());
    cert[w] = std::move(fw);
  }
  return cert;
}

std::optional<CocycleCertificate> is_cocycle(const BinaryMatroid& m, const std::vector<int>& f) {
  check_range(m, f);
  Gf2Eliminator e(m.size());
  for (int v = 0; v < m.rows(); ++v) e.insert(m.row(v));
  auto combo = e.express(characteristic_vector(m.size(), f));
  if (!combo) return std::nullopt;
  CocycleCertificate cert;
  for (auto i : *combo) cert.x.push_back(static_cast<int>(i));
  return cert;
}

// W lies in the dual span of F iff charvec({W}) agrees with some row
// combination outside F; F_W is then where that combination hits F.
std::optional<DualSpanCertificate> dual_span_contains(const BinaryMatroid& m, const std::vector<int>& f,
                                                      const std::vector<int>& t) {
  check_range(m, f);
  check_range(m, t);
  check_disjoint(f, t);
  Gf2Vector mask(m.size());
  for (int c : f) mask.set(c);
  Gf2Eliminator e(m.size());
  for (int v = 0; v < m.rows(); ++v) {
    Gf2Vector r = m.row(v);
    for (int c : f) r.set(c, false);
    e.insert(r);
  }
  DualSpanCertificate out;
  for (int w : t) {
    auto combo = e.express(Gf2Vector::unit(m.size(), w));
    if (!combo) return std::nullopt;
    DualWitness dw;
    Gf2Vector sum(m.size());
    for (auto i : *combo) {
      dw.cert.x.push_back(static_cast<int>(i));
      sum ^= m.row(static_cast<int>(i));
    }
    for (int c : f) {
      if (sum.get(c)) dw.f_w.push_back(c);
    }
    std::sort(dw.f_w.begin(), dw.f_w.end());
    out[w] = std::move(dw);
  }
  return out;
}

bool verify_span_certificate(const BinaryMatroid& m, const std::vector<int>& f, const std::vector<int>& t,
                             const SpanCertificate& cert) {
  std::set<int> fs(f.begin(), f.end());
  for (int w : t) {
    auto it = cert.find(w);
    if (it == cert.end()) return false;
    Gf2Vector sum(m.rows());
    for (int c : it->second) {
      if (!fs.count(c) || c < 0 || c >= m.size()) return false;
      sum ^= m.column(c);
    }
    if (!(sum == m.column(w))) return false;
  }
  return true;
}

bool verify_cocycle(const BinaryMatroid& m, const std::vector<int>& cocycle, const CocycleCertificate& cert) {
  Gf2Vector sum(m.size());
  for (int v : cert.x) {
    if (v < 0 || v >= m.rows()) return false;
    sum ^= m.row(v);
  }
  return sum == characteristic_vector(m.size(), cocycle);
}

bool verify_dual_certificate(const BinaryMatroid& m, const std::vector<int>& f, const std::vector<int>& t,
                             const DualSpanCertificate& cert) {
  std::set<int> fs(f.begin(), f.end());
  for (int w : t) {
    auto it = cert.find(w);
    if (it == cert.end()) return false;
    std::vector<int> cocycle = it->second.f_w;
    for (int c : cocycle) {
      if (!fs.count(c)) return false;
    }
    cocycle.push_back(w);
    if (!verify_cocycle(m, cocycle, it->second.cert)) return false;
  }
  return true;
}

}  // namespace scpm
