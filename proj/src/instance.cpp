#include "scpm/instance.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "scpm/error.hpp"

namespace scpm {

const char* mode_name(Mode m) { return m == Mode::primal ? "primal" : "dual"; }

Gf2Matrix SpaceCoverInstance::a() const { return incidence_matrix(g) ^ p; }

std::vector<char> SpaceCoverInstance::terminal_mask() const {
  std::vector<char> mask(g.m(), 0);
  for (int t : terminals) mask[t] = 1;
  return mask;
}

void SpaceCoverInstance::validate() const {
  if (p.rows() != static_cast<std::size_t>(g.n()) || p.cols() != static_cast<std::size_t>(g.m())) {
    throw DimensionError("perturbation shape differs from the incidence matrix");
  }
  std::set<int> seen;
  for (int t : terminals) {
    if (t < 0 || t >= g.m()) throw DimensionError("terminal index out of range");
    if (!seen.insert(t).second) throw PreconditionError("duplicate terminal index");
  }
  if (k < 0) throw PreconditionError("negative budget");
}

std::string serialize_instance(const SpaceCoverInstance& inst) {
  std::ostringstream out;
  out << "SCPM v1\n";
  out << "mode " << mode_name(inst.mode) << '\n';
  out << "n " << inst.g.n() << " m " << inst.g.m() << " k " << inst.k << '\n';
  for (const auto& e : inst.g.edges()) out << "edge " << e.u << ' ' << e.v << '\n';
  int nonzero = 0;
  for (std::size_t r = 0; r < inst.p.rows(); ++r) nonzero += !inst.p.row(r).is_zero();
  out << "pert " << nonzero << '\n';
  for (std::size_t r = 0; r < inst.p.rows(); ++r) {
    if (!inst.p.row(r).is_zero()) out << r << ' ' << inst.p.row(r).to_string() << '\n';
  }
  out << "terminals";
  for (int t : inst.terminals) out << ' ' << t;
  out << '\n';
  return out.str();
}

namespace {

struct LineReader {
  std::istringstream in;
  int lineno = 0;

  explicit LineReader(std::string_view text) : in{std::string(text)} {}

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      return std::istringstream(line);
    }
    throw ParseError(lineno + 1, std::string("unexpected end of input, expected ") + what);
  }
};

void expect_word(std::istringstream& ls, const std::string& word, int lineno) {
  std::string got;
  if (!(ls >> got) || got != word) throw ParseError(lineno, "expected '" + word + "'");
}

}  // namespace

SpaceCoverInstance parse_instance(std::string_view text) {
  LineReader rd(text);
  SpaceCoverInstance inst;
  {
    auto ls = rd.next("header");
    std::string tag, ver;
    ls >> tag >> ver;
    if (tag != "SCPM" || ver != "v1") throw ParseError(rd.lineno, "expected 'SCPM v1'");
  }
  {
    auto ls = rd.next("mode");
    expect_word(ls, "mode", rd.lineno);
    std::string m;
    ls >> m;
    if (m == "primal") {
      inst.mode = Mode::primal;
    } else if (m == "dual") {
      inst.mode = Mode::dual;
    } else {
      throw ParseError(rd.lineno, "mode must be primal or dual");
    }
  }
  int n = 0, m = 0;
  {
    auto ls = rd.next("sizes");
    expect_word(ls, "n", rd.lineno);
    ls >> n;
    expect_word(ls, "m", rd.lineno);
    ls >> m;
    expect_word(ls, "k", rd.lineno);
    ls >> inst.k;
    if (!ls || n < 0 || m < 0 || inst.k < 0) throw ParseError(rd.lineno, "bad sizes line");
  }
  inst.g = MultiGraph(n);
  for (int i = 0; i < m; ++i) {
    auto ls = rd.next("edge");
    expect_word(ls, "edge", rd.lineno);
    int u = -1, v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0 || u >= n || v >= n) throw ParseError(rd.lineno, "bad edge");
    inst.g.add_edge(u, v);
  }
  inst.p = Gf2Matrix(n, m);
  {
    auto ls = rd.next("pert");
    expect_word(ls, "pert", rd.lineno);
    int count = -1;
    if (!(ls >> count) || count < 0 || count > n) throw ParseError(rd.lineno, "bad pert count");
    std::set<int> rows_seen;
    for (int i = 0; i < count; ++i) {
      auto rl = rd.next("pert row");
      int row = -1;
      std::string bits;
      if (!(rl >> row >> bits) || row < 0 || row >= n) throw ParseError(rd.lineno, "bad pert row");
      if (static_cast<int>(bits.size()) != m) throw ParseError(rd.lineno, "bitstring length differs from m");
      if (!rows_seen.insert(row).second) throw ParseError(rd.lineno, "repeated pert row");
      try {
        inst.p.set_row(row, Gf2Vector::from_string(bits));
      } catch (const std::invalid_argument& e) {
        throw ParseError(rd.lineno, e.what());
      }
    }
  }
  {
    auto ls = rd.next("terminals");
    expect_word(ls, "terminals", rd.lineno);
    int t;
    std::set<int> seen;
    while (ls >> t) {
      if (t < 0 || t >= m) throw ParseError(rd.lineno, "terminal index out of range");
      if (!seen.insert(t).second) throw ParseError(rd.lineno, "duplicate terminal");
      inst.terminals.push_back(t);
    }
    if (!ls.eof()) throw ParseError(rd.lineno, "bad terminal index");
  }
  return inst;
}

SpaceCoverInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const SpaceCoverInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_instance(inst);
}

}  // namespace scpm
