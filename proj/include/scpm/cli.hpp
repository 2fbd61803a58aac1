#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scpm/binmatroid.hpp"
#include "scpm/instance.hpp"

namespace scpm::cli {

struct SolveFlags {
  bool oracle = false;
  std::optional<std::uint64_t> seed;  // randomized colorings with this seed
  bool det = false;                   // force deterministic colorings
  bool parallel = false;
  std::optional<long long> q_override;
  std::optional<long long> p_override;
  std::optional<long long> s_override;
  double lambda = 1.0;
  int max_k = 6;
  bool json = false;
};

// JSON object with any of: lambda, q_override, p_override, s_override, seed, det, parallel, max_k.
// Explicit command-line flags win over the file.
void apply_config(const nlohmann::json& cfg, SolveFlags& flags);

struct ResultReport {
  bool yes = false;
  Mode mode = Mode::primal;
  std::vector<int> witness;
  SpanCertificate span;      // primal
  DualSpanCertificate cut;   // dual
  std::string reason;
  std::string regime;  // dual only: "theoretical" or "heuristic" (q/p/s overridden)
  long long guesses = 0;
  long long colorings = 0;
  int depth = 0;
  double wall_ms = 0;
};

nlohmann::json report_to_json(const ResultReport& rep);
ResultReport report_from_json(const nlohmann::json& j);
std::string report_to_text(const ResultReport& rep);

ResultReport solve_instance(const SpaceCoverInstance& inst, const SolveFlags& flags);
// Empty string when the report certifies the instance, else the first failure.
std::string check_report(const SpaceCoverInstance& inst, const ResultReport& rep);

// Exit codes: 0 yes / valid, 1 no / invalid, 2 error.
int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& instance_path, const std::string& report_path, std::ostream& out,
              std::ostream& err);

struct GenParams {
  std::string kind;  // mc, 3dm, random
  std::uint64_t seed = 1;
  int n = 6;
  int m = 8;
  int r = 1;
  int terminals = 1;
  int k = 2;
  int q = 1;
  int triples = 2;
  double density = 0.5;
  double loop_prob = 0.1;
  Mode mode = Mode::primal;
};

SpaceCoverInstance generate(const GenParams& prm);
int cmd_gen(const GenParams& prm, const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_bench(const std::string& corpus_dir, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scpm::cli
