#include "scpm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "scpm/dual_solver.hpp"
#include "scpm/error.hpp"
#include "scpm/generator.hpp"
#include "scpm/hardness.hpp"
#include "scpm/oracle.hpp"
#include "scpm/pgm_solver.hpp"

namespace scpm::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Mode mode_from(const std::string& s) {
  if (s == "primal") return Mode::primal;
  if (s == "dual") return Mode::dual;
  throw PreconditionError("unknown mode '" + s + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

nlohmann::json report_to_json(const ResultReport& rep) {
  nlohmann::json j;
  j["status"] = rep.yes ? "yes" : "no";
  j["mode"] = mode_name(rep.mode);
  if (!rep.reason.empty()) j["reason"] = rep.reason;
  if (!rep.regime.empty()) j["regime"] = rep.regime;
  if (rep.yes) {
    j["witness"] = rep.witness;
    auto entries = nlohmann::json::array();
    if (rep.mode == Mode::primal) {
      for (const auto& [w, comb] : rep.span) entries.push_back({{"terminal", w}, {"combination", comb}});
      j["certificate"] = {{"type", "span"}, {"entries", entries}};
    } else {
      for (const auto& [w, wit] : rep.cut) {
        entries.push_back({{"terminal", w}, {"cocycle", wit.f_w}, {"rows", wit.cert.x}});
      }
      j["certificate"] = {{"type", "cut"}, {"entries", entries}};
    }
  }
  j["stats"] = {{"guesses", rep.guesses}, {"colorings", rep.colorings}, {"depth", rep.depth},
                {"wall_ms", rep.wall_ms}};
  return j;
}

ResultReport report_from_json(const nlohmann::json& j) {
  ResultReport rep;
  rep.yes = j.at("status").get<std::string>() == "yes";
  rep.mode = mode_from(j.at("mode").get<std::string>());
  if (j.contains("reason")) rep.reason = j["reason"].get<std::string>();
  if (j.contains("regime")) rep.regime = j["regime"].get<std::string>();
  if (rep.yes) {
    rep.witness = j.at("witness").get<std::vector<int>>();
    const auto& cert = j.at("certificate");
    const std::string type = cert.at("type").get<std::string>();
    if ((type == "span") != (rep.mode == Mode::primal)) throw PreconditionError("certificate type does not match mode");
    for (const auto& e : cert.at("entries")) {
      int w = e.at("terminal").get<int>();
      if (type == "span") {
        rep.span[w] = e.at("combination").get<std::vector<int>>();
      } else {
        DualWitness wit;
        wit.f_w = e.at("cocycle").get<std::vector<int>>();
        wit.cert.x = e.at("rows").get<std::vector<int>>();
        rep.cut[w] = std::move(wit);
      }
    }
  }
  if (j.contains("stats")) {
    const auto& s = j["stats"];
    rep.guesses = s.value("guesses", 0LL);
    rep.colorings = s.value("colorings", 0LL);
    rep.depth = s.value("depth", 0);
    rep.wall_ms = s.value("wall_ms", 0.0);
  }
  return rep;
}

std::string report_to_text(const ResultReport& rep) {
  std::ostringstream os;
  os << "status " << (rep.yes ? "yes" : "no") << "\n";
  os << "mode " << mode_name(rep.mode) << "\n";
  if (!rep.reason.empty()) os << "reason " << rep.reason << "\n";
  if (!rep.regime.empty()) os << "regime " << rep.regime << "\n";
  if (rep.yes) {
    os << "witness";
    for (int e : rep.witness) os << " " << e;
    os << "\n";
    if (rep.mode == Mode::primal) {
      for (const auto& [w, comb] : rep.span) {
        os << "span " << w << " =";
        for (int c : comb) os << " " << c;
        os << "\n";
      }
    } else {
      for (const auto& [w, wit] : rep.cut) {
        os << "cut " << w << " rows";
        for (int v : wit.cert.x) os << " " << v;
        os << " cocycle";
        for (int c : wit.f_w) os << " " << c;
        os << "\n";
      }
    }
  }
  os << "guesses " << rep.guesses << " colorings " << rep.colorings << " depth " << rep.depth << " wall_ms "
     << rep.wall_ms << "\n";
  return os.str();
}

void apply_config(const nlohmann::json& cfg, SolveFlags& flags) {
  if (!cfg.is_object()) throw PreconditionError("config: expected a JSON object");
  for (const auto& [key, val] : cfg.items()) {
    if (key == "lambda") {
      flags.lambda = val.get<double>();
    } else if (key == "q_override") {
      flags.q_override = val.get<long long>();
    } else if (key == "p_override") {
      flags.p_override = val.get<long long>();
    } else if (key == "s_override") {
      flags.s_override = val.get<long long>();
    } else if (key == "seed") {
      flags.seed = val.get<std::uint64_t>();
    } else if (key == "det") {
      flags.det = val.get<bool>();
    } else if (key == "parallel") {
      flags.parallel = val.get<bool>();
    } else if (key == "max_k") {
      flags.max_k = val.get<int>();
    } else {
      throw PreconditionError("config: unknown key '" + key + "'");
    }
  }
}

ResultReport solve_instance(const SpaceCoverInstance& inst, const SolveFlags& flags) {
  inst.validate();
  ResultReport rep;
  rep.mode = inst.mode;
  auto t0 = Clock::now();
  if (inst.mode == Mode::primal) {
    if (pgm::reduce_terminals(inst).immediate_no) {
      rep.reason = "terminal basis exceeds k";
    } else if (flags.oracle) {
      auto sol = oracle::solve_primal_bruteforce(inst);
      if (sol) {
        rep.yes = true;
        rep.witness = sol->f;
        rep.span = sol->cert;
      }
    } else {
      pgm::PgmOptions opt;
      if (flags.seed && !flags.det) {
        opt.pattern.kind = PatternCoverOptions::Kind::randomized;
        opt.pattern.seed = *flags.seed;
      }
      if (flags.parallel) opt.pattern.policy = ExecPolicy::parallel;
      pgm::PgmStats st;
      auto sol = pgm::solve(inst, opt, &st);
      rep.guesses = st.guesses;
      rep.colorings = st.colorings;
      if (sol) {
        rep.yes = true;
        rep.witness = sol->f;
        rep.span = sol->cert;
      }
    }
  } else {
    std::optional<DualSolution> sol;
    if (flags.oracle) {
      sol = oracle::solve_dual_bruteforce(inst);
    } else {
      dual::DualOptions opt;
      opt.lambda = flags.lambda;
      opt.max_k = flags.max_k;
      opt.q_override = flags.q_override;
      opt.p_override = flags.p_override;
      opt.s_override = flags.s_override;
      if (flags.parallel) opt.policy = ExecPolicy::parallel;
      rep.regime = dual::heuristic_regime(opt) ? "heuristic" : "theoretical";
      dual::DualStats st;
      sol = dual::solve(inst, opt, &st);
      rep.guesses = st.guesses;
      rep.colorings = st.colorings;
      rep.depth = st.max_depth;
    }
    if (sol) {
      rep.yes = true;
      rep.witness = sol->f;
      rep.cut = sol->cert;
    }
  }
  rep.wall_ms = ms_since(t0);
  return rep;
}

std::string check_report(const SpaceCoverInstance& inst, const ResultReport& rep) {
  if (!rep.yes) return "";
  const int m = inst.g.m();
  auto tmask = inst.terminal_mask();
  auto f = rep.witness;
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) return "witness repeats an edge";
  for (int e : f) {
    if (e < 0 || e >= m) return "witness edge " + std::to_string(e) + " out of range";
    if (tmask[e]) return "witness contains terminal " + std::to_string(e);
  }
  if (static_cast<int>(f.size()) > inst.k) return "witness larger than k";
  auto mat = inst.matroid();
  for (int w : inst.terminals) {
    bool ok = inst.mode == Mode::primal ? verify_span_certificate(mat, f, {w}, rep.span)
                                        : verify_dual_certificate(mat, f, {w}, rep.cut);
    if (!ok) return "terminal " + std::to_string(w) + " not certified";
  }
  return "";
}

int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    auto inst = load_instance(path);
    auto rep = solve_instance(inst, flags);
    if (flags.json) {
      out << report_to_json(rep).dump(2) << "\n";
    } else {
      out << report_to_text(rep);
    }
    return rep.yes ? 0 : 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_check(const std::string& instance_path, const std::string& report_path, std::ostream& out,
              std::ostream& err) {
  SpaceCoverInstance inst;
  ResultReport rep;
  try {
    inst = load_instance(instance_path);
    rep = report_from_json(nlohmann::json::parse(read_file(report_path)));
    if (rep.mode != inst.mode) throw PreconditionError("report mode differs from instance mode");
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
  auto fail = check_report(inst, rep);
  if (!fail.empty()) {
    out << "invalid: " << fail << "\n";
    return 1;
  }
  out << (rep.yes ? "valid\n" : "valid (no certificate to check)\n");
  return 0;
}

SpaceCoverInstance generate(const GenParams& prm) {
  std::mt19937_64 rng(prm.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (prm.kind == "random") {
    RandomParams rp;
    rp.n = prm.n;
    rp.m = prm.m;
    rp.r = prm.r;
    rp.terminals = prm.terminals;
    rp.k = prm.k;
    rp.mode = prm.mode;
    rp.loop_prob = prm.loop_prob;
    return random_instance(rp, rng);
  }
  if (prm.kind == "mc") {
    if (prm.k < 2 || prm.n < prm.k) throw PreconditionError("mc: need 2 <= k <= n");
    hardness::McInstance mc;
    mc.g = MultiGraph(prm.n);
    mc.parts.resize(prm.k);
    std::vector<int> order(prm.n);
    for (int v = 0; v < prm.n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    for (int j = 0; j < prm.n; ++j) mc.parts[j % prm.k].push_back(order[j]);
    std::vector<int> part(prm.n);
    for (int i = 0; i < prm.k; ++i) {
      for (int v : mc.parts[i]) part[v] = i;
    }
    for (int u = 0; u < prm.n; ++u) {
      for (int v = u + 1; v < prm.n; ++v) {
        if (part[u] != part[v] && coin(rng) < prm.density) mc.g.add_edge(u, v);
      }
    }
    return hardness::from_multicolored_clique(mc).inst;
  }
  if (prm.kind == "3dm") {
    if (prm.q < 1) throw PreconditionError("3dm: need q >= 1");
    const int all = prm.q * prm.q * prm.q;
    std::vector<int> ids(all);
    for (int i = 0; i < all; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    hardness::TdmInstance tdm;
    tdm.q = prm.q;
    const int take = std::clamp(prm.triples, 0, all);
    std::sort(ids.begin(), ids.begin() + take);
    for (int j = 0; j < take; ++j) {
      int i = ids[j];
      tdm.triples.push_back({i % prm.q, (i / prm.q) % prm.q, i / (prm.q * prm.q)});
    }
    return hardness::from_3dm(tdm).inst;
  }
  throw PreconditionError("unknown generator kind '" + prm.kind + "'");
}

int cmd_gen(const GenParams& prm, const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    auto inst = generate(prm);
    if (out_path.empty()) {
      out << serialize_instance(inst);
    } else {
      save_instance(inst, out_path);
    }
    return 0;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_bench(const std::string& corpus_dir, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  try {
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
  std::sort(files.begin(), files.end());
  out << "file,mode,n,m,k,r,t,answer,agree,solver_ms,oracle_ms,guesses\n";
  bool all_agree = true;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    try {
      auto inst = load_instance(path.string());
      int t = inst.mode == Mode::primal ? pgm::edge_types(inst.p).t : dual::vertex_types(inst.p).t;
      auto solved = solve_instance(inst, {});
      SolveFlags of;
      of.oracle = true;
      auto oracle = solve_instance(inst, of);
      bool agree = solved.yes == oracle.yes && solved.witness.size() == oracle.witness.size() &&
                   check_report(inst, solved).empty();
      all_agree = all_agree && agree;
      out << name << "," << mode_name(inst.mode) << "," << inst.g.n() << "," << inst.g.m() << "," << inst.k << ","
          << inst.r() << "," << t << "," << (solved.yes ? "yes" : "no") << "," << (agree ? "true" : "false") << ","
          << solved.wall_ms << "," << oracle.wall_ms << "," << solved.guesses << "\n";
    } catch (const std::exception& ex) {
      all_agree = false;
      err << name << ": " << ex.what() << "\n";
      out << name << ",,,,,,,error,false,,,\n";
    }
  }
  return all_agree ? 0 : 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"space cover solver for perturbed graphic matroids"};
  app.require_subcommand(1);

  SolveFlags sf;
  std::string solve_path;
  auto* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("instance", solve_path, "instance file")->required();
  solve->add_flag("--oracle", sf.oracle, "use brute force");
  solve->add_option("--seed", sf.seed, "randomized colorings with this seed");
  solve->add_flag("--det", sf.det, "deterministic colorings (default)");
  solve->add_flag("--parallel", sf.parallel, "OpenMP kernels");
  solve->add_option("--q-override", sf.q_override, "dual: override q");
  solve->add_option("--p-override", sf.p_override, "dual: override p");
  solve->add_option("--s-override", sf.s_override, "dual: override s");
  solve->add_option("--lambda", sf.lambda, "dual: exponent factor in the default q");
  solve->add_option("--max-k", sf.max_k, "dual: budget cap");
  solve->add_flag("--json", sf.json, "JSON report");
  std::string config_path;
  solve->add_option("--config", config_path, "JSON file with solver knobs");

  std::string check_inst, check_rep;
  auto* check = app.add_subcommand("check", "re-verify a JSON report against an instance");
  check->add_option("instance", check_inst)->required();
  check->add_option("report", check_rep)->required();

  GenParams gp;
  std::string gen_out, gen_mode = "primal";
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("kind", gp.kind, "mc | 3dm | random")->required()->check(CLI::IsMember({"mc", "3dm", "random"}));
  gen->add_option("--seed", gp.seed);
  gen->add_option("--n", gp.n);
  gen->add_option("--m", gp.m);
  gen->add_option("--r", gp.r);
  gen->add_option("--terminals", gp.terminals);
  gen->add_option("--k", gp.k);
  gen->add_option("--q", gp.q);
  gen->add_option("--triples", gp.triples);
  gen->add_option("--density", gp.density);
  gen->add_option("--loop-prob", gp.loop_prob);
  gen->add_option("--mode", gen_mode)->check(CLI::IsMember({"primal", "dual"}));
  gen->add_option("--out", gen_out, "output file (default stdout)");

  std::string corpus;
  auto* bench = app.add_subcommand("bench", "solver vs oracle over a directory, CSV to stdout");
  bench->add_option("corpus", corpus)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  if (*solve) {
    if (!config_path.empty()) {
      try {
        SolveFlags merged;
        apply_config(nlohmann::json::parse(read_file(config_path)), merged);
        // Flags given on the command line override the file.
        if (solve->count("--seed")) merged.seed = sf.seed;
        if (solve->count("--det")) merged.det = sf.det;
        if (solve->count("--parallel")) merged.parallel = sf.parallel;
        if (solve->count("--q-override")) merged.q_override = sf.q_override;
        if (solve->count("--p-override")) merged.p_override = sf.p_override;
        if (solve->count("--s-override")) merged.s_override = sf.s_override;
        if (solve->count("--lambda")) merged.lambda = sf.lambda;
        if (solve->count("--max-k")) merged.max_k = sf.max_k;
        merged.oracle = sf.oracle;
        merged.json = sf.json;
        sf = merged;
      } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
      }
    }
    return cmd_solve(solve_path, sf, out, err);
  }
  if (*check) return cmd_check(check_inst, check_rep, out, err);
  if (*gen) {
    gp.mode = mode_from(gen_mode);
    return cmd_gen(gp, gen_out, out, err);
  }
  return cmd_bench(corpus, out, err);
}

}  // namespace scpm::cli
