// Command-line front end. Exit codes: 10 sat, 20 unsat, 2 step limit,
// 1 error.
#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "liasat/corpus.hpp"
#include "liasat/oracle.hpp"

namespace liasat {

inline constexpr int kExitSat = 10;
inline constexpr int kExitUnsat = 20;
inline constexpr int kExitStepLimit = 2;
inline constexpr int kExitError = 1;

namespace detail {

inline void print_stats(Stats const& stats, std::ostream& err) {
  err << "steps: " << stats.steps << "\n";
  for (int r = 0; r < kRuleCount; ++r)
    if (stats.rule_counts[static_cast<size_t>(r)] != 0)
      err << rule_name(static_cast<Rule>(r)) << ": "
          << stats.rule_counts[static_cast<size_t>(r)] << "\n";
  err << "peak bound stack depth: " << stats.peak_stack_depth << "\n";
  err << "fresh variables: " << stats.fresh_vars << "\n";
}

inline int solve_command(std::string const& path, SolverConfig const& config, bool stats,
                         std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open " << path << "\n";
    return kExitError;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ParsedProblem parsed = parse(buf.str(), config.order_policy);

  if (config.oracle_mode == OracleMode::enumerate) {
    bool fully_guarded = true;
    Box box;
    for (VarId v : parsed.problem.vars()) {
      auto gi = parsed.problem.guard_interval(v);
      if (gi && parsed.problem.is_guarded(v)) {
        if (gi->first > gi->second) {
          out << "unsat\n";
          return kExitUnsat;
        }
        box.set(v, gi->first, gi->second);
      } else {
        fully_guarded = false;
        box.set(v, -64, 64);
      }
    }
    EnumResult res = enumerate(parsed.problem, box);
    if (res.verdict == EnumVerdict::sat) {
      out << "sat\n";
      if (config.emit_model)
        for (auto const& [v, value] : res.model.values())
          out << parsed.pool.name(v) << " = " << value.str() << "\n";
      return kExitSat;
    }
    if (fully_guarded) {
      out << "unsat\n";
      return kExitUnsat;
    }
    out << "unknown\n";  // no solution inside the search box is inconclusive
    return kExitError;
  }

  if (config.oracle_mode == OracleMode::qe) {
    QeResult res = qe_decide(parsed.problem, parsed.pool, parsed.order);
    if (res.verdict == QeVerdict::sat) {
      out << "sat\n";
      if (config.emit_model)
        for (auto const& [v, value] : res.model.values())
          out << parsed.pool.name(v) << " = " << value.str() << "\n";
      return kExitSat;
    }
    out << "unsat\n";
    return kExitUnsat;
  }

  if (config.oracle_mode == OracleMode::differential) {
    DifferentialReport rep = differential(parsed.problem, parsed.pool, parsed.order, config);
    out << "engine: "
        << (rep.engine_verdict == Verdict::sat
                ? "sat"
                : rep.engine_verdict == Verdict::unsat ? "unsat" : "step-limit")
        << "\n";
    out << "qe: " << (rep.qe_verdict == QeVerdict::sat ? "sat" : "unsat") << "\n";
    if (rep.enum_verdict)
      out << "enumerate: "
          << (*rep.enum_verdict == EnumVerdict::sat ? "sat" : "no-solution-in-box")
          << (rep.enum_conclusive ? "" : " (inconclusive)") << "\n";
    out << (rep.agree ? "agreement\n" : "DISAGREEMENT\n");
    if (!rep.agree) return kExitError;
    return rep.engine_verdict == Verdict::sat ? kExitSat : kExitUnsat;
  }

  Engine engine(parsed.problem, parsed.pool, parsed.order, config);
  std::ofstream trace_file;
  if (!config.trace_path.empty()) {
    trace_file.open(config.trace_path);
    if (!trace_file) {
      err << "error: cannot open trace file " << config.trace_path << "\n";
      return kExitError;
    }
    engine.set_trace_sink([&](TraceEvent const& ev) {
      nlohmann::json j;
      j["step"] = ev.step;
      j["rule"] = rule_name(ev.rule);
      if (!ev.var.empty()) j["var"] = ev.var;
      j["detail"] = ev.detail;
      trace_file << j.dump() << "\n";
    });
  }

  SolveResult res = engine.solve();
  if (stats) print_stats(res.stats, err);
  switch (res.verdict) {
    case Verdict::sat:
      out << "sat\n";
      if (config.emit_model)
        for (auto const& [v, value] : res.model.values())
          out << parsed.pool.name(v) << " = " << value.str() << "\n";
      return kExitSat;
    case Verdict::unsat:
      out << "unsat\n";
      return kExitUnsat;
    case Verdict::step_limit:
      out << "step limit reached\n";
      return kExitStepLimit;
  }
  return kExitError;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"feasibility of linear integer inequalities and divisibility constraints"};
  app.require_subcommand(1);

  std::string file;
  SolverConfig config;
  bool stats = false;
  bool no_model = false;
  std::string order = "declaration";
  std::string oracle = "none";

  CLI::App* solve = app.add_subcommand("solve", "decide one problem file");
  solve->add_option("file", file, "problem file")->required();
  solve->add_option("--trace", config.trace_path, "write a JSONL trace of rule applications");
  solve->add_option("--max-steps", config.max_steps, "abort after this many rule applications");
  solve->add_option("--order", order, "variable order policy: declaration | lexicographic")
      ->check(CLI::IsMember({"declaration", "lexicographic"}));
  solve->add_option("--oracle", oracle,
                    "decide with an oracle instead: enumerate | qe | differential")
      ->check(CLI::IsMember({"none", "enumerate", "qe", "differential"}));
  solve->add_flag("--no-model", no_model, "suppress model output");
  solve->add_flag("--stats", stats, "print rule-application statistics to stderr");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (CLI::ParseError const& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  config.emit_model = !no_model;
  config.order_policy =
      order == "lexicographic" ? OrderPolicy::lexicographic : OrderPolicy::declaration;
  if (oracle == "enumerate")
    config.oracle_mode = OracleMode::enumerate;
  else if (oracle == "qe")
    config.oracle_mode = OracleMode::qe;
  else if (oracle == "differential")
    config.oracle_mode = OracleMode::differential;

  try {
    return detail::solve_command(file, config, stats, out, err);
  } catch (ParseError const& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (BudgetExceeded const& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (std::exception const& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace liasat
