// Curated regression instances with expected verdicts and termination
// budgets, stored in the text format with a metadata header:
//   # name: example1
//   # expect: unsat
//   # step-budget: 200
//   # order: z y x        (ascending, optional)
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "liasat/engine.hpp"
#include "liasat/parser.hpp"

namespace liasat {

struct CorpusEntry {
  std::string name;
  std::string text;
  Verdict expected = Verdict::unsat;
  std::uint64_t step_budget = 0;
  std::vector<std::string> order_names;  // empty = policy order
};

inline CorpusEntry parse_corpus_text(std::string const& text) {
  CorpusEntry entry;
  entry.text = text;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash == std::string::npos) continue;
    std::istringstream meta(line.substr(hash + 1));
    std::string key;
    meta >> key;
    if (key == "name:") {
      meta >> entry.name;
    } else if (key == "expect:") {
      std::string v;
      meta >> v;
      if (v == "sat")
        entry.expected = Verdict::sat;
      else if (v == "unsat")
        entry.expected = Verdict::unsat;
      else
        throw std::domain_error("corpus: bad expect value " + v);
    } else if (key == "step-budget:") {
      meta >> entry.step_budget;
    } else if (key == "order:") {
      std::string n;
      while (meta >> n) entry.order_names.push_back(n);
    }
  }
  if (entry.name.empty()) throw std::domain_error("corpus entry without a name");
  if (entry.step_budget == 0) throw std::domain_error("corpus entry without a step budget");
  return entry;
}

inline CorpusEntry load_corpus_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus_text(buf.str());
}

struct CorpusOutcome {
  std::string name;
  bool passed = false;
  Verdict expected = Verdict::unsat;
  Verdict got = Verdict::unsat;
  std::uint64_t steps = 0;
  std::string message;
};

/// Solves one entry under its step budget.
inline CorpusOutcome run_corpus_entry(CorpusEntry const& entry, bool debug_checks = true) {
  CorpusOutcome out;
  out.name = entry.name;
  out.expected = entry.expected;
  ParsedProblem parsed = parse(entry.text);
  if (!entry.order_names.empty()) apply_explicit_order(parsed, entry.order_names);
  SolverConfig config;
  config.max_steps = entry.step_budget;
  config.debug_checks = debug_checks;
  Engine engine(parsed.problem, parsed.pool, parsed.order, config);
  SolveResult res = engine.solve();
  out.got = res.verdict;
  out.steps = res.stats.steps;
  if (res.verdict == Verdict::step_limit) {
    out.message = "step budget exceeded";
  } else if (res.verdict != entry.expected) {
    out.message = "wrong verdict";
  } else {
    out.passed = true;
  }
  return out;
}

inline std::vector<CorpusOutcome> run_corpus(std::vector<CorpusEntry> const& entries,
                                             bool debug_checks = true) {
  std::vector<CorpusOutcome> out;
  for (auto const& e : entries) out.push_back(run_corpus_entry(e, debug_checks));
  return out;
}

}  // namespace liasat
