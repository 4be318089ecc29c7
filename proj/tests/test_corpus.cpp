#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include "liasat/corpus.hpp"
#include "liasat/oracle.hpp"

using namespace liasat;
using namespace liasat::test;

namespace {

std::vector<std::string> corpus_files() {
  return {"example1.lia", "example2.lia", "example3.lia", "example4.lia", "sec3.lia"};
}

std::string corpus_path(std::string const& name) {
  return std::string(LIASAT_CORPUS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("corpus metadata parses", "[corpus]") {
  CorpusEntry e = load_corpus_file(corpus_path("example1.lia"));
  CHECK(e.name == "example1");
  CHECK(e.expected == Verdict::unsat);
  CHECK(e.step_budget == 200);
  CHECK(e.order_names == std::vector<std::string>{"z", "y", "x"});
}

TEST_CASE("corpus entries terminate with the expected verdicts", "[corpus]") {
  for (auto const& f : corpus_files()) {
    CorpusEntry e = load_corpus_file(corpus_path(f));
    CorpusOutcome o = run_corpus_entry(e);
    INFO(o.name << ": " << o.message << " (" << o.steps << " steps)");
    CHECK(o.passed);
    CHECK(o.steps <= e.step_budget);
  }
}

TEST_CASE("corpus verdicts agree with the oracles", "[corpus]") {
  for (auto const& f : corpus_files()) {
    CorpusEntry e = load_corpus_file(corpus_path(f));
    ParsedProblem p = parse(e.text);
    if (!e.order_names.empty()) apply_explicit_order(p, e.order_names);
    QeResult qe = qe_decide(p.problem, p.pool, p.order);
    CHECK((qe.verdict == QeVerdict::sat) == (e.expected == Verdict::sat));

    // enumeration over a generous box; inconclusive only for sat-search on
    // unguarded variables, and all unsat corpus entries are conclusive by
    // construction
    Box box;
    bool fully_guarded = true;
    for (VarId v : p.problem.vars()) {
      auto gi = p.problem.guard_interval(v);
      if (gi && p.problem.is_guarded(v)) {
        box.set(v, gi->first, gi->second);
      } else {
        box.set(v, -32, 32);
        fully_guarded = false;
      }
    }
    EnumResult en = enumerate(p.problem, box);
    if (e.expected == Verdict::sat) {
      CHECK(en.verdict == EnumVerdict::sat);
    } else if (fully_guarded) {
      CHECK(en.verdict == EnumVerdict::no_solution_in_box);
    }
  }
}

TEST_CASE("run_corpus aggregates outcomes", "[corpus]") {
  std::vector<CorpusEntry> entries;
  for (auto const& f : corpus_files()) entries.push_back(load_corpus_file(corpus_path(f)));
  std::vector<CorpusOutcome> outcomes = run_corpus(entries);
  REQUIRE(outcomes.size() == entries.size());
  for (auto const& o : outcomes) CHECK(o.passed);
}
