// Copyright 2026 The relocheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <fmt/core.h>

#include "reloc/corpus.hpp"
#include "reloc/json_io.hpp"
#include "reloc/parser.hpp"
#include "support/oracles.hpp"

namespace {

using namespace reloc;
using Clock = std::chrono::steady_clock;

struct Failure {
  std::string why;
};

void require(bool ok, const std::string &why) {
  if (!ok) throw Failure{why};
}

const Corpus &corpus() {
  static const Corpus c = load_corpus(RELOC_CORPUS_DIR);
  return c;
}

const CorpusEntry &entry(const std::string &name) {
  for (const CorpusEntry &e : corpus().entries) {
    if (e.name == name) return e;
  }
  throw Failure{"missing corpus entry " + name};
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs one entry under a per-entry time limit and checks tag and completeness.
EntryResult run_timed(const std::string &name, Verdict::Tag want, std::optional<bool> complete, double limit) {
  const Clock::time_point t0 = Clock::now();
  EntryResult r = run_entry(entry(name));
  const double s = elapsed(t0);
  require(r.error.empty(), name + ": " + r.error);
  require(r.tag == want, fmt::format("{}: got {}", name, to_string(r.tag)));
  if (complete) require(r.complete == *complete, fmt::format("{}: complete={}", name, r.complete));
  require(s < limit, fmt::format("{}: {:.1f}s exceeds {}s", name, s, limit));
  return r;
}

void c1() {
  for (const char *n : {"bit_bool_nat", "bit_nat_bool"}) {
    run_timed(n, Verdict::Tag::NoCounterexample, true, 5);
  }
}

void c2() {
  for (const char *n : {"counter_i_s", "counter_s_i"}) {
    const CorpusEntry &e = entry(n);
    require(e.bounds.arg_budget == 3 && e.bounds.concurrent_calls, std::string(n) + ": wrong bounds");
    EntryResult r = run_timed(n, Verdict::Tag::NoCounterexample, std::nullopt, 120);
    require(r.verdicts.front().states_visited > 0, std::string(n) + ": no states reported");
  }
}

void c3() {
  EntryResult r = run_timed("inc_race_ctx", Verdict::Tag::Counterexample, std::nullopt, 60);
  const Verdict &v = r.verdicts.front();
  require(v.right_complete, "right search incomplete");
  require(v.left_outcome.has_value(), "no left outcome");
  const Config c = replay(v.left_program, v.left_outcome->trace);
  require(c.threads.front() == Expr::boolean(true), "replayed value is not true");
  // Cells: 0 the shared counter, 1 the result channel of the forked call.
  require(c.heap.cells.size() >= 2, "replayed heap too small");
  require(c.heap.cells[0] == Val(Expr::integer(1)), "counter was not lost-updated to 1");
  require(c.heap.cells[1] == Val(Expr::inr(Expr::integer(0))), "forked call did not return 0");
}

void c4() {
  for (const char *n : {"coin_lazy_eager", "coin_lazy_instr", "coin_instr_eager"}) {
    require(entry(n).bounds.arg_budget == 2, std::string(n) + ": arg budget is not 2");
    run_timed(n, Verdict::Tag::NoCounterexample, std::nullopt, 60);
  }
  require(entry("coin_lazy_eager").mode == EntryMode::Equiv, "coin_lazy_eager is not checked both ways");
}

void c5() {
  const Clock::time_point t0 = Clock::now();
  for (const char *n : {"oplus_idem", "oplus_comm", "oplus_assoc", "oplus_unit", "oplus_dist_seq_right",
                        "oplus_dist_seq_left"}) {
    require(entry(n).mode == EntryMode::Equiv, std::string(n) + ": not checked both ways");
    EntryResult r = run_timed(n, Verdict::Tag::NoCounterexample, std::nullopt, 30);
    require(r.verdicts.size() == 2, std::string(n) + ": expected two directions");
  }
  require(elapsed(t0) < 30, "laws took longer than 30s");
}

void c6() {
  int n = 0;
  for (const CorpusEntry &e : corpus().entries) {
    if (e.mode != EntryMode::Ctx || e.name.rfind("lock_", 0) != 0) continue;
    run_timed(e.name, Verdict::Tag::NoCounterexample, std::nullopt, 300);
    ++n;
  }
  require(n >= 2, "no lock context entries");
}

void c7() {
  int n = 0;
  for (const Source &s : corpus_programs(RELOC_CORPUS_DIR)) {
    for (bool concurrent : {false, true}) {
      CheckBounds b;
      b.concurrent_calls = concurrent;
      const Verdict v = check_reflexive(s.program, b);
      require(v.tag != Verdict::Tag::Counterexample, s.origin + ": " + v.message);
    }
    ++n;
  }
  require(n >= 10, "too few corpus programs");
}

std::set<std::string> normalized(const ExploreReport &r) {
  std::set<std::string> out;
  for (const Outcome &o : r.outcomes) out.insert(oracle::normalize_outcome(o.value, o.heap));
  return out;
}

void c8() {
  oracle::Rng rng(20261016);
  int compared = 0;
  int attempts = 0;
  while (compared < 50) {
    require(++attempts < 5000, "generator rarely yields programs of at most 10 steps");
    const Expr e = oracle::random_small_program(rng);
    const oracle::NaiveReport naive = oracle::naive_explore(e, 10);
    if (naive.step_bound_hit || naive.longest_path > 10) continue;
    ++compared;
    const ExploreReport r = explore_all(e);
    require(r.complete, "incomplete: " + pretty(e));
    require(normalized(r) == naive.outcomes, "outcome sets differ: " + pretty(e));
    require(r.stuck.empty() != naive.stuck, "stuckness differs: " + pretty(e));
  }
}

std::map<std::string, std::string> corpus_fingerprint(const char *workers) {
  setenv("RELOC_WORKERS", workers, 1);
  std::map<std::string, std::string> out;
  for (const CorpusEntry &e : corpus().entries) {
    CorpusEntry copy = e;
    copy.bounds.workers = 0;
    const EntryResult r = run_entry(copy);
    std::string fp = to_string(r.tag);
    for (const Verdict &v : r.verdicts) fp += verdict_to_json(v).dump();
    out[e.name] = fp;
  }
  for (const Source &s : corpus_programs(RELOC_CORPUS_DIR)) {
    out["run:" + s.origin] = report_to_json(explore_all(s.program.body)).dump();
  }
  return out;
}

void c9() {
  const auto one = corpus_fingerprint("1");
  const auto eight = corpus_fingerprint("8");
  unsetenv("RELOC_WORKERS");
  for (const auto &[name, fp] : one) require(eight.at(name) == fp, name + ": differs between 1 and 8 workers");
}

void c10() {
  oracle::Rng rng(1016);
  for (int i = 0; i < 1000; ++i) {
    const Expr e = oracle::random_surface_expr(rng, 6);
    const std::string text = pretty(e);
    Expr back;
    try {
      back = parse_expr(text);
    } catch (const ParseError &err) {
      throw Failure{std::string("reparse failed: ") + err.what()};
    }
    require(back == e, "round trip changed: " + text);
  }
}

void c11() {
  std::map<std::string, std::pair<int, int>> seen;
  bool cas_eqtype = false;
  for (const oracle::TypingCase &c : oracle::typing_cases()) {
    if (auto err = oracle::run_typing_case(c)) throw Failure{c.rule + ": " + *err};
    (c.positive ? seen[c.rule].first : seen[c.rule].second)++;
    cas_eqtype |= c.rule == "cas-typed" && !c.positive && c.expected_error == TypeError::Kind::EqTypeViolation;
  }
  for (const char *rule : {"var-typed", "proj-typed", "rec-typed", "tlam-typed", "tapp-typed", "tpack-typed",
                           "tunpack-typed", "fold-typed", "unfold-typed", "alloc-typed", "load-typed", "store-typed",
                           "cas-typed", "fork-typed"}) {
    require(seen[rule].first > 0 && seen[rule].second > 0, std::string(rule) + " lacks a case");
  }
  require(cas_eqtype, "no EqType rejection case for CAS");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"bit module refines both ways, complete", c1},
      {"counter modules at budget 3 with concurrent calls", c2},
      {"increment race counterexample replays", c3},
      {"coin modules and instrumented chain", c4},
      {"nondeterministic choice laws both ways", c5},
      {"ticket lock contexts", c6},
      {"corpus self-refinement", c7},
      {"explorer matches naive enumerator", c8},
      {"verdicts independent of worker count", c9},
      {"pretty/parse round trip", c10},
      {"typing rules both polarities", c11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Clock::time_point t0 = Clock::now();
    std::string why;
    try {
      criteria[i].second();
    } catch (const Failure &f) {
      why = f.why;
    } catch (const std::exception &e) {
      why = std::string("exception: ") + e.what();
    }
    failed += why.empty() ? 0 : 1;
    std::cout << fmt::format("criterion {:2}: {} {} ({:.2f}s){}{}\n", i + 1, why.empty() ? "PASS" : "FAIL",
                             criteria[i].first, elapsed(t0), why.empty() ? "" : ": ", why);
  }
  return failed == 0 ? 0 : 1;
}
