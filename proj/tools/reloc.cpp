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


#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "reloc/corpus.hpp"
#include "reloc/explorer.hpp"
#include "reloc/json_io.hpp"
#include "reloc/parser.hpp"
#include "reloc/refine.hpp"
#include "reloc/typecheck.hpp"

#ifndef RELOC_DEFAULT_CORPUS_DIR
#define RELOC_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace {

using namespace reloc;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

struct CheckOptions {
  std::string type;
  std::vector<std::string> witnesses;
  std::vector<std::string> rels;
  std::size_t fuel = 0;
  std::size_t max_configs = 0;
  std::size_t max_threads = 0;
  std::size_t arg_budget = 3;
  std::size_t mu_depth = 8;
  bool concurrent_calls = false;
  std::string ctx;
  std::string ctx_mode = "plain";
  std::string expect;
  std::string json_out;
};

void add_check_options(CLI::App *cmd, CheckOptions &o, bool with_ctx) {
  cmd->add_option("--type", o.type, "Module type (hole type with --ctx)");
  cmd->add_option("--witness", o.witnesses, "Witness relation JSON for existentials, in order")->check(CLI::ExistingFile);
  cmd->add_option("--rel", o.rels, "Candidate relation JSON for universals (replaces the defaults)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--fuel", o.fuel, "Maximum steps per execution path");
  cmd->add_option("--max-configs", o.max_configs, "Maximum configurations per exploration");
  cmd->add_option("--max-threads", o.max_threads, "Maximum threads per configuration");
  cmd->add_option("--arg-budget", o.arg_budget, "Argument pairs per arrow domain and calls per client")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mu-depth", o.mu_depth, "Unfolding depth for recursive types")->check(CLI::PositiveNumber);
  cmd->add_flag("--concurrent-calls", o.concurrent_calls, "Also run pairs of calls on two threads");
  if (with_ctx) cmd->add_option("--ctx", o.ctx, "Context file; checks C[left] against C[right]")->check(CLI::ExistingFile);
  cmd->add_option("--ctx-mode", o.ctx_mode, "plain or true-adequate")->check(CLI::IsMember({"plain", "true-adequate"}));
  cmd->add_option("--expect", o.expect, "Expected verdict; exit 1 when it differs")
      ->check(CLI::IsMember({"NoCounterexample", "Counterexample", "Inconclusive"}));
  cmd->add_option("--json", o.json_out, "Also write the report to this file");
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Bounds explorer_bounds(const CheckOptions &o) {
  Bounds b;
  if (o.fuel != 0) b.max_steps = o.fuel;
  if (o.max_configs != 0) b.max_configs = o.max_configs;
  if (o.max_threads != 0) b.max_threads = o.max_threads;
  return b;
}

CheckBounds check_bounds(const CheckOptions &o) {
  CheckBounds b;
  b.left = b.right = explorer_bounds(o);
  b.arg_budget = o.arg_budget;
  b.mu_depth = o.mu_depth;
  b.concurrent_calls = o.concurrent_calls;
  for (const std::string &f : o.witnesses) b.witnesses.push_back(load_rel(f));
  if (!o.rels.empty()) {
    b.forall_candidates.clear();
    for (const std::string &f : o.rels) b.forall_candidates.push_back(load_rel(f));
  }
  return b;
}

Type resolve_type(const CheckOptions &o, const Program *fallback_hole) {
  if (!o.type.empty()) return parse_type(o.type);
  if (fallback_hole != nullptr && fallback_hole->hole_type) return *fallback_hole->hole_type;
  throw UsageError("--type is required");
}

// Without --type, both sides must declare the same #type.
Type module_type(const CheckOptions &o, const Program &l, const Program &r) {
  if (!o.type.empty()) return parse_type(o.type);
  if (l.declared_type && r.declared_type && *l.declared_type == *r.declared_type) return *l.declared_type;
  throw UsageError("--type is required unless both programs declare the same #type");
}

void emit(const Json &j, const std::string &json_out) {
  std::cout << j.dump(2) << "\n";
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) throw UsageError(fmt::format("cannot write {}", json_out));
    out << j.dump(2) << "\n";
  }
}

int verdict_exit(const std::vector<Verdict> &vs, const std::string &expect) {
  if (expect.empty()) return kOk;
  bool any_cx = false;
  bool any_inc = false;
  for (const Verdict &v : vs) {
    any_cx = any_cx || v.tag == Verdict::Tag::Counterexample;
    any_inc = any_inc || v.tag == Verdict::Tag::Inconclusive;
  }
  const char *got = any_cx ? "Counterexample" : (any_inc ? "Inconclusive" : "NoCounterexample");
  if (expect == got) return kOk;
  std::cerr << fmt::format("expected {}, got {}\n", expect, got);
  return kMismatch;
}

int cmd_typecheck(const std::string &file, const std::string &expect) {
  Source s = load_source(file);
  Type t = s.program.hole_type ? typecheck_context(TypeEnv{}, s.program.body, *s.program.hole_type)
                               : typecheck_program(s.program.body, s.program.declared_type);
  std::cout << pretty_type(t) << "\n";
  if (!expect.empty()) {
    Type want = parse_type(expect);
    if (want != t) {
      std::cerr << fmt::format("type mismatch: expected {}, got {}\n", pretty_type(want), pretty_type(t));
      return kMismatch;
    }
  }
  return kOk;
}

int cmd_run(const std::string &file, bool one, const CheckOptions &o) {
  Source s = load_source(file);
  Bounds b = explorer_bounds(o);
  b.cycle_is_step_bound = true;
  Json j{{"schema", 1}};
  if (one) {
    SearchResult r = search_outcome(s.program.body, [](const Val &, const Heap &) { return true; }, b);
    Json outs = Json::array();
    if (r.found) outs.push_back(outcome_to_json(*r.found));
    j["outcomes"] = std::move(outs);
    j["complete"] = r.complete;
    j["boundHit"] = to_string(r.bound_hit);
    j["statesVisited"] = r.states_visited;
  } else {
    const Json report = report_to_json(explore_all(s.program.body, b));
    for (const auto &[k, v] : report.items()) j[k] = v;
  }
  emit(j, o.json_out);
  return kOk;
}

int cmd_refine(const std::string &left, const std::string &right, const CheckOptions &o, bool equiv) {
  Source l = load_source(left);
  Source r = load_source(right);
  CheckBounds b = check_bounds(o);
  std::vector<Verdict> vs;
  Json j{{"schema", 1}, {"left", l.origin}, {"right", r.origin}};
  if (!o.ctx.empty()) {
    Source c = load_source(o.ctx);
    Type hole = resolve_type(o, &c.program);
    const CtxMode mode = o.ctx_mode == "plain" ? CtxMode::Plain : CtxMode::TrueAdequate;
    j["mode"] = "ctx";
    j["context"] = c.origin;
    j["type"] = pretty_type(hole);
    vs.push_back(check_ctx(c.program.body, l.program.body, r.program.body, hole, mode, b));
    if (equiv) vs.push_back(check_ctx(c.program.body, r.program.body, l.program.body, hole, mode, b));
  } else {
    Type t = module_type(o, l.program, r.program);
    check(TypeEnv{}, l.program.body, t);
    check(TypeEnv{}, r.program.body, t);
    j["mode"] = equiv ? "equiv" : "refine";
    j["type"] = pretty_type(t);
    vs.push_back(check_refinement(l.program.body, r.program.body, t, RelEnv{}, b));
    if (equiv) vs.push_back(check_refinement(r.program.body, l.program.body, t, RelEnv{}, b));
  }
  Json checks = Json::array();
  for (const Verdict &v : vs) checks.push_back(verdict_to_json(v));
  j["checks"] = std::move(checks);
  emit(j, o.json_out);
  return verdict_exit(vs, o.expect);
}

int cmd_corpus(const std::string &dir, const std::string &filter, const std::string &json_out) {
  Corpus c = load_corpus(dir);
  Json entries = Json::array();
  std::size_t run = 0;
  std::size_t failed = 0;
  double total = 0;
  for (const CorpusEntry &e : c.entries) {
    if (!filter.empty() && e.name.find(filter) == std::string::npos) continue;
    ++run;
    EntryResult r = run_entry(e);
    total += r.seconds;
    const std::string got = r.error.empty() ? to_string(r.tag) : "Error";
    std::cout << fmt::format("{:<32} {:<6} {:<17} complete={:<5} {:>8.3f}s  {}\n", e.name, to_string(e.mode), got,
                             r.complete, r.seconds, r.pass ? "ok" : "FAIL");
    if (!r.pass) {
      ++failed;
      std::cout << fmt::format("  expected {}{}, got {}{}\n", to_string(e.expect),
                               e.expect_complete ? fmt::format(" (complete={})", *e.expect_complete) : "", got,
                               r.error.empty() ? fmt::format(" (complete={})", r.complete) : ": " + r.error);
    }
    entries.push_back(entry_result_to_json(r, e));
  }
  std::cout << fmt::format("{} entries, {} failed, {:.3f}s\n", run, failed, total);
  if (!json_out.empty()) {
    Json j{{"schema", 1},
           {"entries", std::move(entries)},
           {"summary", {{"run", run}, {"failed", failed}, {"seconds", total}}}};
    std::ofstream out(json_out);
    if (!out) throw UsageError(fmt::format("cannot write {}", json_out));
    out << j.dump(2) << "\n";
  }
  return failed == 0 ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Typed concurrent HeapLang workbench: typechecker, interleaving explorer, refinement checker"};
  app.require_subcommand(1);

  std::string file;
  std::string expect;
  auto *tc = app.add_subcommand("typecheck", "Typecheck a program or context");
  tc->add_option("file", file, "Program file")->required()->check(CLI::ExistingFile);
  tc->add_option("--expect", expect, "Expected type");

  bool all = false;
  bool one = false;
  CheckOptions run_opts;
  auto *run = app.add_subcommand("run", "Explore all interleavings of a program");
  run->add_option("file", file, "Program file")->required()->check(CLI::ExistingFile);
  auto *all_flag = run->add_flag("--all", all, "Report every outcome");
  run->add_flag("--one", one, "Report the first outcome found")->excludes(all_flag);
  run->add_option("--fuel", run_opts.fuel, "Maximum steps per execution path");
  run->add_option("--max-configs", run_opts.max_configs, "Maximum configurations");
  run->add_option("--max-threads", run_opts.max_threads, "Maximum threads per configuration");
  run->add_option("--json", run_opts.json_out, "Also write the report to this file");

  std::string left;
  std::string right;
  CheckOptions ref_opts;
  auto *refine = app.add_subcommand("refine", "Bounded check of left refines right");
  refine->add_option("left", left)->required()->check(CLI::ExistingFile);
  refine->add_option("right", right)->required()->check(CLI::ExistingFile);
  add_check_options(refine, ref_opts, true);

  CheckOptions eq_opts;
  auto *equiv = app.add_subcommand("equiv", "Refinement in both directions");
  equiv->add_option("left", left)->required()->check(CLI::ExistingFile);
  equiv->add_option("right", right)->required()->check(CLI::ExistingFile);
  add_check_options(equiv, eq_opts, true);

  CheckOptions ctx_opts;
  std::string ctx_file;
  auto *ctx = app.add_subcommand("ctx", "Compare C[left] with C[right] for one context");
  ctx->add_option("context", ctx_file)->required()->check(CLI::ExistingFile);
  ctx->add_option("left", left)->required()->check(CLI::ExistingFile);
  ctx->add_option("right", right)->required()->check(CLI::ExistingFile);
  add_check_options(ctx, ctx_opts, false);

  std::string dir = RELOC_DEFAULT_CORPUS_DIR;
  std::string filter;
  std::string json_out;
  auto *corpus = app.add_subcommand("corpus", "Run the corpus and compare with expected verdicts");
  corpus->add_option("--dir", dir, "Corpus directory")->check(CLI::ExistingDirectory);
  corpus->add_option("--filter", filter, "Only entries whose name contains this");
  corpus->add_option("--json", json_out, "Write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*tc) return cmd_typecheck(file, expect);
    if (*run) {
      if (!all && !one) throw UsageError("run needs --all or --one");
      return cmd_run(file, one, run_opts);
    }
    if (*refine) return cmd_refine(left, right, ref_opts, false);
    if (*equiv) return cmd_refine(left, right, eq_opts, true);
    if (*ctx) {
      ctx_opts.ctx = ctx_file;
      return cmd_refine(left, right, ctx_opts, false);
    }
    if (*corpus) return cmd_corpus(dir, filter, json_out);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TypeError &e) {
    std::cerr << e.what() << "\n";
    return kMismatch;
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kMismatch;
  } catch (const CorpusError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const JsonFormatError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
