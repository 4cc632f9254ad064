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


#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "reloc/corpus.hpp"
#include "reloc/json_io.hpp"
#include "reloc/parser.hpp"

namespace reloc {
namespace {

namespace fs = std::filesystem;

const fs::path kCorpus = RELOC_CORPUS_DIR;

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
CliResult cli(const std::string &args) {
  const std::string cmd = std::string(RELOC_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE *p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p) != nullptr) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path &p) { return "'" + p.string() + "'"; }

TEST(JsonIo, ValuesRoundTrip) {
  for (const char *src : {"()", "true", "-3", "(1, (false, ()))", "inl (inr 4)", "fold (inl ())"}) {
    const Val v(parse_expr(src));
    EXPECT_EQ(value_from_json(value_to_json(v)), v) << src;
  }
  const Val l(Expr::loc(3));
  EXPECT_EQ(value_from_json(value_to_json(l)), l);
  EXPECT_EQ(value_to_json(Val(parse_expr("7"))), Json({{"int", 7}}));
}

TEST(JsonIo, RelationsRoundTrip) {
  const Rel r = load_rel(kCorpus / "R_bit.json");
  EXPECT_EQ(r.name, "R_bit");
  ASSERT_EQ(r.pairs.size(), 2u);
  const Rel back = rel_from_json(rel_to_json(r));
  EXPECT_EQ(back.name, r.name);
  EXPECT_EQ(back.pairs, r.pairs);
  const Rel o = rel_from_json(Json::parse(R"({"name": "lock", "opaque": true})"));
  EXPECT_TRUE(o.opaque);
}

TEST(JsonIo, MalformedInputIsRejected) {
  EXPECT_THROW(value_from_json(Json::parse(R"({"float": 1.5})")), JsonFormatError);
  EXPECT_THROW(value_from_json(Json::parse("[1, 2]")), JsonFormatError);
  EXPECT_THROW(rel_from_json(Json::parse(R"({"name": "r"})")), JsonFormatError);
  EXPECT_THROW(rel_from_json(Json::parse(R"({"name": "r", "opaque": true, "pairs": []})")), JsonFormatError);
  EXPECT_EQ(rel_from_json(Json::parse(R"({"pairs": []})")).name, "R");
  EXPECT_THROW(rel_from_json(Json::parse(R"({"name": "r", "pairs": [[{"int": 1}]]})")), JsonFormatError);
}

TEST(JsonIo, TraceRoundTrip) {
  const Trace t = explore_all(parse_expr("let x = ref 0 in fork { x <- 1 }; !x"), Bounds{}).outcomes.front().trace;
  EXPECT_EQ(trace_from_json(trace_to_json(t)), t);
}

TEST(Corpus, LoadsAndEveryEntryMatches) {
  const Corpus c = load_corpus(kCorpus);
  EXPECT_GE(c.entries.size(), 20u);
  for (const CorpusEntry &e : c.entries) {
    const EntryResult r = run_entry(e);
    EXPECT_TRUE(r.error.empty()) << e.name << ": " << r.error;
    EXPECT_TRUE(r.pass) << e.name << ": expected " << to_string(e.expect) << ", got " << to_string(r.tag);
  }
}

TEST(Corpus, ProgramsDeclareTypes) {
  const auto progs = corpus_programs(kCorpus);
  EXPECT_GE(progs.size(), 10u);
  for (const Source &s : progs) EXPECT_TRUE(s.program.declared_type) << s.origin;
}

TEST(Corpus, ChangedExpectationFails) {
  const Corpus c = load_corpus(kCorpus);
  CorpusEntry e = c.entries.front();
  ASSERT_EQ(e.name, "bit_bool_nat");
  e.expect = Verdict::Tag::Counterexample;
  EXPECT_FALSE(run_entry(e).pass);
  e.expect = Verdict::Tag::NoCounterexample;
  e.expect_complete = false;
  EXPECT_FALSE(run_entry(e).pass);
}

TEST(Corpus, BadManifestIsACorpusError) {
  const fs::path dir = fs::temp_directory_path() / "reloc_bad_manifest";
  fs::create_directories(dir);
  std::ofstream(dir / "manifest.json") << R"({"schema": 1, "entries": [{"name": "x", "mode": "sideways"}]})";
  EXPECT_THROW(load_corpus(dir), CorpusError);
  fs::remove_all(dir);
}

TEST(Cli, TypecheckExitCodes) {
  CliResult ok = cli("typecheck " + q(kCorpus / "bit_bool.rl") + " --expect TBit");
  EXPECT_EQ(ok.code, 0) << ok.out;
  CliResult wrong = cli("typecheck " + q(kCorpus / "bit_bool.rl") + " --expect int");
  EXPECT_EQ(wrong.code, 1) << wrong.out;
  CliResult cas = cli("typecheck " + q(kCorpus / "bad" / "cas_on_pairs.rl"));
  EXPECT_EQ(cas.code, 1);
  EXPECT_NE(cas.out.find("EqTypeViolation"), std::string::npos) << cas.out;
  CliResult unbound = cli("typecheck " + q(kCorpus / "bad" / "unbound_var.rl"));
  EXPECT_EQ(unbound.code, 1);
  EXPECT_NE(unbound.out.find("Unbound"), std::string::npos) << unbound.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("run " + q(kCorpus / "rand.rl")).code, 2);
  EXPECT_EQ(cli("typecheck /nonexistent/file.rl").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Cli, RunReportsOutcomes) {
  CliResult r = cli("run --all " + q(kCorpus / "rand.rl"));
  ASSERT_EQ(r.code, 0) << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["complete"], true);
  std::set<std::string> vals;
  for (const Json &o : j["outcomes"]) vals.insert(o["value"].dump());
  EXPECT_EQ(vals, (std::set<std::string>{R"({"bool":false})", R"({"bool":true})"}));

  CliResult d = cli("run --all --fuel 50 " + q(kCorpus / "diverge.rl"));
  ASSERT_EQ(d.code, 0) << d.out;
  const Json dj = Json::parse(d.out);
  EXPECT_TRUE(dj["outcomes"].empty());
  EXPECT_EQ(dj["complete"], false);
}

TEST(Cli, RefineExpectations) {
  const std::string args = "refine " + q(kCorpus / "bit_bool.rl") + " " + q(kCorpus / "bit_nat.rl") +
                           " --type TBit --witness " + q(kCorpus / "R_bit.json");
  CliResult good = cli(args + " --expect NoCounterexample");
  EXPECT_EQ(good.code, 0) << good.out;
  EXPECT_EQ(Json::parse(good.out)["checks"][0]["verdict"], "NoCounterexample");
  EXPECT_EQ(cli(args + " --expect Counterexample").code, 1);
  EXPECT_EQ(cli(args).code, 0);
}

TEST(Cli, ModuleTypeFromPragmas) {
  CliResult same = cli("refine " + q(kCorpus / "counter_i.rl") + " " + q(kCorpus / "counter_s.rl") +
                       " --arg-budget 3 --concurrent-calls --expect NoCounterexample");
  EXPECT_EQ(same.code, 0) << same.out;
  CliResult differ = cli("refine " + q(kCorpus / "rand.rl") + " " + q(kCorpus / "bit_nat.rl"));
  EXPECT_EQ(differ.code, 2) << differ.out;
}

TEST(Cli, CorpusFilterAndMismatchDiff) {
  CliResult coin = cli("corpus --filter coin");
  EXPECT_EQ(coin.code, 0) << coin.out;
  EXPECT_NE(coin.out.find("3 entries, 0 failed"), std::string::npos) << coin.out;

  const fs::path dir = fs::temp_directory_path() / "reloc_corrupt_corpus";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const char *f : {"bit_bool.rl", "bit_nat.rl", "R_bit.json"}) fs::copy_file(kCorpus / f, dir / f);
  std::ofstream(dir / "manifest.json") << R"({"schema": 1, "entries": [{"name": "bit", "mode": "refine",
    "left": "bit_bool.rl", "right": "bit_nat.rl", "type": "TBit", "witnesses": ["R_bit.json"],
    "expect": "Counterexample"}]})";
  CliResult bad = cli("corpus --dir " + q(dir));
  EXPECT_EQ(bad.code, 1) << bad.out;
  EXPECT_NE(bad.out.find("expected Counterexample"), std::string::npos) << bad.out;
  EXPECT_NE(bad.out.find("got NoCounterexample"), std::string::npos) << bad.out;
  fs::remove_all(dir);
}

}  // namespace
}  // namespace reloc
