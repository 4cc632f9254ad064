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


#ifndef RELOC_CORPUS_HPP_
#define RELOC_CORPUS_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reloc/json_io.hpp"
#include "reloc/parser.hpp"
#include "reloc/refine.hpp"

namespace reloc {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EntryMode : std::uint8_t { Refine, Equiv, Ctx };

const char *to_string(EntryMode m);

/** A program with the name it is reported under (file name or "inline"). */
struct Source {
  std::string origin;
  Program program;
};

struct CorpusEntry {
  std::string name;
  EntryMode mode = EntryMode::Refine;
  Source left;
  Source right;
  Type type;  // module type, or hole type in ctx mode
  std::vector<Rel> witnesses;
  std::optional<Source> context;
  CtxMode ctx_mode = CtxMode::Plain;
  Verdict::Tag expect = Verdict::Tag::NoCounterexample;
  std::optional<bool> expect_complete;
  CheckBounds bounds;
  std::string note;
};

struct Corpus {
  std::filesystem::path dir;
  std::vector<CorpusEntry> entries;
};

/** Reads a `.rl` file. Throws CorpusError or ParseError. */
Source load_source(const std::filesystem::path &file);

/** Reads a relation JSON file. */
Rel load_rel(const std::filesystem::path &file);

/**
 * Loads `dir/manifest.json`. Sources are parsed but not typechecked;
 * run_entry does that.
 */
Corpus load_corpus(const std::filesystem::path &dir);

/** Every `.rl` program in `dir` (not recursive) that declares a type. */
std::vector<Source> corpus_programs(const std::filesystem::path &dir);

struct EntryResult {
  std::string name;
  EntryMode mode = EntryMode::Refine;
  /** One verdict; two for Equiv (left-to-right, then right-to-left). */
  std::vector<Verdict> verdicts;
  /** Combined tag: any Counterexample, else any Inconclusive, else NoCounterexample. */
  Verdict::Tag tag = Verdict::Tag::NoCounterexample;
  bool complete = true;
  bool pass = false;
  std::string error;  // type or parse error, when the entry could not run
  double seconds = 0;
};

/** Typechecks both sides (and the context) and runs the check. */
EntryResult run_entry(const CorpusEntry &entry);

Json entry_result_to_json(const EntryResult &r, const CorpusEntry &entry);

/** Self-refinement of a typed program; existentials get opaque witnesses. */
Verdict check_reflexive(const Program &p, const CheckBounds &bounds);

}  // namespace reloc

#endif  // RELOC_CORPUS_HPP_
