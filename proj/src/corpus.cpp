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


#include "reloc/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "reloc/typecheck.hpp"

namespace reloc {

namespace fs = std::filesystem;

const char *to_string(EntryMode m) {
  switch (m) {
    case EntryMode::Refine:
      return "refine";
    case EntryMode::Equiv:
      return "equiv";
    case EntryMode::Ctx:
      return "ctx";
  }
  return "?";
}

namespace {

std::string read_file(const fs::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CorpusError(fmt::format("cannot read {}", file.string()));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict::Tag parse_tag(const std::string &s) {
  for (auto t : {Verdict::Tag::NoCounterexample, Verdict::Tag::Counterexample, Verdict::Tag::Inconclusive}) {
    if (s == to_string(t)) return t;
  }
  throw CorpusError(fmt::format("unknown verdict `{}`", s));
}

class ManifestReader {
 public:
  ManifestReader(fs::path dir, const Json &manifest) : dir_(std::move(dir)) {
    if (manifest.contains("preludes")) {
      for (const auto &[k, v] : manifest.at("preludes").items()) preludes_[k] = v.get<std::string>();
    }
  }

  CorpusEntry entry(const Json &j) {
    CorpusEntry e;
    e.name = j.at("name").get<std::string>();
    try {
      const std::string mode = j.value("mode", std::string("refine"));
      if (mode == "refine") {
        e.mode = EntryMode::Refine;
      } else if (mode == "equiv") {
        e.mode = EntryMode::Equiv;
      } else if (mode == "ctx") {
        e.mode = EntryMode::Ctx;
      } else {
        throw CorpusError(fmt::format("unknown mode `{}`", mode));
      }
      e.left = source(j.at("left"));
      e.right = source(j.at("right"));
      e.type = parse_type(j.at("type").get<std::string>());
      if (j.contains("witnesses")) {
        for (const Json &w : j.at("witnesses")) {
          e.witnesses.push_back(w.is_string() ? load_rel(dir_ / w.get<std::string>()) : rel_from_json(w));
        }
      }
      if (j.contains("context")) e.context = source(j.at("context"));
      if (e.mode == EntryMode::Ctx && !e.context) throw CorpusError("ctx entries need a context");
      const std::string cm = j.value("ctx_mode", std::string("plain"));
      if (cm == "plain") {
        e.ctx_mode = CtxMode::Plain;
      } else if (cm == "true-adequate") {
        e.ctx_mode = CtxMode::TrueAdequate;
      } else {
        throw CorpusError(fmt::format("unknown ctx_mode `{}`", cm));
      }
      e.expect = parse_tag(j.at("expect").get<std::string>());
      if (j.contains("expect_complete")) e.expect_complete = j.at("expect_complete").get<bool>();
      e.note = j.value("note", std::string());
      e.bounds.witnesses = e.witnesses;
      if (j.contains("bounds")) apply_bounds(j.at("bounds"), e.bounds);
    } catch (const nlohmann::json::exception &ex) {
      throw CorpusError(fmt::format("entry {}: {}", e.name, ex.what()));
    } catch (const std::exception &ex) {
      throw CorpusError(fmt::format("entry {}: {}", e.name, ex.what()));
    }
    return e;
  }

 private:
  Source source(const Json &j) {
    if (j.is_string()) return load_source(dir_ / j.get<std::string>());
    std::string text = j.at("src").get<std::string>();
    if (j.contains("prelude")) {
      const std::string name = j.at("prelude").get<std::string>();
      auto it = preludes_.find(name);
      if (it == preludes_.end()) throw CorpusError(fmt::format("unknown prelude `{}`", name));
      text = it->second + "\n" + text;
    }
    return Source{"inline", parse_program(text)};
  }

  static void apply_bounds(const Json &j, CheckBounds &b) {
    for (const auto &[k, v] : j.items()) {
      if (k == "arg_budget") {
        b.arg_budget = v.get<std::size_t>();
      } else if (k == "mu_depth") {
        b.mu_depth = v.get<std::size_t>();
      } else if (k == "concurrent_calls") {
        b.concurrent_calls = v.get<bool>();
      } else if (k == "max_steps") {
        b.left.max_steps = b.right.max_steps = v.get<std::size_t>();
      } else if (k == "max_configs") {
        b.left.max_configs = b.right.max_configs = v.get<std::size_t>();
      } else if (k == "max_threads") {
        b.left.max_threads = b.right.max_threads = v.get<std::size_t>();
      } else {
        throw CorpusError(fmt::format("unknown bound `{}`", k));
      }
    }
  }

  fs::path dir_;
  std::map<std::string, std::string> preludes_;
};

}  // namespace

Source load_source(const fs::path &file) {
  return Source{file.filename().string(), parse_program(read_file(file))};
}

Rel load_rel(const fs::path &file) {
  try {
    return rel_from_json(Json::parse(read_file(file)));
  } catch (const nlohmann::json::exception &ex) {
    throw CorpusError(fmt::format("{}: {}", file.string(), ex.what()));
  }
}

Corpus load_corpus(const fs::path &dir) {
  Corpus c;
  c.dir = dir;
  Json manifest;
  try {
    manifest = Json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception &ex) {
    throw CorpusError(fmt::format("manifest.json: {}", ex.what()));
  }
  ManifestReader reader(dir, manifest);
  for (const Json &j : manifest.at("entries")) c.entries.push_back(reader.entry(j));
  return c;
}

std::vector<Source> corpus_programs(const fs::path &dir) {
  std::vector<fs::path> files;
  for (const auto &de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".rl") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Source> out;
  for (const fs::path &f : files) {
    Source s = load_source(f);
    if (s.program.declared_type) out.push_back(std::move(s));
  }
  return out;
}

EntryResult run_entry(const CorpusEntry &entry) {
  EntryResult r;
  r.name = entry.name;
  r.mode = entry.mode;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const TypeEnv empty;
    switch (entry.mode) {
      case EntryMode::Refine:
      case EntryMode::Equiv:
        check(empty, entry.left.program.body, entry.type);
        check(empty, entry.right.program.body, entry.type);
        if (entry.mode == EntryMode::Refine) {
          r.verdicts.push_back(
              check_refinement(entry.left.program.body, entry.right.program.body, entry.type, RelEnv{}, entry.bounds));
        } else {
          auto [a, b] = check_equivalence(entry.left.program.body, entry.right.program.body, entry.type, RelEnv{},
                                          entry.bounds);
          r.verdicts.push_back(std::move(a));
          r.verdicts.push_back(std::move(b));
        }
        break;
      case EntryMode::Ctx:
        r.verdicts.push_back(check_ctx(entry.context->program.body, entry.left.program.body,
                                       entry.right.program.body, entry.type, entry.ctx_mode, entry.bounds));
        break;
    }
  } catch (const std::exception &ex) {
    r.error = ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.error.empty()) return r;

  bool any_cx = false;
  bool any_inc = false;
  for (const Verdict &v : r.verdicts) {
    any_cx = any_cx || v.tag == Verdict::Tag::Counterexample;
    any_inc = any_inc || v.tag == Verdict::Tag::Inconclusive;
    r.complete = r.complete && v.complete;
  }
  r.tag = any_cx ? Verdict::Tag::Counterexample
                 : (any_inc ? Verdict::Tag::Inconclusive : Verdict::Tag::NoCounterexample);
  r.pass = r.tag == entry.expect && (!entry.expect_complete || *entry.expect_complete == r.complete);
  return r;
}

Json entry_result_to_json(const EntryResult &r, const CorpusEntry &entry) {
  Json j{{"name", r.name},
         {"mode", to_string(r.mode)},
         {"expect", to_string(entry.expect)},
         {"verdict", r.error.empty() ? to_string(r.tag) : "Error"},
         {"complete", r.complete},
         {"pass", r.pass},
         {"seconds", r.seconds}};
  if (entry.expect_complete) j["expectComplete"] = *entry.expect_complete;
  if (!r.error.empty()) j["error"] = r.error;
  std::size_t states = 0;
  Json vs = Json::array();
  for (const Verdict &v : r.verdicts) {
    states += v.states_visited;
    vs.push_back(verdict_to_json(v));
  }
  j["statesVisited"] = states;
  j["checks"] = std::move(vs);
  return j;
}

Verdict check_reflexive(const Program &p, const CheckBounds &bounds) {
  if (!p.declared_type) throw CorpusError("program has no declared type");
  typecheck_program(p.body, p.declared_type);
  CheckBounds b = bounds;
  Rel opaque;
  opaque.name = "self";
  opaque.opaque = true;
  b.witnesses = {opaque};
  return check_refinement(p.body, p.body, *p.declared_type, RelEnv{}, b);
}

}  // namespace reloc
