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


#include "reloc/json_io.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "reloc/parser.hpp"

namespace reloc {

namespace {

Json expr_to_json(const Expr &e) {
  switch (e.kind()) {
    case ExprKind::Unit:
      return Json{{"unit", nullptr}};
    case ExprKind::Bool:
      return Json{{"bool", e.bool_value()}};
    case ExprKind::Int:
      return Json{{"int", e.int_value()}};
    case ExprKind::Loc:
      return Json{{"loc", e.loc_id()}};
    case ExprKind::Proph:
      return Json{{"proph", e.proph_id()}};
    case ExprKind::Pair:
      return Json{{"pair", Json::array({expr_to_json(e.child(0)), expr_to_json(e.child(1))})}};
    case ExprKind::Inl:
      return Json{{"inl", expr_to_json(e.child(0))}};
    case ExprKind::Inr:
      return Json{{"inr", expr_to_json(e.child(0))}};
    case ExprKind::Fold:
      return Json{{"fold", expr_to_json(e.child(0))}};
    default:
      return Json{{"expr", pretty(e)}};
  }
}

Expr expr_from_json(const Json &j) {
  if (!j.is_object() || j.size() != 1) {
    throw JsonFormatError(fmt::format("expected a single-key value object, got {}", j.dump()));
  }
  const auto &[key, v] = *j.items().begin();
  try {
    if (key == "unit") return Expr::unit();
    if (key == "bool") return Expr::boolean(v.get<bool>());
    if (key == "int") return Expr::integer(v.get<std::int64_t>());
    if (key == "loc") return Expr::loc(v.get<std::size_t>());
    if (key == "proph") return Expr::proph(v.get<std::size_t>());
    if (key == "pair") {
      if (!v.is_array() || v.size() != 2) throw JsonFormatError("pair needs two components");
      return Expr::pair(expr_from_json(v[0]), expr_from_json(v[1]));
    }
    if (key == "inl") return Expr::inl(expr_from_json(v));
    if (key == "inr") return Expr::inr(expr_from_json(v));
    if (key == "fold") return Expr::fold(expr_from_json(v));
    if (key == "expr") return erase_ascriptions(parse_expr(v.get<std::string>()));
  } catch (const nlohmann::json::exception &ex) {
    throw JsonFormatError(fmt::format("bad `{}` value: {}", key, ex.what()));
  }
  throw JsonFormatError(fmt::format("unknown value tag `{}`", key));
}

constexpr std::array<RuleTag, 9> kAllTags = {RuleTag::Pure,   RuleTag::Alloc,  RuleTag::Load,
                                             RuleTag::Store,  RuleTag::CasFail, RuleTag::CasSuc,
                                             RuleTag::Fork,   RuleTag::NewProph, RuleTag::Resolve};

}  // namespace

Json value_to_json(const Val &v) { return expr_to_json(v.expr()); }

Val value_from_json(const Json &j) {
  Expr e = expr_from_json(j);
  if (!e.is_value()) throw JsonFormatError(fmt::format("not a value: {}", j.dump()));
  return Val(std::move(e));
}

Rel rel_from_json(const Json &j) {
  if (!j.is_object()) throw JsonFormatError("relation must be an object");
  Rel r;
  r.name = j.value("name", std::string("R"));
  r.opaque = j.value("opaque", false);
  if (j.contains("pairs")) {
    if (r.opaque) throw JsonFormatError(fmt::format("relation {}: opaque relations have no pairs", r.name));
    for (const Json &p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw JsonFormatError(fmt::format("relation {}: pairs are [v1, v2]", r.name));
      r.pairs.emplace_back(value_from_json(p[0]), value_from_json(p[1]));
    }
  } else if (!r.opaque) {
    throw JsonFormatError(fmt::format("relation {} has neither pairs nor opaque", r.name));
  }
  return r;
}

Json rel_to_json(const Rel &r) {
  Json j{{"name", r.name}};
  if (r.opaque) {
    j["opaque"] = true;
    return j;
  }
  Json pairs = Json::array();
  for (const auto &[a, b] : r.pairs) pairs.push_back(Json::array({value_to_json(a), value_to_json(b)}));
  j["pairs"] = std::move(pairs);
  return j;
}

Json heap_to_json(const Heap &h) {
  Json out = Json::array();
  for (const Val &v : h.cells) out.push_back(value_to_json(v));
  return out;
}

Json trace_to_json(const Trace &t) {
  Json out = Json::array();
  for (const TraceStep &s : t) out.push_back(Json::array({s.thread, to_string(s.tag)}));
  return out;
}

Trace trace_from_json(const Json &j) {
  Trace t;
  for (const Json &s : j) {
    if (!s.is_array() || s.size() != 2) throw JsonFormatError("trace steps are [thread, rule]");
    const std::string tag = s[1].get<std::string>();
    auto it = std::find_if(kAllTags.begin(), kAllTags.end(), [&](RuleTag r) { return tag == to_string(r); });
    if (it == kAllTags.end()) throw JsonFormatError(fmt::format("unknown rule `{}`", tag));
    t.push_back(TraceStep{s[0].get<std::size_t>(), *it});
  }
  return t;
}

Json outcome_to_json(const Outcome &o) {
  return Json{{"value", value_to_json(o.value)}, {"heap", heap_to_json(o.heap)}, {"trace", trace_to_json(o.trace)}};
}

Json stuck_to_json(const StuckThread &s) {
  Json threads = Json::array();
  for (const Expr &t : s.config.threads) threads.push_back(pretty(t));
  return Json{{"thread", s.thread},
              {"redex", pretty(s.redex)},
              {"threads", std::move(threads)},
              {"heap", heap_to_json(s.config.heap)},
              {"trace", trace_to_json(s.trace)}};
}

Json report_to_json(const ExploreReport &r) {
  Json outcomes = Json::array();
  for (const Outcome &o : r.outcomes) outcomes.push_back(outcome_to_json(o));
  Json stuck = Json::array();
  for (const StuckThread &s : r.stuck) stuck.push_back(stuck_to_json(s));
  return Json{{"outcomes", std::move(outcomes)},
              {"complete", r.complete},
              {"boundHit", to_string(r.bound_hit)},
              {"stuck", std::move(stuck)},
              {"statesVisited", r.states_visited}};
}

Json verdict_to_json(const Verdict &v) {
  Json j{{"verdict", to_string(v.tag)},
         {"complete", v.complete},
         {"message", v.message},
         {"statesVisited", v.states_visited},
         {"clientsChecked", v.clients_checked},
         {"boundHit", to_string(v.bound_hit)}};
  if (v.tag == Verdict::Tag::Counterexample) {
    Json cx{{"client", v.client}, {"stuck", v.stuck}, {"leftProgram", pretty(v.left_program)},
            {"rightProgram", pretty(v.right_program)}, {"rightComplete", v.right_complete}};
    if (v.left_outcome) cx["leftOutcome"] = outcome_to_json(*v.left_outcome);
    if (v.left_stuck) cx["leftStuck"] = stuck_to_json(*v.left_stuck);
    Json rv = Json::array();
    for (const Val &x : v.right_values) rv.push_back(value_to_json(x));
    cx["rightValues"] = std::move(rv);
    j["counterexample"] = std::move(cx);
  }
  return j;
}

}  // namespace reloc
