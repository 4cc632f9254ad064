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


#ifndef RELOC_JSON_IO_HPP_
#define RELOC_JSON_IO_HPP_

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "reloc/explorer.hpp"
#include "reloc/refine.hpp"

namespace reloc {

using Json = nlohmann::ordered_json;

class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Values in the witness format: {"unit":null}, {"bool":b}, {"int":n},
 * {"pair":[a,b]}, {"inl":v}, {"inr":v}, {"fold":v}, {"loc":n}, {"proph":n}.
 * Other values are written as {"expr": pretty-printed text}.
 */
Json value_to_json(const Val &v);
Val value_from_json(const Json &j);

/** {"name":..., "pairs":[[v1,v2],...]} or {"name":..., "opaque":true}. */
Rel rel_from_json(const Json &j);
Json rel_to_json(const Rel &r);

Json heap_to_json(const Heap &h);
Json trace_to_json(const Trace &t);
Trace trace_from_json(const Json &j);
Json outcome_to_json(const Outcome &o);
Json stuck_to_json(const StuckThread &s);

/** {"outcomes":[...], "complete", "boundHit", "stuck":[...], "statesVisited"}. */
Json report_to_json(const ExploreReport &r);
Json verdict_to_json(const Verdict &v);

}  // namespace reloc

#endif  // RELOC_JSON_IO_HPP_
