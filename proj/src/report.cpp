// Copyright 2026 The gadtparam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "gadtparam/report.hpp"

#include <algorithm>

#include "gadtparam/printer.hpp"

namespace gadtparam {

Json to_json(const Type &ty) { return to_string(ty); }

Json to_json(const Term &t) { return to_string(t); }

Json to_json(const Rel &r) {
  Json pairs = Json::array();
  for (const auto &[a, b] : r.pairs()) pairs.push_back({to_string(a), to_string(b)});
  return {{"src", to_string(r.src())}, {"tgt", to_string(r.tgt())}, {"pairs", pairs}};
}

Json to_json(const Derivation &d) {
  Json chosen = Json::array();
  for (const auto &[v, r] : d.chosen)
    chosen.push_back({{"var", v},
                      {"existential", std::find(d.existential.begin(), d.existential.end(),
                                                v) != d.existential.end()},
                      {"rel", to_json(r)}});
  Json kids = Json::array();
  for (const auto &c : d.children) kids.push_back(to_json(c));
  return {{"rule", d.rule},     {"ctor", d.ctor},     {"lhs", to_json(d.lhs)},
          {"rhs", to_json(d.rhs)}, {"chosen", chosen}, {"children", kids}};
}

Json to_json(const PreservationWitness &w) {
  Json j = {{"r", to_json(w.r)}, {"s", to_json(w.s)}, {"x", to_json(w.x)}, {"y", to_json(w.y)}};
  if (w.related_under_r) j["derivation"] = to_json(*w.related_under_r);
  return j;
}

Json to_json(const InclusionReport &r) {
  Json v = Json::array();
  for (const auto &[x, y] : r.violations) v.push_back({to_string(x), to_string(y)});
  Json j = {{"r", to_json(r.r)},
            {"s", to_json(r.s)},
            {"r_included", r.r_included},
            {"violations", v},
            {"inconclusive", r.inconclusive}};
  if (r.first) j["first"] = to_json(*r.first);
  return j;
}

Json to_json(const GmapResult &r) {
  Json j = {{"status", to_string(r.status)}, {"candidates", r.candidates}};
  if (r.value) j["value"] = to_json(*r.value);
  if (r.witness) j["derivation"] = to_json(*r.witness);
  if (r.other) j["other"] = to_json(*r.other);
  if (r.other_witness) j["other_derivation"] = to_json(*r.other_witness);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const AuditFailure &f) {
  return {{"r", to_json(f.r)},   {"a", to_json(f.a)},   {"b", to_json(f.b)},
          {"fa", to_json(f.fa)}, {"fb", to_json(f.fb)}, {"delta_instance", f.delta_instance}};
}

Json to_json(const FreeTheoremReport &r) {
  Json j = {{"candidate", r.candidate},
            {"verdict", to_string(r.verdict)},
            {"audited", r.audited},
            {"delta_instances", r.delta_instances}};
  if (r.failure) j["failure"] = to_json(*r.failure);
  if (r.counterexample)
    j["counterexample"] = {{"a", to_json(r.counterexample->first)},
                           {"value", to_json(r.counterexample->second)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const Report &r, bool with_timings) {
  Json j = {{"schema_version", kReportSchemaVersion},
            {"command", r.command},
            {"verdict", r.verdict},
            {"universe", r.universe},
            {"witnesses", r.witnesses},
            {"details", r.details}};
  if (with_timings) j["timings"] = {{"total_ms", r.elapsed_ms}};
  return j;
}

}  // namespace gadtparam
