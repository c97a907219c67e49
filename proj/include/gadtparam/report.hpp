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


#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gadtparam/analyses.hpp"
#include "gadtparam/lifting.hpp"
#include "gadtparam/relations.hpp"

namespace gadtparam {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

Json to_json(const Type &ty);
Json to_json(const Term &t);
// {"src", "tgt", "pairs": [[a, b], ...]} with pairs in term order
Json to_json(const Rel &r);
Json to_json(const Derivation &d);
Json to_json(const PreservationWitness &w);
Json to_json(const InclusionReport &r);
Json to_json(const GmapResult &r);
Json to_json(const AuditFailure &f);
Json to_json(const FreeTheoremReport &r);

// Top-level document shared by every subcommand.
struct Report {
  std::string command;
  std::string verdict;
  std::vector<std::string> universe;
  Json witnesses = Json::array();
  Json details = Json::object();
  double elapsed_ms = 0;
};

Json to_json(const Report &r, bool with_timings = true);

}  // namespace gadtparam
