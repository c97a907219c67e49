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
#include <string_view>
#include <variant>
#include <vector>

#include "gadtparam/kernel.hpp"
#include "gadtparam/printer.hpp"
#include "gadtparam/relations.hpp"
#include "gadtparam/term.hpp"

namespace gadtparam {

struct NamedTerm {
  std::string name;
  Term value;  // plain values and function tables alike

  friend bool operator==(const NamedTerm &, const NamedTerm &) = default;
};

struct NamedRel {
  std::string name;
  Rel value;

  friend bool operator==(const NamedRel &, const NamedRel &) = default;
};

using SourceItem = std::variant<DataDecl, NamedTerm, NamedRel>;

// A parsed .gadt file: declarations and `let` bindings, in source order.
struct SourceFile {
  std::string path;
  std::string text;
  std::vector<SourceItem> items;

  const Term *find_term(const std::string &name) const;
  const Rel *find_rel(const std::string &name) const;
  std::vector<DataDecl> decls() const;
};

// Names visible to term literals (earlier `let` bindings).
struct Scope {
  std::vector<NamedTerm> terms;
  std::vector<NamedRel> rels;
};

// Declarations only; no kind checking.
std::vector<DataDecl> parse_decls(std::string_view text);

// Parses a whole file, kind-checks its declarations into `env` and
// type-checks every binding.
SourceFile parse_source(std::string_view text, Env &env, std::string path = {});

Type parse_type(std::string_view text, const Env &env);
Term parse_term(std::string_view text, const Env &env, const Scope &scope = {});
Rel parse_rel(std::string_view text, const Env &env, const Scope &scope = {});
Term parse_fun(std::string_view text, const Env &env, const Scope &scope = {});

// Round-trippable rendering of a file item.
std::string print(const SourceItem &item, PrintOptions opts = {});
std::string print(const SourceFile &file, PrintOptions opts = {});

}  // namespace gadtparam
