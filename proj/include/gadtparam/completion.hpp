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

#include <optional>
#include <string>
#include <vector>

#include "gadtparam/kernel.hpp"
#include "gadtparam/term.hpp"

namespace gadtparam {

struct CompletedCtor {
  std::string original;
  std::string completed;
  bool rewritten = false;
};

struct CompletedDecl {
  CheckedDecl original;
  CheckedDecl completed;
  std::vector<CompletedCtor> ctor_map;

  const CompletedCtor *by_original(const std::string &ctor) const;
  const CompletedCtor *by_completed(const std::string &ctor) const;
};

std::string completed_name(const std::string &decl_name);

CompletedDecl complete(const CheckedDecl &decl, const Env &env);

// Registers decl and its completion.
void add_with_completion(Env &env, const CheckedDecl &decl);
// nullopt if the completion was never registered.
std::optional<CompletedDecl> find_completion(const Env &env, const std::string &decl_name);

// ι: G Ā → G_c Ā
Term embed(const CompletedDecl &cd, const Term &x, const Env &env);
// Inverse of ι on its image; nullopt elsewhere.
std::optional<Term> unembed(const CompletedDecl &cd, const Term &x, const Env &env);

// map_{G_c} with one function per index.
Term map_completion(const CompletedDecl &cd, const std::vector<Term> &fs, const Term &x,
                    const Env &env);

}  // namespace gadtparam
