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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gadtparam/completion.hpp"
#include "gadtparam/kernel.hpp"
#include "gadtparam/printer.hpp"
#include "gadtparam/relations.hpp"
#include "gadtparam/term.hpp"

namespace gadtparam {

enum class LiftMode { Naive, Completion };
enum class Verdict { Related, NotRelated, Inconclusive };

const char *to_string(LiftMode m);
const char *to_string(Verdict v);
std::optional<LiftMode> parse_mode(const std::string &s);

struct LiftRule {
  std::string ctor;
  std::string name;  // ĉlift
  std::vector<std::string> vars;
  std::vector<std::string> rel_names;  // one per var
  std::vector<Type> args;
  std::vector<bool> recursive;
  std::vector<Type> conclusion;  // Ψ̄
};

struct LiftRuleSet {
  std::string decl;       // declaration the rules range over (G or G_c)
  std::string family;     // Seqlift, ...
  LiftMode mode = LiftMode::Naive;
  std::vector<LiftRule> rules;
};

LiftRuleSet derive_rules(const CheckedDecl &decl, LiftMode mode, const Env &env);
std::string print_rules(const LiftRuleSet &rs, PrintOptions opts = {});

struct Derivation {
  std::string decl;
  std::string ctor;
  std::string rule;
  Term lhs, rhs;
  std::vector<Rel> target;
  std::vector<std::pair<std::string, Rel>> chosen;  // per quantified variable
  std::vector<std::string> existential;             // subset of chosen searched for
  std::vector<Type> args;                           // rule argument types
  std::vector<bool> recursive;
  // One per recursive argument, in argument order.
  std::vector<Derivation> children;
};

struct LiftResult {
  Verdict verdict = Verdict::NotRelated;
  std::optional<Derivation> witness;
  std::string note;  // cap diagnostics for Inconclusive
};

// Decides Ĝ R̄ x y. Completion mode restricts the lifting of G_c along ι.
class Lifter {
 public:
  Lifter(const CheckedDecl &decl, LiftMode mode, const Env &env);
  ~Lifter();
  Lifter(const Lifter &) = delete;
  Lifter &operator=(const Lifter &) = delete;

  LiftMode mode() const;
  // G in naive mode, G_c in completion mode.
  const CheckedDecl &rule_decl() const;
  const CompletedDecl *completion() const;

  // Maps a term of G into the terms the rules range over.
  Term prepare(const Term &x) const;

  Verdict check(const Term &x, const Term &y, const std::vector<Rel> &rels);
  LiftResult check_with_witness(const Term &x, const Term &y, const std::vector<Rel> &rels);
  // As above for prepared terms.
  Verdict check_prepared(const Term &x, const Term &y, const std::vector<Rel> &rels,
                         bool memoize = true);
  LiftResult witness_prepared(const Term &x, const Term &y, const std::vector<Rel> &rels);

  // Last cap diagnostic seen by the search.
  const std::string &last_note() const;
  void clear_memo();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LiftResult lift_check(const CheckedDecl &decl, LiftMode mode, const Rel &r, const Term &x,
                      const Term &y, const Env &env, bool witness = false);

// {(x, y) | Ĝ R x y} over enumerated values; CapError on any Inconclusive cell.
Rel lift_relation(const CheckedDecl &decl, LiftMode mode, const Rel &r, int depth,
                  const Env &env);

// Relation a type pattern denotes under a choice of relations for its variables.
Rel materialize(const Type &pattern, const std::map<std::string, Rel> &rho,
                const TypeSubst &sx, const TypeSubst &sy, const Env &env);
bool relate_type(const Type &pattern, const std::map<std::string, Rel> &rho, const Term &a,
                 const Term &b, const Env &env);

struct ReplayResult {
  bool ok = true;
  std::string error;
};
// Re-validates every rule application and leaf fact, independent of the search.
ReplayResult replay(const Derivation &d, const Env &env, const CheckedDecl &rule_decl);

// Nested notation followed by a legend of the relations used.
std::string print_witness(const Derivation &d, PrintOptions opts = {});

}  // namespace gadtparam
