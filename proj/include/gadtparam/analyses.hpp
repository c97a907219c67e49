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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gadtparam/kernel.hpp"
#include "gadtparam/lifting.hpp"
#include "gadtparam/relations.hpp"
#include "gadtparam/term.hpp"

namespace gadtparam {

// ---------------------------------------------------------------- preservation

struct PreservationWitness {
  Rel r, s;
  Term x, y;
  std::optional<Derivation> related_under_r;
};

struct PreservationOptions {
  std::size_t max_witnesses = 3;
  // Reported separately when it falls inside the universe.
  std::optional<std::pair<Rel, Rel>> focus;
};

struct InclusionReport {
  Rel r, s;
  bool r_included = false;
  std::vector<std::pair<Term, Term>> violations;  // in Ĝ R, not in Ĝ S
  std::uint64_t inconclusive = 0;
  std::optional<PreservationWitness> first;
};

struct PreservationReport {
  std::string decl;
  LiftMode mode = LiftMode::Naive;
  int depth = 0;
  std::vector<Type> universe;
  std::uint64_t relations = 0;  // R's whose lifting was materialized
  std::uint64_t pairs = 0;      // R ⊆ S pairs compared
  std::uint64_t violations = 0;
  std::uint64_t inconclusive = 0;  // cells
  std::vector<std::string> notes;
  std::vector<PreservationWitness> witnesses;
  std::optional<InclusionReport> focus;

  bool passed() const { return violations == 0 && inconclusive == 0; }
  // PASS, FAIL or INCONCLUSIVE
  std::string verdict() const;
};

PreservationReport check_preservation(const CheckedDecl &decl, LiftMode mode,
                                      const std::vector<Type> &universe, int depth,
                                      const Env &env, const PreservationOptions &opts = {});

InclusionReport check_inclusion(const CheckedDecl &decl, LiftMode mode, const Rel &r,
                                const Rel &s, int depth, const Env &env);

// ---------------------------------------------------------------- gmap

enum class GmapStatus { Defined, Undefined, NonUnique, Inconclusive };
const char *to_string(GmapStatus s);

struct GmapResult {
  GmapStatus status = GmapStatus::Undefined;
  std::optional<Term> value;
  std::optional<Term> other;  // second partner when NonUnique
  std::optional<Derivation> witness;
  std::optional<Derivation> other_witness;
  std::size_t candidates = 0;
  std::string note;
};

// Same constructor tree as x, instances retargeted to cod, leaves from carriers.
std::vector<Term> shape_candidates(const CheckedDecl &decl, const Term &x, const Type &cod,
                                   const Env &env);

GmapResult gmap(const CheckedDecl &decl, const Term &f, const Term &x, const Env &env,
                LiftMode mode = LiftMode::Completion);

// ---------------------------------------------------------------- graph lemma

struct GraphLemmaCase {
  Term f;
  Term x;
  GmapResult result;
  std::optional<Term> expected;  // map_G f x for ADTs
};

struct GraphLemmaReport {
  std::string decl;
  int depth = 0;
  std::size_t functions = 0;
  std::size_t checked = 0;
  std::size_t defined = 0;
  std::size_t undefined = 0;
  std::size_t nonunique = 0;
  std::size_t inconclusive = 0;
  std::size_t map_mismatches = 0;  // ADTs only
  std::vector<GraphLemmaCase> failures;
  std::vector<std::string> notes;

  bool passed() const { return nonunique == 0 && inconclusive == 0 && map_mismatches == 0; }
};

// Values are enumerated at depth for each function's domain; extra values of
// matching type are added.
GraphLemmaReport check_graph_lemma(const CheckedDecl &decl, const std::vector<Term> &functions,
                                   int depth, const Env &env,
                                   const std::vector<Term> &extra_values = {});

// map_G f x for an ADT through its completion.
Term adt_map(const CheckedDecl &decl, const Term &f, const Term &x, const Env &env);

// ---------------------------------------------------------------- Seq-specific

struct SeqShape {
  std::string leaf;  // ∀{α} → α → G α
  std::string node;  // ∀{α₁ α₂} → G α₁ → G α₂ → G (α₁ × α₂)
};
std::optional<SeqShape> seq_shape(const CheckedDecl &decl);

struct MappableResult {
  bool mappable = false;
  std::optional<Term> result;
  std::string reason;
};
MappableResult mappable_structural(const CheckedDecl &decl, const Term &f, const Term &s,
                                   const Env &env);

bool contains_only(const CheckedDecl &decl, const Term &a, const Term &s);

// ---------------------------------------------------------------- free theorem

struct CandidatePoly {
  std::string name;
  // Per type A: a ↦ f_A a
  std::vector<std::pair<Type, std::vector<Term::Row>>> tables;

  const Term *apply(const Type &a, const Term &v) const;
  std::vector<Type> universe() const;
};

enum class FreeTheoremVerdict { Holds, Violated, NotApplicable, Inconclusive };
const char *to_string(FreeTheoremVerdict v);

struct AuditFailure {
  Rel r;
  Term a, b;
  Term fa, fb;
  bool delta_instance = false;
};

struct FreeTheoremReport {
  std::string candidate;
  FreeTheoremVerdict verdict = FreeTheoremVerdict::Holds;
  std::uint64_t audited = 0;  // (R, a, b) cells
  std::optional<AuditFailure> failure;
  std::vector<std::string> delta_instances;  // one line per (A, a)
  std::optional<std::pair<Term, Term>> counterexample;  // a, f_A a
  std::string note;
};

FreeTheoremReport check_free_theorem(const CheckedDecl &seq, const CandidatePoly &cand,
                                     const Env &env);

// All candidates over the universe whose values have depth ≤ depth.
std::vector<CandidatePoly> enumerate_candidates(const CheckedDecl &seq,
                                                const std::vector<Type> &universe, int depth,
                                                const Env &env);

// inj on {Unit, Bool}; inj with f_Bool true = inj false; componentwise pairing
// on {Bool × Bool}.
std::vector<CandidatePoly> example_candidates(const CheckedDecl &seq, const Env &env);

struct FreeTheoremSweep {
  std::size_t candidates = 0;
  std::size_t parametric = 0;
  std::size_t conclusion_holds = 0;  // among parametric
  std::size_t inconclusive = 0;
  std::vector<FreeTheoremReport> violations;
  bool passed() const { return violations.empty() && inconclusive == 0; }
};
FreeTheoremSweep sweep_free_theorem(const CheckedDecl &seq, const std::vector<Type> &universe,
                                    int depth, const Env &env);

}  // namespace gadtparam
