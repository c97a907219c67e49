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
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gadtparam/term.hpp"

namespace gadtparam {

// c : ∀ quantified. args → ... → Name ret_instance
struct CtorSig {
  std::string name;
  std::vector<std::string> quantified;
  std::vector<Type> args;
  std::vector<Type> ret_instance;

  friend bool operator==(const CtorSig &, const CtorSig &) = default;
};

struct DataDecl {
  std::string name;
  int arity = 1;
  std::vector<CtorSig> ctors;

  friend bool operator==(const DataDecl &, const DataDecl &) = default;
};

struct CheckedCtor {
  CtorSig sig;
  // Return instance is a vector of distinct variables covering `quantified`.
  bool variable_return = false;
  // Per argument: the argument is `Name τ̄` (a recursive occurrence).
  std::vector<bool> recursive;
  // Quantified variables that do not occur in the return instance.
  std::vector<std::string> existential;
};

struct CheckedDecl {
  DataDecl decl;
  std::vector<CheckedCtor> ctors;

  const std::string &name() const { return decl.name; }
  int arity() const { return decl.arity; }
  bool is_adt() const;
  const CheckedCtor *find(const std::string &ctor) const;
};

struct Caps {
  int max_carrier = 16;
  int max_depth = 3;
  std::int64_t max_rel_enum = 65536;

  // Relation spaces with more than this many pairs are never enumerated.
  int max_rel_bits() const;
};

// Upper bounds accepted for cap overrides.
inline constexpr Caps kHardCaps{4096, 8, std::int64_t{1} << 20};

class Env {
 public:
  explicit Env(Caps caps = {});

  const Caps &caps() const { return caps_; }
  void set_caps(const Caps &caps);

  // Type instantiations tried for constructor variables that the return
  // instance does not determine (enumeration and shape-directed search).
  const std::vector<Type> &existential_types() const { return existential_types_; }
  void set_existential_types(std::vector<Type> types) { existential_types_ = std::move(types); }

  void add(CheckedDecl decl);
  const CheckedDecl *find_decl(const std::string &name) const;
  // Declaration owning the constructor, or nullptr.
  const CheckedDecl *owner_of(const std::string &ctor) const;
  std::vector<std::string> decl_names() const;

  // Memoized carrier; see carrier().
  std::shared_ptr<const std::vector<Term>> cached_carrier(const Type &ty) const;

 private:
  Caps caps_;
  std::vector<Type> existential_types_;
  std::map<std::string, std::shared_ptr<const CheckedDecl>> decls_;
  std::map<std::string, std::string> ctor_owner_;

  struct CarrierCache {
    std::mutex mu;
    std::unordered_map<Type, std::shared_ptr<const std::vector<Term>>> map;
  };
  std::shared_ptr<CarrierCache> carriers_;
};

CheckedDecl kind_check(const DataDecl &decl, const Env &env);

// The unique closed type of a term.
Type type_of(const Term &term, const Env &env);

// Constructor type arguments as a substitution for its quantified variables.
TypeSubst ctor_subst(const CheckedCtor &ctor, const Term &term);

// All values of an App-free closed type, in ascending term order.
std::vector<Term> carrier(const Type &ty, const Env &env);
// Number of elements without materializing; throws CapError past the caps.
std::int64_t carrier_size(const Type &ty, const Env &env);

// Matches a pattern type against a closed type, extending `s`.
bool match_type(const Type &pattern, const Type &closed, TypeSubst &s);

// Constructor-rooted terms of decl@instance whose recursion depth is at most
// `depth`. Constructors without recursive arguments sit at depth 0.
std::vector<Term> enumerate_values(const CheckedDecl &decl, const std::vector<Type> &instance,
                                   int depth, const Env &env);

// Nesting depth of recursive arguments, as used by enumerate_values.
int term_depth(const Term &term, const Env &env);

}  // namespace gadtparam
