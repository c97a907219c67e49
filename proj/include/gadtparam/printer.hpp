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

#include "gadtparam/kernel.hpp"
#include "gadtparam/term.hpp"

namespace gadtparam {

class Rel;

struct PrintOptions {
  bool ascii = false;
};

std::string to_string(const Type &ty, PrintOptions opts = {});
std::string to_string(const Term &term, PrintOptions opts = {});
std::string to_string(const DataDecl &decl, PrintOptions opts = {});
// c : ∀{ᾱ} → Φ → Decl Ψ̄
std::string to_string(const CtorSig &ctor, const std::string &decl_name, PrintOptions opts = {});
// rel A B { pairs }
std::string to_string(const Rel &rel, PrintOptions opts = {});

// Type printed so that it parses back as an atom.
std::string to_string_atom(const Type &ty, PrintOptions opts = {});

}  // namespace gadtparam
