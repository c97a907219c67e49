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
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gadtparam/kernel.hpp"
#include "gadtparam/term.hpp"

namespace gadtparam {

// A finite, proof-irrelevant relation between two closed types. Two
// relations are equal iff they have the same types and the same pairs.
class Rel {
 public:
  using Pair = std::pair<Term, Term>;

  Rel();
  Rel(Type src, Type tgt, std::vector<Pair> pairs);

  const Type &src() const { return data_->src; }
  const Type &tgt() const { return data_->tgt; }
  const std::vector<Pair> &pairs() const { return data_->pairs; }
  std::size_t size() const { return data_->pairs.size(); }
  bool empty() const { return data_->pairs.empty(); }
  bool contains(const Term &a, const Term &b) const;
  std::size_t hash() const { return data_->hash; }

  friend bool operator==(const Rel &a, const Rel &b);
  friend bool operator<(const Rel &a, const Rel &b);

 private:
  struct Data {
    Type src, tgt;
    std::vector<Pair> pairs;
    std::size_t hash = 0;
  };
  std::shared_ptr<const Data> data_;
};

Rel eq_rel(const Type &ty, const Env &env);
Rel delta(const Term &a, const Type &ty, const Env &env);
Rel graph(const Term &f, const Env &env);
Rel product_rel(const Rel &r1, const Rel &r2);
// (R →̂ S) f g: every R-related (a, b) is sent to S-related (f a, g b).
bool arrow_related(const Rel &r, const Rel &s, const Term &f, const Term &g);
bool includes(const Rel &r, const Rel &s);  // r ⊆ s
Rel full_rel(const Type &a, const Type &b, const Env &env);
Rel converse(const Rel &r);

// All relations between two carriers, indexed by bit masks over the pair
// grid (bit i·|B| + j stands for (carrier(A)[i], carrier(B)[j])).
class RelSpace {
 public:
  RelSpace(Type a, Type b, const Env &env);

  const Type &src() const { return a_; }
  const Type &tgt() const { return b_; }
  const std::vector<Term> &src_carrier() const { return *ca_; }
  const std::vector<Term> &tgt_carrier() const { return *cb_; }
  int bits() const { return bits_; }
  std::uint64_t count() const { return std::uint64_t{1} << bits_; }

  // Relation for a mask; cached.
  const Rel &rel(std::uint64_t mask) const;
  // Mask of an arbitrary relation over the same types; nullopt if some pair
  // falls outside the carriers.
  std::optional<std::uint64_t> mask_of(const Rel &r) const;
  // Masks sorted by (popcount, mask).
  const std::vector<std::uint64_t> &by_size() const;

  class iterator {
   public:
    iterator(const RelSpace *s, std::uint64_t m) : s_(s), m_(m) {}
    const Rel &operator*() const { return s_->rel(m_); }
    iterator &operator++() {
      ++m_;
      return *this;
    }
    bool operator!=(const iterator &o) const { return m_ != o.m_; }

   private:
    const RelSpace *s_;
    std::uint64_t m_;
  };
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count()}; }

 private:
  Type a_, b_;
  std::shared_ptr<const std::vector<Term>> ca_, cb_;
  int bits_;
  mutable std::vector<std::optional<Rel>> cache_;
  mutable std::vector<std::uint64_t> by_size_;
};

// Every relation between A and B in deterministic (mask) order. Throws
// CapError when 2^(|A||B|) exceeds caps.max_rel_enum.
RelSpace enumerate_rels(const Type &a, const Type &b, const Env &env);

}  // namespace gadtparam

template <>
struct std::hash<gadtparam::Rel> {
  std::size_t operator()(const gadtparam::Rel &r) const { return r.hash(); }
};
