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

#include "gadtparam/relations.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <numeric>

#include "gadtparam/error.hpp"
#include "gadtparam/printer.hpp"

namespace gadtparam {

namespace {

bool pair_less(const Rel::Pair &x, const Rel::Pair &y) {
  if (int c = compare(x.first, y.first); c != 0) return c < 0;
  return compare(x.second, y.second) < 0;
}

}  // namespace

Rel::Rel() : Rel(Type::unit(), Type::unit(), {}) {}

Rel::Rel(Type src, Type tgt, std::vector<Pair> pairs) {
  if (!std::is_sorted(pairs.begin(), pairs.end(), pair_less))
    std::sort(pairs.begin(), pairs.end(), pair_less);
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  auto d = std::make_shared<Data>();
  std::size_t h = src.hash() * 31 + tgt.hash();
  for (const auto &[a, b] : pairs) h = (h * 1000003) ^ (a.hash() * 17 + b.hash());
  d->src = std::move(src);
  d->tgt = std::move(tgt);
  d->pairs = std::move(pairs);
  d->hash = h;
  data_ = std::move(d);
}

bool Rel::contains(const Term &a, const Term &b) const {
  const auto &ps = data_->pairs;
  auto it = std::lower_bound(ps.begin(), ps.end(), Pair{a, b}, pair_less);
  return it != ps.end() && it->first == a && it->second == b;
}

bool operator==(const Rel &a, const Rel &b) {
  if (a.data_ == b.data_) return true;
  return a.hash() == b.hash() && a.src() == b.src() && a.tgt() == b.tgt() &&
         a.pairs() == b.pairs();
}

bool operator<(const Rel &a, const Rel &b) {
  if (int c = compare(a.src(), b.src()); c != 0) return c < 0;
  if (int c = compare(a.tgt(), b.tgt()); c != 0) return c < 0;
  return std::lexicographical_compare(a.pairs().begin(), a.pairs().end(), b.pairs().begin(),
                                      b.pairs().end(), pair_less);
}

Rel eq_rel(const Type &ty, const Env &env) {
  std::vector<Rel::Pair> ps;
  for (const auto &v : carrier(ty, env)) ps.emplace_back(v, v);
  return Rel(ty, ty, std::move(ps));
}

Rel delta(const Term &a, const Type &ty, const Env &env) {
  auto t = type_of(a, env);
  if (!(t == ty))
    throw CheckError(fmt::format("{} has type {}, not {}", to_string(a), to_string(t),
                                 to_string(ty)));
  return Rel(ty, ty, {{a, a}});
}

Rel graph(const Term &f, const Env &env) {
  if (!f.is(Term::Kind::Fun)) throw CheckError("graph of a non-function");
  type_of(f, env);
  std::vector<Rel::Pair> ps(f.table().begin(), f.table().end());
  return Rel(f.dom(), f.cod(), std::move(ps));
}

Rel product_rel(const Rel &r1, const Rel &r2) {
  std::vector<Rel::Pair> ps;
  ps.reserve(r1.size() * r2.size());
  for (const auto &[a1, b1] : r1.pairs())
    for (const auto &[a2, b2] : r2.pairs()) ps.emplace_back(Term::pair(a1, a2), Term::pair(b1, b2));
  return Rel(Type::prod(r1.src(), r2.src()), Type::prod(r1.tgt(), r2.tgt()), std::move(ps));
}

bool arrow_related(const Rel &r, const Rel &s, const Term &f, const Term &g) {
  for (const auto &[a, b] : r.pairs()) {
    auto fa = f.apply(a);
    auto gb = g.apply(b);
    if (!fa || !gb) return false;
    if (!s.contains(*fa, *gb)) return false;
  }
  return true;
}

bool includes(const Rel &r, const Rel &s) {
  return std::includes(s.pairs().begin(), s.pairs().end(), r.pairs().begin(), r.pairs().end(),
                       pair_less);
}

Rel full_rel(const Type &a, const Type &b, const Env &env) {
  std::vector<Rel::Pair> ps;
  auto ca = carrier(a, env);
  auto cb = carrier(b, env);
  for (const auto &x : ca)
    for (const auto &y : cb) ps.emplace_back(x, y);
  return Rel(a, b, std::move(ps));
}

Rel converse(const Rel &r) {
  std::vector<Rel::Pair> ps;
  for (const auto &[a, b] : r.pairs()) ps.emplace_back(b, a);
  return Rel(r.tgt(), r.src(), std::move(ps));
}

// ---------------------------------------------------------------- RelSpace

RelSpace::RelSpace(Type a, Type b, const Env &env)
    : a_(std::move(a)), b_(std::move(b)) {
  if (!a_.is_closed() || !b_.is_closed()) throw CheckError("relation space over open types");
  ca_ = env.cached_carrier(a_);
  cb_ = env.cached_carrier(b_);
  auto cells = ca_->size() * cb_->size();
  const int max_bits = env.caps().max_rel_bits();
  if (cells > static_cast<std::size_t>(max_bits))
    throw CapError(fmt::format("Rel {} {} has 2^{} relations (max_rel_enum {})", to_string(a_),
                               to_string(b_), cells, env.caps().max_rel_enum));
  bits_ = static_cast<int>(cells);
  cache_.resize(std::size_t{1} << bits_);
}

const Rel &RelSpace::rel(std::uint64_t mask) const {
  auto &slot = cache_[mask];
  if (!slot) {
    std::vector<Rel::Pair> ps;
    ps.reserve(std::popcount(mask));
    const auto nb = cb_->size();
    for (int i = 0; i < bits_; ++i)
      if (mask >> i & 1) ps.emplace_back((*ca_)[i / nb], (*cb_)[i % nb]);
    slot.emplace(a_, b_, std::move(ps));
  }
  return *slot;
}

std::optional<std::uint64_t> RelSpace::mask_of(const Rel &r) const {
  if (!(r.src() == a_) || !(r.tgt() == b_)) return std::nullopt;
  std::uint64_t m = 0;
  for (const auto &[x, y] : r.pairs()) {
    auto i = std::lower_bound(ca_->begin(), ca_->end(), x) - ca_->begin();
    auto j = std::lower_bound(cb_->begin(), cb_->end(), y) - cb_->begin();
    if (i >= static_cast<long>(ca_->size()) || !((*ca_)[i] == x) ||
        j >= static_cast<long>(cb_->size()) || !((*cb_)[j] == y))
      return std::nullopt;
    m |= std::uint64_t{1} << (i * cb_->size() + j);
  }
  return m;
}

const std::vector<std::uint64_t> &RelSpace::by_size() const {
  if (by_size_.empty()) {
    by_size_.resize(count());
    std::iota(by_size_.begin(), by_size_.end(), std::uint64_t{0});
    std::stable_sort(by_size_.begin(), by_size_.end(), [](std::uint64_t x, std::uint64_t y) {
      return std::popcount(x) < std::popcount(y);
    });
  }
  return by_size_;
}

RelSpace enumerate_rels(const Type &a, const Type &b, const Env &env) {
  return RelSpace(a, b, env);
}

}  // namespace gadtparam
