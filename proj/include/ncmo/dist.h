// Copyright 2026 The ncmo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NCMO_DIST_H_
#define NCMO_DIST_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ncmo/bitstring.h"
#include "ncmo/rng.h"

namespace ncmo {

// Validity slack for "probabilities sum to one".
inline constexpr double kProbTolerance = 1e-9;

// Exact probability distribution over bit strings of one common length.
//
// Immutable after construction. Support entries with probability exactly
// zero are dropped; absent keys have probability zero. Iteration follows
// lexicographic key order, which fixes the behaviour of seeded sampling.
class FiniteDist {
 public:
  using Map = std::map<BitString, double>;

  // Point mass on the empty string.
  FiniteDist() : probs_{{BitString(), 1.0}} {}

  // Throws kStructural on a key of the wrong length, a negative or
  // non-finite probability, or a total mass off by more than kProbTolerance.
  static FiniteDist from_map(int length, Map probs);
  static FiniteDist point(const BitString &s);
  // Uniform over all of {0,1}^length (length <= 24).
  static FiniteDist uniform(int length);
  // Uniform over the given (distinct, equal-length, nonempty) strings.
  static FiniteDist uniform_over(std::span<const BitString> support);

  int length() const { return length_; }
  const Map &probs() const { return probs_; }
  double prob(const BitString &s) const;
  std::size_t support_size() const { return probs_.size(); }
  double total() const;

  Map::const_iterator begin() const { return probs_.begin(); }
  Map::const_iterator end() const { return probs_.end(); }

 private:
  FiniteDist(int length, Map probs) : length_(length), probs_(std::move(probs)) {}
  int length_ = 0;
  Map probs_;
};

// Accumulates mass per key, then validates once in build().
class DistBuilder {
 public:
  explicit DistBuilder(int length) : length_(length) {}

  void add(const BitString &s, double p);
  // Adds `weight * d(s)` for every s in d.
  void add_scaled(const FiniteDist &d, double weight);
  FiniteDist build() const { return FiniteDist::from_map(length_, mass_); }

  int length() const { return length_; }
  double total() const;

 private:
  int length_;
  FiniteDist::Map mass_;
};

// Statistical (total variation) distance: ½ Σ_s |p(s) − q(s)|.
// Throws kStructural when the lengths differ.
double sd(const FiniteDist &p, const FiniteDist &q);

// Total mass of strings that start with `prefix`.
double prefix_mass(const FiniteDist &d, const BitString &prefix);

// Law of the suffix given that the string starts with `prefix`.
// kImpossibleCondition when the prefix has no mass.
FiniteDist condition(const FiniteDist &d, const BitString &prefix);

// Image distribution under a total map whose outputs share one length.
FiniteDist push_forward(const FiniteDist &d, const std::function<BitString(const BitString &)> &f);

// Law of bits [pos, pos + len).
FiniteDist marginal(const FiniteDist &d, int pos, int len);

// Law of a‖b with a and b independent.
FiniteDist product(const FiniteDist &a, const FiniteDist &b);

BitString sample(const FiniteDist &d, Rng &rng);

// Precomputed cumulative table for repeated draws from one distribution.
// Produces exactly the same draws as `sample` for the same random source.
class DistSampler {
 public:
  explicit DistSampler(const FiniteDist &d);
  const BitString &operator()(Rng &rng) const;

 private:
  std::vector<BitString> keys_;
  std::vector<double> cumulative_;
};

// Counts of observed strings.
class EmpiricalDist {
 public:
  EmpiricalDist() = default;

  // Throws kStructural when `s` has a different length than earlier samples.
  void add(const BitString &s, std::uint64_t count = 1);

  const std::map<BitString, std::uint64_t> &counts() const { return counts_; }
  std::uint64_t shots() const { return shots_; }
  int length() const { return length_; }
  // Throws kStructural when empty.
  FiniteDist normalized() const;

 private:
  std::map<BitString, std::uint64_t> counts_;
  std::uint64_t shots_ = 0;
  int length_ = -1;
};

// Throws kStructural on empty input.
EmpiricalDist empirical(std::span<const BitString> samples);

// {"length": n, "probs": {"<bits>": p, ...}}
nlohmann::ordered_json to_json(const FiniteDist &d);
// Throws kParse on malformed JSON, kStructural on an invalid distribution.
FiniteDist dist_from_json(const nlohmann::json &j);

}  // namespace ncmo

#endif  // NCMO_DIST_H_
