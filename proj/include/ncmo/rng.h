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

#ifndef NCMO_RNG_H_
#define NCMO_RNG_H_

#include <cstdint>
#include <random>

namespace ncmo {

// Seeded random source. Single owner: pass by reference, never share across
// concurrent tasks. Derived streams (`fork`) give independent per-trial
// sources without consuming the parent.
//
// Everything here is built on std::mt19937_64, whose output sequence is fixed
// by the standard, plus hand-rolled conversions, so draws are reproducible
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bit() { return (engine_() >> 63) != 0; }

  // Independent stream number `stream` derived from this source's seed.
  Rng fork(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ncmo

#endif  // NCMO_RNG_H_
