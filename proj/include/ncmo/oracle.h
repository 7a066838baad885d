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

#ifndef NCMO_ORACLE_H_
#define NCMO_ORACLE_H_

#include <cstdint>
#include <vector>

#include "ncmo/dist.h"
#include "ncmo/qsim.h"
#include "ncmo/rng.h"

namespace ncmo {

// Enumeration and materialization caps shared by the exact evaluators.
struct Limits {
  std::uint64_t max_branches = kDefaultBranchGuard;
  // Largest joint output (in bits) materialized as a FiniteDist.
  int max_exact_bits = 20;
  std::uint64_t rejection_budget = 1'000'000;

  // Defaults, with NCMO_MAX_BRANCHES (a positive integer) overriding
  // max_branches. Throws kParse on a malformed value.
  static Limits from_env();
};

// One answer of the oracle: reads v_1, …, v_T, each ℓ bits (v_t = u_t‖w_t).
struct OracleOutput {
  std::vector<BitString> reads;

  BitString concat() const;
  static OracleOutput split(const BitString &bits, int qubits);
  friend bool operator==(const OracleOutput &, const OracleOutput &) = default;
};

// Literal simulation of the oracle on a fixed circuit: the collapsing branch
// is sampled step by step and every read is an independent Born sample of the
// current post-measurement state. Each step's unitary is precompiled once.
class OracleSampler {
 public:
  explicit OracleSampler(const Circuit &c);
  OracleOutput operator()(Rng &rng) const;

 private:
  const Circuit *circuit_;
  std::vector<CompiledStep> steps_;
};

OracleOutput oracle_sample(const Circuit &c, Rng &rng);

// Throws kInstanceTooLarge when T·ℓ exceeds limits.max_exact_bits.
void check_exact_guard(const Circuit &c, const Limits &limits);

// Exact joint law of (v_1‖…‖v_T):
//   Pr[v] = Σ_τ Pr[τ] · Π_t |⟨v_t|ψ_t^{τ_t}⟩|².
FiniteDist oracle_exact(const Circuit &c, const Limits &limits = {});
FiniteDist oracle_exact(const BranchTree &tree, const Limits &limits = {});

// Expands Π_i factors[i] (concatenated in order) scaled by `weight` into `out`.
void add_product(const std::vector<const FiniteDist *> &factors, double weight, DistBuilder &out);

// Q^t: the transcript τ_t and the non-collapsed suffix w_t of read t.
struct QtSample {
  Transcript tau;
  BitString w;
};
QtSample q_t(const Circuit &c, int t, Rng &rng);
// Law of τ_t‖w_t.
FiniteDist q_t_law(const BranchTree &tree, int t);

// Conditional samplers given a transcript prefix τ_t.
struct QPolicy {
  enum class Mode { kExact, kRejection };
  Mode mode = Mode::kExact;
  std::uint64_t budget = 1'000'000;
};

// Q₁: the remaining collapsing outcomes u_{t+1}‖…‖u_T given τ_t.
// kImpossibleCondition for a zero-probability τ_t; kRetryExhausted when the
// rejection budget runs out. `tries` receives the number of attempts.
BitString q1(const Circuit &c, const Transcript &tau, Rng &rng, const QPolicy &policy = {},
             std::uint64_t *tries = nullptr);
FiniteDist q1_law(const BranchTree &tree, const Transcript &tau);

// Q₂: the non-collapsed suffixes w_1‖…‖w_t given τ_t.
BitString q2(const Circuit &c, const Transcript &tau, Rng &rng, const QPolicy &policy = {},
             std::uint64_t *tries = nullptr);
FiniteDist q2_law(const BranchTree &tree, const Transcript &tau);

}  // namespace ncmo

#endif  // NCMO_ORACLE_H_
