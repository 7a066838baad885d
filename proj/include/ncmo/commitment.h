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

#ifndef NCMO_COMMITMENT_H_
#define NCMO_COMMITMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncmo/dcrpuzz.h"
#include "ncmo/dist.h"
#include "ncmo/mac.h"
#include "ncmo/qsim.h"
#include "ncmo/rng.h"

namespace ncmo {

// How the derived puzzle sampler commits.
//   kLiteral:  run S₁(r₁, 0), then draw b and open ψ_S with S₂(b, ·).
//   kCoherent: commit on (|0⟩+|1⟩)/√2, measure s₁, then measure (b, s₂).
enum class ComVariant { kLiteral, kCoherent };

ComVariant com_variant_from_string(const std::string &s);  // kParse
std::string to_string(ComVariant v);

// Two-message commitment with a classical receiver message r₁ and a
// classical receiver check. Every stage is given by its exact law so that
// games can be evaluated by enumeration; sampling goes through the laws.
class Commitment {
 public:
  virtual ~Commitment() = default;

  virtual std::string name() const = 0;
  virtual int r1_length() const = 0;
  virtual int s1_length() const = 0;
  virtual int s2_length() const = 0;

  virtual FiniteDist r1_law() const = 0;
  // Law of s₁ from S₁(r₁, b).
  virtual FiniteDist s1_law(const BitString &r1, bool b) const = 0;
  // ψ_S left by S₁(r₁, b) after emitting s₁. kImpossibleCondition when
  // Pr[s₁ | r₁, b] = 0.
  virtual StateVector sender_state(const BitString &r1, bool b, const BitString &s1) const = 0;
  // Law of s₂ from S₂(b, ψ_S).
  virtual FiniteDist open_law(bool b, const StateVector &psi) const = 0;
  virtual bool receiver_accepts(const BitString &r1, const BitString &s1, const BitString &s2, bool b) const = 0;

  // Measurement-free V_{r₁} for the derived puzzle sampler, on registers
  // [s₁ | b | s₂ | junk]. Empty when the scheme has no native circuit.
  virtual std::optional<Circuit> dsamp_circuit(const BitString & /*r1*/, ComVariant /*v*/) const {
    return std::nullopt;
  }

  struct Commit {
    BitString s1;
    StateVector psi;
  };
  Commit commit(const BitString &r1, bool b, Rng &rng) const;
  BitString open(bool b, const StateVector &psi, Rng &rng) const;
  // Pr[R₂ accepts] when opening the state left by S₁(r₁, b) on s₁.
  double opening_success(const BitString &r1, bool b, const BitString &s1) const;
};

// Compressing toy commitment ("Variant A").
//
// r₁ selects a public random table R: {0,1}^{2n} → {0,1}^{n−c}. S₁(r₁, b)
// prepares Σ_{x: x₁=b, θ} |x, θ⟩|R(x‖θ)⟩, measures the last register and sends
// s₁ := y; ψ_S is the residual preimage superposition. S₂ measures ψ_S and
// sends s₂ := x‖θ. R₂ accepts iff R(x‖θ) = y and x₁ = b.
class ToyCommitment : public Commitment {
 public:
  ToyCommitment(int n, int c, int r1_bits = 1, std::uint64_t seed = 1);
  // Explicit tables, one per r₁ value (their count must be a power of two).
  ToyCommitment(int n, int c, std::vector<std::vector<std::uint64_t>> tables);

  std::string name() const override { return "toy"; }
  int r1_length() const override { return r1_bits_; }
  int s1_length() const override { return n_ - c_; }
  int s2_length() const override { return 2 * n_; }

  FiniteDist r1_law() const override;
  FiniteDist s1_law(const BitString &r1, bool b) const override;
  StateVector sender_state(const BitString &r1, bool b, const BitString &s1) const override;
  FiniteDist open_law(bool b, const StateVector &psi) const override;
  bool receiver_accepts(const BitString &r1, const BitString &s1, const BitString &s2, bool b) const override;
  std::optional<Circuit> dsamp_circuit(const BitString &r1, ComVariant v) const override;

  int n() const { return n_; }
  int c() const { return c_; }
  // R_{r₁}, indexed by x‖θ read as an integer.
  const std::vector<std::uint64_t> &table(const BitString &r1) const;

 private:
  int n_, c_, r1_bits_;
  std::vector<std::vector<std::uint64_t>> tables_;
};

// Perfectly hiding, perfectly correct and not binding at all: s₁ is a
// uniform bit independent of b, ψ_S = |s₁⟩, s₂ = s₁, R₂ accepts iff s₂ = s₁.
class TrivialCommitment : public Commitment {
 public:
  std::string name() const override { return "trivial"; }
  int r1_length() const override { return 0; }
  int s1_length() const override { return 1; }
  int s2_length() const override { return 1; }
  FiniteDist r1_law() const override;
  FiniteDist s1_law(const BitString &r1, bool b) const override;
  StateVector sender_state(const BitString &r1, bool b, const BitString &s1) const override;
  FiniteDist open_law(bool b, const StateVector &psi) const override;
  bool receiver_accepts(const BitString &r1, const BitString &s1, const BitString &s2, bool b) const override;
};

// Exact law of the derived sampler over s₁‖b‖s₂ for one r₁.
FiniteDist com_samp_law(const Commitment &com, const BitString &r1, ComVariant v);

// Puzzle scheme with pp := r₁, puzz := s₁, ans := b‖s₂. Circuit-backed by the
// scheme's own circuit when it has one, otherwise by purification when small.
DcrScheme com_to_dcrpuzz(const Commitment &com, ComVariant v);

// Binding game: the breaker turns a collision (s₁, b‖s₂, b′‖s₂′) into
// (s₁, s₂, s₂′); it wins iff s₂ opens to 0 and s₂′ opens to 1.
bool com_breaker_wins(const Commitment &com, const BitString &r1, const BitString &triple);
double com_break_exact(const Commitment &com, const CollisionSource &source);

// Which sender state algorithm C regenerates for its second opening.
//   kOpenBit:   from S₁(r₁, 1) conditioned on s₁ (the bit it is about to open).
//   kCommitBit: from S₁(r₁, 0) conditioned on s₁ (a fresh copy of the first run).
enum class RegenPolicy { kOpenBit, kCommitBit };

struct ComOpenings {
  BitString s1, s2, s2b;
};

// C(r₁): (s₁, ψ_S) ← S₁(r₁, 0), s₂ ← S₂(0, ψ_S); regenerate ψ′_S given s₁ per
// the policy and s₂′ ← S₂(1, ψ′_S). kImpossibleCondition when the
// regeneration has zero probability.
ComOpenings algorithm_c_com(const Commitment &com, const BitString &r1, Rng &rng,
                            RegenPolicy policy = RegenPolicy::kOpenBit);

struct AlgorithmCExact {
  double success = 0.0;          // Pr[both openings accepted], averaged over r₁
  double impossible_mass = 0.0;  // Pr[regeneration impossible]
};
AlgorithmCExact algorithm_c_com_exact(const Commitment &com, RegenPolicy policy = RegenPolicy::kOpenBit);

// Binding game driven by a collision source of the given kind on the derived
// scheme. Algorithm C uses kOpenBit for the coherent variant and kCommitBit
// for the literal one.
GameReport com_break_via_collision(const Commitment &com, ComVariant v, CollisionSourceKind kind,
                                   std::uint64_t trials, std::uint64_t seed);

// Exact correctness/hiding quantities behind algorithm C's success bound.
struct CommitmentAudit {
  double threshold = 0.0;           // 1/p
  double correctness[2] = {0, 0};   // E Pr[accept] for b = 0, 1
  double good_mass[2] = {0, 0};     // Pr_{r₁, s₁ ← S₁(r₁,b)}[(r₁,s₁) ∈ G_b]
  double hiding_sd = 0.0;           // E_{r₁} sd(s₁ | b=0, s₁ | b=1)
  double g1_mass_under_b0 = 0.0;    // Pr_{s₁ ← S₁(r₁,0)}[(r₁,s₁) ∈ G_1]
  double bound = 0.0;               // max(0, m₀ + m₁ − 2·sd − 1)·(1 − 1/p)²
  double algorithm_c_success = 0.0; // kOpenBit policy
  bool g1_transfer_holds = false;   // g1_mass_under_b0 ≥ m₁ − 2·sd
  bool bound_holds = false;         // algorithm_c_success ≥ bound
};
CommitmentAudit hiding_and_correctness_audit(const Commitment &com, double threshold);

}  // namespace ncmo

#endif  // NCMO_COMMITMENT_H_
