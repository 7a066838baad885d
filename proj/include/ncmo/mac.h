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

#ifndef NCMO_MAC_H_
#define NCMO_MAC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncmo/dcrpuzz.h"
#include "ncmo/dist.h"
#include "ncmo/qsim.h"
#include "ncmo/rng.h"

namespace ncmo {

// Outcome of a security or correctness game.
struct GameReport {
  std::string game;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t aborted = 0;  // trials that ended in a reported error (counted as losses)
  std::optional<double> exact;

  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
};

struct MacParams {
  int n = 4;        // qubits of the signing key
  int lm = 4;       // message length, ≤ n
  int pp_bits = 2;  // pp is a seed of this many bits selecting the public table
  std::uint64_t seed = 1;
};

// Conjugate-coding toy one-shot MAC.
//
// pp selects a public random permutation R of {0,1}^{2n}; mvk is its inverse.
// Gen draws x, θ ← {0,1}^n, sets vk = R(x‖θ) and sigk = ⊗_i H^{θ_i}|x_i⟩.
// Sign measures qubit i in the Z basis if m_i = 0 and in the X basis if
// m_i = 1 (qubits beyond the message length in Z). Ver inverts vk and
// accepts iff σ_i = x_i wherever the basis matches θ_i.
class ToyMac {
 public:
  explicit ToyMac(MacParams p);

  const MacParams &params() const { return p_; }
  int vk_length() const { return 2 * p_.n; }
  int ans_length() const { return p_.lm + p_.n; }

  FiniteDist setup_law() const;
  BitString setup(Rng &rng) const;

  BitString evaluate(const BitString &pp, const BitString &x, const BitString &theta) const;
  // mvk: the (x, θ) behind vk.
  std::pair<BitString, BitString> invert(const BitString &pp, const BitString &vk) const;

  struct Keys {
    BitString vk;
    BitString x, theta;
    StateVector sigk;
  };
  Keys gen(const BitString &pp, Rng &rng) const;
  BitString sign(const StateVector &sigk, const BitString &m, Rng &rng) const;
  bool verify(const BitString &pp, const BitString &vk, const BitString &m, const BitString &sigma) const;

  // Law of Sign(sigk(x, θ), m), from the per-qubit case analysis.
  FiniteDist signature_law(const BitString &x, const BitString &theta, const BitString &m) const;

 private:
  bool basis(const BitString &m, int i) const { return i < p_.lm && m[i]; }
  const std::vector<std::uint32_t> &perm(const BitString &pp) const;
  const std::vector<std::uint32_t> &inverse(const BitString &pp) const;

  MacParams p_;
  std::vector<std::vector<std::uint32_t>> perm_, inv_;
};

StateVector conjugate_coding_state(const BitString &x, const BitString &theta);

// d.Setup = pp; d.Samp = (vk, (m, σ)) with m uniform. Circuit-backed by
// purification when vk‖m‖σ fits the simulator.
DcrScheme mac_to_dcrpuzz(const ToyMac &mac);

struct MacForgery {
  BitString vk, m0, sigma0, m1, sigma1;
};
// The game's winning predicate.
bool mac_forgery_wins(const ToyMac &mac, const BitString &pp, const MacForgery &f);
MacForgery forgery_from_triple(const ToyMac &mac, const BitString &triple);

// Exact win probability of a breaker whose output law on pp is `source(pp)`
// (over vk‖m₀‖σ₀‖m₁‖σ₁).
double mac_win_exact(const ToyMac &mac, const CollisionSource &source);
// Exact win probability of the breaker fed by exact Col, in factored form:
// Σ_pp Σ_vk Pr[vk] (V² − Σ_m V_m²), V_m = Pr[m, valid σ | vk].
double mac_col_win_exact(const ToyMac &mac, const DcrScheme &scheme);

// Algorithm C: Gen, sign m₀; re-run Gen until the same vk appears, sign m₁.
// kRetryExhausted after `budget` regenerations.
MacForgery algorithm_c_mac(const ToyMac &mac, const BitString &pp, Rng &rng, std::uint64_t budget = 1'000'000,
                           std::uint64_t *retries = nullptr);
// Its exact law, from Gen's posterior over (x, θ) given vk.
FiniteDist algorithm_c_mac_law(const ToyMac &mac, const BitString &pp);

enum class CollisionSourceKind { kExactCol, kOracleBacked, kHonestDuplicate, kAlgorithmC };
CollisionSourceKind collision_source_from_string(const std::string &s);  // kParse
std::string to_string(CollisionSourceKind k);

// Plays the forgery game `trials` times with collisions from `kind`.
// `exact` is filled for every source kind.
GameReport mac_break_via_collision(const ToyMac &mac, CollisionSourceKind kind, std::uint64_t trials,
                                   std::uint64_t seed);

// Honest correctness: Pr[Ver accepts] for Gen + Sign(m), exact over all (pp, x, θ, m).
double mac_correctness_exact(const ToyMac &mac);

}  // namespace ncmo

#endif  // NCMO_MAC_H_
