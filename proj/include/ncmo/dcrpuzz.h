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

#ifndef NCMO_DCRPUZZ_H_
#define NCMO_DCRPUZZ_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncmo/dist.h"
#include "ncmo/oracle.h"
#include "ncmo/qsim.h"
#include "ncmo/rng.h"

namespace ncmo {

// A distributional collision-resistant puzzle (Setup, Samp).
//
// `samp(pp)` is the exact law of puzz‖ans. When `vpp` is set the scheme is
// circuit-backed: vpp(pp) is a measurement-free circuit V_pp on registers
// [puzz | ans | junk] whose readout of the first puzz_len + ans_len qubits
// reproduces samp(pp).
struct DcrScheme {
  std::string name;
  int pp_len = 0;
  int puzz_len = 0;
  int ans_len = 0;
  FiniteDist setup;
  std::function<FiniteDist(const BitString &pp)> samp;
  std::function<Circuit(const BitString &pp)> vpp;  // may be empty

  bool circuit_backed() const { return static_cast<bool>(vpp); }
  int triple_length() const { return puzz_len + 2 * ans_len; }
  // kStructural on inconsistent widths or laws.
  void validate() const;
};

struct CollisionTriple {
  BitString puzz, ans, ans2;
  BitString concat() const { return puzz + ans + ans2; }
  static CollisionTriple split(const DcrScheme &s, const BitString &bits);
};

// Col(pp): (puzz, ans) ← Samp(pp), then ans′ from Pr[· | puzz]. Law over puzz‖ans‖ans′.
FiniteDist col_law(const DcrScheme &s, const BitString &pp);
CollisionTriple col(const DcrScheme &s, const BitString &pp, Rng &rng);

// Law of readout on the first `p + a` qubits of V|0…0⟩.
FiniteDist circuit_samp_law(const Circuit &v, int p, int a);

// The unitary V = prepare(√law) on law.length() qubits (one step, no measurement).
Circuit purify(const FiniteDist &law);

// The two-step oracle query (U₁ = V_pp, measure the puzz register; U₂ = I, no measurement).
// kStructural when the scheme is not circuit-backed.
Circuit dpp_instance(const DcrScheme &s, const BitString &pp);
// (v₁, v₂) ↦ puzz from v₁, ans from v₁, ans′ from v₂.
BitString dpp_output_map(const DcrScheme &s, int qubits, const BitString &reads);
// Exact law of the oracle-backed collision finder.
FiniteDist dpp_oracle_law(const DcrScheme &s, const BitString &pp, const Limits &limits = {});
CollisionTriple dpp_collision(const DcrScheme &s, const BitString &pp, Rng &rng);

// Repeated Col or oracle-backed draws with per-pp laws and circuits cached.
class CollisionFinder {
 public:
  enum class Kind { kCol, kOracle };
  CollisionFinder(const DcrScheme &s, Kind kind);
  CollisionTriple operator()(const BitString &pp, Rng &rng);

 private:
  struct OracleEntry {
    Circuit circuit;
    std::unique_ptr<OracleSampler> sampler;
  };
  const DcrScheme *scheme_;
  Kind kind_;
  std::map<BitString, FiniteDist> laws_;
  std::map<BitString, DistSampler> first_;
  std::map<BitString, DistSampler> second_;  // keyed pp‖puzz
  std::map<BitString, OracleEntry> oracle_;
};

// Candidate collision finder: pp ↦ law over puzz‖ans‖ans′.
using CollisionSource = std::function<FiniteDist(const BitString &pp)>;

// Σ_pp Pr[pp] · sd(A(pp), Col(pp)) = SD({pp, A(pp)}, {pp, Col(pp)}).
double dcr_advantage(const DcrScheme &s, const CollisionSource &adversary);

// Scheme with a pp-independent law; circuit-backed by purification when small enough.
DcrScheme law_scheme(std::string name, FiniteDist law, int puzz_len, int pp_len = 0);

// Circuit-backed scheme from one V_pp per pp value (keys of `circuits`).
DcrScheme circuit_scheme(std::string name, std::map<BitString, Circuit> circuits, int puzz_len, int ans_len);

// A random circuit-backed scheme with junk qubits: per pp, a random unitary
// on ℓ ∈ [2, 4] qubits.
DcrScheme random_circuit_scheme(Rng &rng, int pp_len = 1);

// Coherent preimage pair: registers [y | x], H on x, |x⟩|0⟩ ↦ |x⟩|f(x)⟩,
// measure y (step 1), then an empty step. The two reads carry x, x′ drawn
// independently from f⁻¹(y).
Circuit preimage_pair_circuit(const std::vector<std::uint64_t> &f, int in_bits, int out_bits);
// Pr[x ≠ x′] = 1 − E_y[1/|f⁻¹(y)|] from the oracle law of that circuit.
double distinct_preimage_probability(const FiniteDist &oracle_law, int in_bits, int out_bits);

// Scheme files:
//   {"pp_len": …, "puzz_len": …, "ans_len": …, "setup": <dist>?,
//    "source": {"law": <dist> | {"<pp>": <dist>, …}}
//            | {"circuit": <circuit or path>, "puzz_register": m}
//            | {"circuits": {"<pp>": <circuit or path>, …}, "puzz_register": m}}
// Relative circuit paths are resolved against `base_dir`.
DcrScheme scheme_from_json(const nlohmann::json &j, const std::string &base_dir = ".");
DcrScheme load_scheme(const std::string &path);

}  // namespace ncmo

#endif  // NCMO_DCRPUZZ_H_
