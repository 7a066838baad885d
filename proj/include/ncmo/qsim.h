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

#ifndef NCMO_QSIM_H_
#define NCMO_QSIM_H_

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncmo/bitstring.h"
#include "ncmo/dist.h"
#include "ncmo/rng.h"

namespace ncmo {

using Complex = std::complex<double>;

// Hard cap on register width; dense simulation only.
inline constexpr int kMaxQubits = 12;
// Collapsing outcomes (and readout entries) below this mass are dropped.
inline constexpr double kPruneThreshold = 1e-12;
inline constexpr std::uint64_t kDefaultBranchGuard = std::uint64_t{1} << 16;

// Pure state on `qubits` qubits. Qubit 0 is the most significant bit of the
// basis index, so basis index order coincides with bit-string order.
class StateVector {
 public:
  StateVector() = default;
  // |0…0⟩.
  static StateVector zero(int qubits);
  static StateVector basis(const BitString &bits);
  // Throws kStructural unless the size is 2^qubits and the norm is 1 within 1e-9.
  static StateVector from_amplitudes(int qubits, std::vector<Complex> amplitudes);

  int qubits() const { return qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex> &amplitudes() const { return amps_; }
  std::vector<Complex> &mutable_amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  double norm_sq() const;

 private:
  StateVector(int qubits, std::vector<Complex> amps) : qubits_(qubits), amps_(std::move(amps)) {}
  int qubits_ = 0;
  std::vector<Complex> amps_;
};

enum class GateKind {
  kDense,        // 2^k × 2^k matrix on `targets`
  kPermutation,  // |a⟩_inputs |b⟩_targets → |a⟩ |b ⊕ table[a]⟩
  kPrepare,      // unitary whose first column is `amplitudes`
};

// One primitive gate. The first listed target is the most significant bit of
// the gate-local index.
struct Gate {
  std::string name;
  GateKind kind = GateKind::kDense;
  std::vector<int> targets;
  std::vector<int> inputs;             // kPermutation
  std::vector<Complex> matrix;         // kDense, row-major
  std::vector<std::uint64_t> table;    // kPermutation
  std::vector<Complex> amplitudes;     // kPrepare
  std::optional<double> angle;         // parameterized named gates
};

namespace gates {
Gate h(int q);
Gate x(int q);
Gate y(int q);
Gate z(int q);
Gate s(int q);
Gate t(int q);
Gate rx(int q, double angle);
Gate ry(int q, double angle);
Gate rz(int q, double angle);
Gate cx(int control, int target);
Gate cz(int a, int b);
Gate swap(int a, int b);
Gate cp(int control, int target, double angle);
// Arbitrary dense unitary; validated to 1e-7.
Gate unitary(std::vector<int> targets, std::vector<Complex> matrix);
// Reversible classical function f (given as a table) XORed into `outputs`.
Gate oracle(std::vector<int> inputs, std::vector<int> outputs, std::vector<std::uint64_t> table);
// Some unitary mapping |0…0⟩ to the given (normalized) amplitudes.
Gate prepare(std::vector<int> targets, std::vector<Complex> amplitudes);
// Fixed named gates by name ("h", "cx", "rz", …). Throws kParse on an
// unknown name or a missing/unexpected angle.
Gate named(const std::string &name, std::vector<int> targets, std::optional<double> angle);
}  // namespace gates

// Throws kStructural on out-of-range or repeated qubits and malformed payloads.
void validate_gate(const Gate &g, int qubits);

struct Step {
  std::vector<Gate> gates;
  int measure = 0;  // collapsing measurement of the first `measure` qubits
};

struct Circuit {
  int qubits = 0;
  std::vector<Step> steps;

  int T() const { return static_cast<int>(steps.size()); }
  int measured(int t) const { return steps[static_cast<std::size_t>(t - 1)].measure; }
  // Throws kStructural (or kInstanceTooLarge beyond kMaxQubits).
  void validate() const;
};

void apply_gate(StateVector &s, const Gate &g);
// Applies U_t of `step` (not its measurement).
StateVector apply_unitary(StateVector s, const Step &step);

// A step's unitary, precomputed for repeated application. Small registers
// are compiled to one dense matrix, larger ones keep the gate list.
class CompiledStep {
 public:
  CompiledStep(const Step &step, int qubits);
  void apply(StateVector &s) const;

 private:
  const Step *step_;
  std::vector<Complex> dense_;  // empty when not compiled
};

// Born probabilities of the 2^m outcomes on the first m qubits.
std::vector<double> outcome_probabilities(const StateVector &s, int m);
// Normalized projection onto outcome `u` of the first m qubits.
// kImpossibleCondition when the outcome has (numerically) zero mass.
StateVector project(const StateVector &s, const BitString &u);

struct MeasureResult {
  BitString outcome;
  StateVector post;
  double prob = 1.0;
};
MeasureResult measure_collapsing(const StateVector &s, int m, Rng &rng);
// In-place variant of measure_collapsing; returns the outcome.
BitString measure_in_place(StateVector &s, int m, Rng &rng);

FiniteDist readout_distribution(const StateVector &s);
// One draw from readout_distribution(s), without materializing it.
BitString sample_readout(const StateVector &s, Rng &rng);

struct Transcript {
  std::vector<BitString> outcomes;  // u_1, …, u_t

  int steps() const { return static_cast<int>(outcomes.size()); }
  BitString concat() const;
  // Splits a concatenated transcript by the circuit's measurement widths.
  static Transcript split(const Circuit &c, int t, const BitString &bits);
};

struct PrefixRun {
  Transcript tau;
  StateVector state;
};
// Runs steps 1..t, sampling each collapsing outcome.
PrefixRun run_prefix(const Circuit &c, int t, Rng &rng);

struct ConditionedPrefix {
  double prob = 0.0;  // Pr[τ_t]
  StateVector state;  // ψ_t^{τ_t}
};
// Deterministic evolution along a fixed transcript by direct projection.
// kImpossibleCondition when Pr[τ_t] is (numerically) zero.
ConditionedPrefix condition_on_transcript(const Circuit &c, const Transcript &tau);
double transcript_probability(const Circuit &c, const Transcript &tau);

// Exact factored form of the oracle's behaviour on one circuit.
struct BranchNode {
  int depth = 0;         // t; the root has depth 0
  int parent = -1;
  BitString outcome;     // u_t
  BitString tau;         // u_1‖…‖u_t
  double prob = 1.0;     // Pr[τ_t]
  StateVector state;     // ψ_t^{τ_t} (|0…0⟩ at the root)
  FiniteDist readout;    // readout law at this node (point mass at the root)
  std::vector<int> children;
};

class BranchTree {
 public:
  const Circuit &circuit() const { return *circuit_; }
  const std::vector<BranchNode> &nodes() const { return nodes_; }
  const BranchNode &node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const BranchNode &root() const { return nodes_.front(); }
  // Node indices at depth t (0 ≤ t ≤ T), in lexicographic τ order.
  const std::vector<int> &level(int t) const { return levels_[static_cast<std::size_t>(t)]; }
  const std::vector<int> &leaves() const { return levels_.back(); }
  // Index of the node whose transcript is `tau`, or -1 if pruned/absent.
  int find(const BitString &tau, int t) const;
  // Node indices of the path root→node (excluding the root), depth 1..t.
  std::vector<int> path(int node) const;

 private:
  friend BranchTree enumerate_branches(const Circuit &c, std::uint64_t guard);
  const Circuit *circuit_ = nullptr;
  std::vector<BranchNode> nodes_;
  std::vector<std::vector<int>> levels_;
};

// Number of collapsing paths Π_t 2^{m_t} (saturating).
std::uint64_t branch_count(const Circuit &c);
// The circuit must outlive the returned tree. Throws kInstanceTooLarge when
// branch_count exceeds `guard`.
BranchTree enumerate_branches(const Circuit &c, std::uint64_t guard = kDefaultBranchGuard);

}  // namespace ncmo

#endif  // NCMO_QSIM_H_
