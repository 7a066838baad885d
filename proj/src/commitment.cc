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

#include "ncmo/commitment.h"

#include <cmath>
#include <map>
#include <memory>

#include "ncmo/error.h"

namespace ncmo {

namespace {

BitString bit(bool b) { return BitString::from_uint(b ? 1 : 0, 1); }

}  // namespace

ComVariant com_variant_from_string(const std::string &s) {
  if (s == "literal") return ComVariant::kLiteral;
  if (s == "coherent") return ComVariant::kCoherent;
  fail(ErrorCode::kParse, "unknown variant '" + s + "' (literal|coherent)");
}

std::string to_string(ComVariant v) { return v == ComVariant::kLiteral ? "literal" : "coherent"; }

Commitment::Commit Commitment::commit(const BitString &r1, bool b, Rng &rng) const {
  Commit out;
  out.s1 = sample(s1_law(r1, b), rng);
  out.psi = sender_state(r1, b, out.s1);
  return out;
}

BitString Commitment::open(bool b, const StateVector &psi, Rng &rng) const { return sample(open_law(b, psi), rng); }

double Commitment::opening_success(const BitString &r1, bool b, const BitString &s1) const {
  double total = 0.0;
  for (const auto &[s2, q] : open_law(b, sender_state(r1, b, s1))) {
    if (receiver_accepts(r1, s1, s2, b)) total += q;
  }
  return total;
}

// --- toy scheme ---

ToyCommitment::ToyCommitment(int n, int c, int r1_bits, std::uint64_t seed) : n_(n), c_(c), r1_bits_(r1_bits) {
  if (n_ < 1 || n_ > 4) fail(ErrorCode::kInstanceTooLarge, "toy commitment supports 1 ≤ n ≤ 4");
  if (c_ < 0 || c_ >= n_) fail(ErrorCode::kStructural, "compression must satisfy 0 ≤ c < n");
  if (r1_bits_ < 0 || r1_bits_ > 4) fail(ErrorCode::kInstanceTooLarge, "toy commitment supports at most 4 r1 bits");
  const Rng root(seed);
  const std::uint64_t size = std::uint64_t{1} << (2 * n_);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << r1_bits_); ++v) {
    Rng rng = root.fork(v);
    std::vector<std::uint64_t> t(size);
    for (auto &y : t) y = rng.below(std::uint64_t{1} << (n_ - c_));
    tables_.push_back(std::move(t));
  }
}

ToyCommitment::ToyCommitment(int n, int c, std::vector<std::vector<std::uint64_t>> tables)
    : n_(n), c_(c), r1_bits_(0), tables_(std::move(tables)) {
  if (n_ < 1 || n_ > 4) fail(ErrorCode::kInstanceTooLarge, "toy commitment supports 1 ≤ n ≤ 4");
  if (c_ < 0 || c_ >= n_) fail(ErrorCode::kStructural, "compression must satisfy 0 ≤ c < n");
  while ((std::size_t{1} << r1_bits_) < tables_.size()) ++r1_bits_;
  if (tables_.empty() || (std::size_t{1} << r1_bits_) != tables_.size() || r1_bits_ > 4) {
    fail(ErrorCode::kStructural, "need a power-of-two number of tables (at most 16)");
  }
  for (const auto &t : tables_) {
    if (t.size() != (std::size_t{1} << (2 * n_))) fail(ErrorCode::kStructural, "each table needs 2^{2n} entries");
    for (auto y : t) {
      if (y >> (n_ - c_)) fail(ErrorCode::kStructural, "table value wider than n − c bits");
    }
  }
}

const std::vector<std::uint64_t> &ToyCommitment::table(const BitString &r1) const {
  if (r1.size() != r1_bits_) fail(ErrorCode::kStructural, "r1 has the wrong length");
  return tables_[r1.empty() ? 0 : static_cast<std::size_t>(r1.to_uint())];
}

FiniteDist ToyCommitment::r1_law() const { return FiniteDist::uniform(r1_bits_); }

FiniteDist ToyCommitment::s1_law(const BitString &r1, bool b) const {
  const auto &t = table(r1);
  const std::uint64_t half = std::uint64_t{1} << (2 * n_ - 1);
  DistBuilder out(s1_length());
  for (std::uint64_t i = b ? half : 0; i < (b ? 2 * half : half); ++i) {
    out.add(BitString::from_uint(t[i], s1_length()), 1.0 / static_cast<double>(half));
  }
  return out.build();
}

StateVector ToyCommitment::sender_state(const BitString &r1, bool b, const BitString &s1) const {
  if (s1.size() != s1_length()) fail(ErrorCode::kStructural, "s1 has the wrong length");
  const auto &t = table(r1);
  const std::uint64_t half = std::uint64_t{1} << (2 * n_ - 1);
  const std::uint64_t y = s1.to_uint();
  std::vector<Complex> amps(2 * half, 0.0);
  std::uint64_t count = 0;
  for (std::uint64_t i = b ? half : 0; i < (b ? 2 * half : half); ++i) {
    if (t[i] == y) {
      amps[i] = 1.0;
      ++count;
    }
  }
  if (count == 0) fail(ErrorCode::kImpossibleCondition, "s1 = " + s1.str() + " is impossible for b = " + (b ? "1" : "0"));
  for (auto &a : amps) a /= std::sqrt(static_cast<double>(count));
  return StateVector::from_amplitudes(2 * n_, std::move(amps));
}

FiniteDist ToyCommitment::open_law(bool, const StateVector &psi) const {
  if (psi.qubits() != 2 * n_) fail(ErrorCode::kStructural, "sender state has the wrong width");
  return readout_distribution(psi);
}

bool ToyCommitment::receiver_accepts(const BitString &r1, const BitString &s1, const BitString &s2, bool b) const {
  if (s1.size() != s1_length() || s2.size() != s2_length()) return false;
  return table(r1)[static_cast<std::size_t>(s2.to_uint())] == s1.to_uint() && s2[0] == b;
}

std::optional<Circuit> ToyCommitment::dsamp_circuit(const BitString &r1, ComVariant v) const {
  // Registers [y | b | x | θ].
  const int k = n_ - c_;
  const int width = k + 1 + 2 * n_;
  if (width > kMaxQubits) return std::nullopt;
  const int bq = k, x0 = k + 1;
  Step step;
  if (v == ComVariant::kLiteral) {
    step.gates.push_back(gates::h(bq));
  } else {
    step.gates.push_back(gates::h(x0));
    step.gates.push_back(gates::cx(x0, bq));
  }
  for (int q = x0 + 1; q < width; ++q) step.gates.push_back(gates::h(q));
  std::vector<int> inputs, outputs;
  for (int q = x0; q < width; ++q) inputs.push_back(q);
  for (int q = 0; q < k; ++q) outputs.push_back(q);
  step.gates.push_back(gates::oracle(inputs, outputs, table(r1)));
  Circuit c;
  c.qubits = width;
  c.steps.push_back(std::move(step));
  c.validate();
  return c;
}

// --- trivial scheme ---

FiniteDist TrivialCommitment::r1_law() const { return FiniteDist::uniform(0); }
FiniteDist TrivialCommitment::s1_law(const BitString &, bool) const { return FiniteDist::uniform(1); }

StateVector TrivialCommitment::sender_state(const BitString &, bool, const BitString &s1) const {
  if (s1.size() != 1) fail(ErrorCode::kStructural, "s1 has the wrong length");
  return StateVector::basis(s1);
}

FiniteDist TrivialCommitment::open_law(bool, const StateVector &psi) const { return readout_distribution(psi); }

bool TrivialCommitment::receiver_accepts(const BitString &, const BitString &s1, const BitString &s2, bool) const {
  return s1.size() == 1 && s2 == s1;
}

// --- reduction ---

FiniteDist com_samp_law(const Commitment &com, const BitString &r1, ComVariant v) {
  FiniteDist::Map m;
  if (v == ComVariant::kLiteral) {
    for (const auto &[s1, p] : com.s1_law(r1, false)) {
      const StateVector psi = com.sender_state(r1, false, s1);
      for (bool b : {false, true}) {
        for (const auto &[s2, q] : com.open_law(b, psi)) m[s1 + bit(b) + s2] += 0.5 * p * q;
      }
    }
  } else {
    // Measuring s₁ on the superposed commitment leaves Σ_b √Pr[b|s₁] |b⟩|ψ_S(b, s₁)⟩;
    // the joint law of (s₁, b) is ½ Pr[s₁ | b].
    for (bool b : {false, true}) {
      for (const auto &[s1, p] : com.s1_law(r1, b)) {
        for (const auto &[s2, q] : com.open_law(b, com.sender_state(r1, b, s1))) m[s1 + bit(b) + s2] += 0.5 * p * q;
      }
    }
  }
  return FiniteDist::from_map(com.s1_length() + 1 + com.s2_length(), std::move(m));
}

DcrScheme com_to_dcrpuzz(const Commitment &com, ComVariant v) {
  DcrScheme s;
  s.name = com.name() + "-commitment/" + to_string(v);
  s.pp_len = com.r1_length();
  s.puzz_len = com.s1_length();
  s.ans_len = 1 + com.s2_length();
  s.setup = com.r1_law();
  auto laws = std::make_shared<std::map<BitString, FiniteDist>>();
  auto circuits = std::make_shared<std::map<BitString, Circuit>>();
  bool backed = true;
  for (const auto &[r1, p] : s.setup) {
    const FiniteDist law = com_samp_law(com, r1, v);
    if (auto c = com.dsamp_circuit(r1, v)) {
      circuits->emplace(r1, std::move(*c));
    } else if (law.length() <= kMaxQubits) {
      circuits->emplace(r1, purify(law));
    } else {
      backed = false;
    }
    laws->emplace(r1, law);
  }
  s.samp = [laws](const BitString &r1) {
    auto it = laws->find(r1);
    if (it == laws->end()) fail(ErrorCode::kStructural, "r1 outside the receiver's support");
    return it->second;
  };
  if (backed) s.vpp = [circuits](const BitString &r1) { return circuits->at(r1); };
  return s;
}

bool com_breaker_wins(const Commitment &com, const BitString &r1, const BitString &triple) {
  const int p = com.s1_length(), a = 1 + com.s2_length();
  if (triple.size() != p + 2 * a) fail(ErrorCode::kStructural, "collision has the wrong width");
  const BitString s1 = triple.prefix(p);
  const BitString s2 = triple.substr(p + 1, a - 1);
  const BitString s2b = triple.suffix_from(p + a + 1);
  return com.receiver_accepts(r1, s1, s2, false) && com.receiver_accepts(r1, s1, s2b, true);
}

double com_break_exact(const Commitment &com, const CollisionSource &source) {
  double total = 0.0;
  for (const auto &[r1, p] : com.r1_law()) {
    for (const auto &[t, q] : source(r1)) {
      if (com_breaker_wins(com, r1, t)) total += p * q;
    }
  }
  return total;
}

ComOpenings algorithm_c_com(const Commitment &com, const BitString &r1, Rng &rng, RegenPolicy policy) {
  const Commitment::Commit first = com.commit(r1, false, rng);
  ComOpenings out;
  out.s1 = first.s1;
  out.s2 = com.open(false, first.psi, rng);
  const bool regen = policy == RegenPolicy::kOpenBit;
  if (com.s1_law(r1, regen).prob(first.s1) <= 0.0) {
    fail(ErrorCode::kImpossibleCondition,
         "no sender state for b = " + std::string(regen ? "1" : "0") + " is consistent with s1 = " + first.s1.str());
  }
  out.s2b = com.open(true, com.sender_state(r1, regen, first.s1), rng);
  return out;
}

AlgorithmCExact algorithm_c_com_exact(const Commitment &com, RegenPolicy policy) {
  const bool regen = policy == RegenPolicy::kOpenBit;
  AlgorithmCExact out;
  for (const auto &[r1, pr] : com.r1_law()) {
    const FiniteDist regen_law = com.s1_law(r1, regen);
    for (const auto &[s1, p] : com.s1_law(r1, false)) {
      if (regen_law.prob(s1) <= 0.0) {
        out.impossible_mass += pr * p;
        continue;
      }
      double second = 0.0;
      for (const auto &[s2, q] : com.open_law(true, com.sender_state(r1, regen, s1))) {
        if (com.receiver_accepts(r1, s1, s2, true)) second += q;
      }
      out.success += pr * p * com.opening_success(r1, false, s1) * second;
    }
  }
  return out;
}

GameReport com_break_via_collision(const Commitment &com, ComVariant v, CollisionSourceKind kind,
                                   std::uint64_t trials, std::uint64_t seed) {
  const DcrScheme scheme = com_to_dcrpuzz(com, v);
  const RegenPolicy policy = v == ComVariant::kCoherent ? RegenPolicy::kOpenBit : RegenPolicy::kCommitBit;
  GameReport r;
  r.game = "commitment-binding/" + to_string(v) + "/" + to_string(kind);
  r.trials = trials;
  switch (kind) {
    case CollisionSourceKind::kExactCol:
      r.exact = com_break_exact(com, [&](const BitString &r1) { return col_law(scheme, r1); });
      break;
    case CollisionSourceKind::kOracleBacked:
      if (!scheme.circuit_backed()) fail(ErrorCode::kInstanceTooLarge, "derived sampler too wide for the oracle");
      r.exact = com_break_exact(com, [&](const BitString &r1) { return dpp_oracle_law(scheme, r1); });
      break;
    case CollisionSourceKind::kHonestDuplicate:
      r.exact = com_break_exact(com, [&](const BitString &r1) {
        return push_forward(scheme.samp(r1), [&](const BitString &s) { return s + s.suffix_from(scheme.puzz_len); });
      });
      break;
    case CollisionSourceKind::kAlgorithmC:
      r.exact = algorithm_c_com_exact(com, policy).success;
      break;
  }
  Rng rng(seed);
  const FiniteDist r1_law = com.r1_law();
  CollisionFinder finder(scheme, kind == CollisionSourceKind::kOracleBacked ? CollisionFinder::Kind::kOracle
                                                                             : CollisionFinder::Kind::kCol);
  std::map<BitString, DistSampler> samplers;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const BitString r1 = sample(r1_law, rng);
    bool win = false;
    switch (kind) {
      case CollisionSourceKind::kExactCol:
      case CollisionSourceKind::kOracleBacked:
        win = com_breaker_wins(com, r1, finder(r1, rng).concat());
        break;
      case CollisionSourceKind::kHonestDuplicate: {
        auto it = samplers.find(r1);
        if (it == samplers.end()) it = samplers.emplace(r1, DistSampler(scheme.samp(r1))).first;
        const BitString s = it->second(rng);
        win = com_breaker_wins(com, r1, s + s.suffix_from(scheme.puzz_len));
        break;
      }
      case CollisionSourceKind::kAlgorithmC:
        try {
          const ComOpenings o = algorithm_c_com(com, r1, rng, policy);
          win = com.receiver_accepts(r1, o.s1, o.s2, false) && com.receiver_accepts(r1, o.s1, o.s2b, true);
        } catch (const Error &e) {
          if (e.code() != ErrorCode::kImpossibleCondition) throw;
          ++r.aborted;
        }
        break;
    }
    if (win) ++r.successes;
  }
  return r;
}

CommitmentAudit hiding_and_correctness_audit(const Commitment &com, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) fail(ErrorCode::kStructural, "threshold 1/p must lie in [0, 1]");
  CommitmentAudit a;
  a.threshold = threshold;
  const double keep = 1.0 - threshold;
  for (const auto &[r1, pr] : com.r1_law()) {
    const FiniteDist law[2] = {com.s1_law(r1, false), com.s1_law(r1, true)};
    a.hiding_sd += pr * sd(law[0], law[1]);
    std::map<BitString, double> success[2];
    for (int b = 0; b < 2; ++b) {
      for (const auto &[s1, p] : law[b]) {
        const double c = com.opening_success(r1, b == 1, s1);
        success[b][s1] = c;
        a.correctness[b] += pr * p * c;
        if (c >= keep - kProbTolerance) a.good_mass[b] += pr * p;
      }
    }
    for (const auto &[s1, p] : law[0]) {
      auto it = success[1].find(s1);
      const double c1 = it == success[1].end() ? 0.0 : it->second;
      if (it != success[1].end() && c1 >= keep - kProbTolerance) a.g1_mass_under_b0 += pr * p;
      a.algorithm_c_success += pr * p * success[0][s1] * c1;
    }
  }
  a.bound = std::max(0.0, a.good_mass[0] + a.good_mass[1] - 2.0 * a.hiding_sd - 1.0) * keep * keep;
  a.g1_transfer_holds = a.g1_mass_under_b0 >= a.good_mass[1] - 2.0 * a.hiding_sd - kProbTolerance;
  a.bound_holds = a.algorithm_c_success >= a.bound - kProbTolerance;
  return a;
}

}  // namespace ncmo
