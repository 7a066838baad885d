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

#include "ncmo/qsim.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ncmo/error.h"

namespace ncmo {

namespace {

constexpr double kUnitaryTolerance = 1e-7;
constexpr double kNormTolerance = 1e-9;
// Readout entries below this mass are numerical noise.
constexpr double kReadoutFloor = 1e-14;
// Registers up to this width get each step compiled to one dense matrix.
constexpr int kCompileQubits = 6;

std::size_t bit_of(int qubits, int q) { return static_cast<std::size_t>(qubits - 1 - q); }

// Offsets, inside the full index, of each gate-local basis index.
std::vector<std::size_t> local_offsets(int qubits, const std::vector<int> &targets) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> off(std::size_t{1} << k, 0);
  for (std::size_t l = 0; l < off.size(); ++l) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1U) off[l] |= std::size_t{1} << bit_of(qubits, targets[j]);
    }
  }
  return off;
}

std::size_t target_mask(int qubits, const std::vector<int> &targets) {
  std::size_t mask = 0;
  for (int q : targets) mask |= std::size_t{1} << bit_of(qubits, q);
  return mask;
}

void check_unitary(const std::vector<Complex> &m, std::size_t dim, const std::string &name) {
  if (m.size() != dim * dim) {
    fail(ErrorCode::kStructural, "gate '" + name + "' matrix has " + std::to_string(m.size()) +
                                     " entries, expected " + std::to_string(dim * dim));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += std::conj(m[k * dim + i]) * m[k * dim + j];
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > kUnitaryTolerance) {
        fail(ErrorCode::kStructural, "gate '" + name + "' is not unitary within 1e-7");
      }
    }
  }
}

Gate dense(std::string name, std::vector<int> targets, std::vector<Complex> m) {
  Gate g;
  g.name = std::move(name);
  g.kind = GateKind::kDense;
  g.targets = std::move(targets);
  g.matrix = std::move(m);
  return g;
}

Gate one(const char *name, int q, Complex a, Complex b, Complex c, Complex d) {
  return dense(name, {q}, {a, b, c, d});
}

const Complex kI{0.0, 1.0};

void apply_dense(StateVector &s, const std::vector<int> &targets, const std::vector<Complex> &m) {
  const int n = s.qubits();
  const auto off = local_offsets(n, targets);
  const std::size_t mask = target_mask(n, targets);
  const std::size_t k = off.size();
  auto &a = s.mutable_amplitudes();
  std::vector<Complex> in(k);
  for (std::size_t base = 0; base < a.size(); ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < k; ++l) in[l] = a[base | off[l]];
    for (std::size_t r = 0; r < k; ++r) {
      Complex acc = 0.0;
      const Complex *row = &m[r * k];
      for (std::size_t l = 0; l < k; ++l) acc += row[l] * in[l];
      a[base | off[r]] = acc;
    }
  }
}

void apply_permutation(StateVector &s, const Gate &g) {
  const int n = s.qubits();
  auto &a = s.mutable_amplitudes();
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t x = 0;
    for (int q : g.inputs) x = (x << 1) | ((i >> bit_of(n, q)) & 1U);
    const std::uint64_t fx = g.table[x];
    std::size_t j = i;
    // Flip each output qubit whose bit of f(x) is set.
    const std::size_t k = g.targets.size();
    for (std::size_t b = 0; b < k; ++b) {
      if ((fx >> (k - 1 - b)) & 1U) j ^= std::size_t{1} << bit_of(n, g.targets[b]);
    }
    out[j] = a[i];
  }
  a.swap(out);
}

// U = e^{iφ}(I − 2ww†/w†w) with w = e₀ − e^{−iφ}a and φ = arg a₀, so that U e₀ = a.
void apply_prepare(StateVector &s, const Gate &g) {
  const auto &amp = g.amplitudes;
  const double phi = std::abs(amp[0]) > 0.0 ? std::arg(amp[0]) : 0.0;
  const Complex phase = std::polar(1.0, phi);
  std::vector<Complex> w(amp.size());
  double ww = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    w[i] = (i == 0 ? 1.0 : 0.0) - std::conj(phase) * amp[i];
    ww += std::norm(w[i]);
  }
  const int n = s.qubits();
  const auto off = local_offsets(n, g.targets);
  const std::size_t mask = target_mask(n, g.targets);
  auto &a = s.mutable_amplitudes();
  for (std::size_t base = 0; base < a.size(); ++base) {
    if (base & mask) continue;
    Complex dot = 0.0;
    if (ww > 1e-24) {
      for (std::size_t l = 0; l < off.size(); ++l) dot += std::conj(w[l]) * a[base | off[l]];
    }
    for (std::size_t l = 0; l < off.size(); ++l) {
      Complex &v = a[base | off[l]];
      v = phase * (v - (ww > 1e-24 ? 2.0 * w[l] * dot / ww : Complex{0.0}));
    }
  }
}

}  // namespace

StateVector StateVector::zero(int qubits) {
  if (qubits < 0 || qubits > kMaxQubits) {
    fail(ErrorCode::kInstanceTooLarge, "register of " + std::to_string(qubits) + " qubits exceeds the cap of " +
                                           std::to_string(kMaxQubits));
  }
  std::vector<Complex> a(std::size_t{1} << qubits, 0.0);
  a[0] = 1.0;
  return StateVector(qubits, std::move(a));
}

StateVector StateVector::basis(const BitString &bits) {
  StateVector s = zero(bits.size());
  s.amps_[0] = 0.0;
  s.amps_[bits.empty() ? 0 : bits.to_uint()] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(int qubits, std::vector<Complex> amplitudes) {
  if (qubits < 0 || qubits > kMaxQubits) fail(ErrorCode::kInstanceTooLarge, "register too wide");
  if (amplitudes.size() != (std::size_t{1} << qubits)) {
    fail(ErrorCode::kStructural, "amplitude vector size does not match 2^" + std::to_string(qubits));
  }
  StateVector s(qubits, std::move(amplitudes));
  if (std::abs(s.norm_sq() - 1.0) > kNormTolerance) fail(ErrorCode::kStructural, "state is not normalized");
  return s;
}

double StateVector::norm_sq() const {
  double t = 0.0;
  for (const auto &a : amps_) t += std::norm(a);
  return t;
}

namespace gates {

Gate h(int q) {
  const double r = 1.0 / std::sqrt(2.0);
  return one("h", q, r, r, r, -r);
}
Gate x(int q) { return one("x", q, 0.0, 1.0, 1.0, 0.0); }
Gate y(int q) { return one("y", q, 0.0, -kI, kI, 0.0); }
Gate z(int q) { return one("z", q, 1.0, 0.0, 0.0, -1.0); }
Gate s(int q) { return one("s", q, 1.0, 0.0, 0.0, kI); }
Gate t(int q) { return one("t", q, 1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)); }

Gate rx(int q, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Gate g = one("rx", q, c, -kI * s, -kI * s, c);
  g.angle = angle;
  return g;
}
Gate ry(int q, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Gate g = one("ry", q, c, -s, s, c);
  g.angle = angle;
  return g;
}
Gate rz(int q, double angle) {
  Gate g = one("rz", q, std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2));
  g.angle = angle;
  return g;
}

Gate cx(int control, int target) {
  return dense("cx", {control, target}, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
}
Gate cz(int a, int b) { return dense("cz", {a, b}, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}); }
Gate swap(int a, int b) {
  return dense("swap", {a, b}, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
}
Gate cp(int control, int target, double angle) {
  Gate g = dense("cp", {control, target},
                 {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, std::polar(1.0, angle)});
  g.angle = angle;
  return g;
}

Gate unitary(std::vector<int> targets, std::vector<Complex> matrix) {
  if (targets.empty() || targets.size() > static_cast<std::size_t>(kMaxQubits)) {
    fail(ErrorCode::kStructural, "unitary gate needs 1..12 targets");
  }
  check_unitary(matrix, std::size_t{1} << targets.size(), "unitary");
  return dense("unitary", std::move(targets), std::move(matrix));
}

Gate oracle(std::vector<int> inputs, std::vector<int> outputs, std::vector<std::uint64_t> table) {
  Gate g;
  g.name = "oracle";
  g.kind = GateKind::kPermutation;
  g.inputs = std::move(inputs);
  g.targets = std::move(outputs);
  g.table = std::move(table);
  if (g.inputs.size() > static_cast<std::size_t>(kMaxQubits) || g.targets.empty() ||
      g.targets.size() > static_cast<std::size_t>(kMaxQubits)) {
    fail(ErrorCode::kStructural, "oracle gate register widths out of range");
  }
  if (g.table.size() != (std::size_t{1} << g.inputs.size())) {
    fail(ErrorCode::kStructural, "oracle table needs 2^|inputs| entries");
  }
  const std::uint64_t limit = std::uint64_t{1} << g.targets.size();
  for (auto v : g.table) {
    if (v >= limit) fail(ErrorCode::kStructural, "oracle table entry does not fit the output register");
  }
  return g;
}

Gate prepare(std::vector<int> targets, std::vector<Complex> amplitudes) {
  if (targets.empty() || targets.size() > static_cast<std::size_t>(kMaxQubits)) {
    fail(ErrorCode::kStructural, "prepare gate needs 1..12 targets");
  }
  if (amplitudes.size() != (std::size_t{1} << targets.size())) {
    fail(ErrorCode::kStructural, "prepare gate needs 2^|targets| amplitudes");
  }
  double n = 0.0;
  for (const auto &a : amplitudes) n += std::norm(a);
  if (std::abs(n - 1.0) > kNormTolerance) fail(ErrorCode::kStructural, "prepare amplitudes are not normalized");
  Gate g;
  g.name = "prepare";
  g.kind = GateKind::kPrepare;
  g.targets = std::move(targets);
  g.amplitudes = std::move(amplitudes);
  return g;
}

Gate named(const std::string &name, std::vector<int> targets, std::optional<double> angle) {
  auto need = [&](std::size_t k, bool with_angle) {
    if (targets.size() != k) {
      fail(ErrorCode::kParse, "gate '" + name + "' takes " + std::to_string(k) + " target(s)");
    }
    if (with_angle != angle.has_value()) {
      fail(ErrorCode::kParse, with_angle ? "gate '" + name + "' needs an angle"
                                         : "gate '" + name + "' takes no angle");
    }
  };
  if (name == "h") return need(1, false), h(targets[0]);
  if (name == "x") return need(1, false), x(targets[0]);
  if (name == "y") return need(1, false), y(targets[0]);
  if (name == "z") return need(1, false), z(targets[0]);
  if (name == "s") return need(1, false), s(targets[0]);
  if (name == "t") return need(1, false), t(targets[0]);
  if (name == "rx") return need(1, true), rx(targets[0], *angle);
  if (name == "ry") return need(1, true), ry(targets[0], *angle);
  if (name == "rz") return need(1, true), rz(targets[0], *angle);
  if (name == "cx" || name == "cnot") return need(2, false), cx(targets[0], targets[1]);
  if (name == "cz") return need(2, false), cz(targets[0], targets[1]);
  if (name == "swap") return need(2, false), swap(targets[0], targets[1]);
  if (name == "cp") return need(2, true), cp(targets[0], targets[1], *angle);
  if (name == "id" || name == "i") {
    need(1, false);
    return dense("id", {targets[0]}, {1, 0, 0, 1});
  }
  fail(ErrorCode::kParse, "unknown gate '" + name + "'");
}

}  // namespace gates

void validate_gate(const Gate &g, int qubits) {
  std::uint32_t seen = 0;
  auto check = [&](int q) {
    if (q < 0 || q >= qubits) {
      fail(ErrorCode::kStructural, "gate '" + g.name + "' targets qubit " + std::to_string(q) + " outside [0, " +
                                       std::to_string(qubits) + ")");
    }
    const std::uint32_t bit = std::uint32_t{1} << q;
    const bool repeated = (seen & bit) != 0;
    seen |= bit;
    if (repeated) {
      fail(ErrorCode::kStructural, "gate '" + g.name + "' repeats qubit " + std::to_string(q));
    }
  };
  for (int q : g.targets) check(q);
  for (int q : g.inputs) check(q);
  if (g.targets.empty()) fail(ErrorCode::kStructural, "gate '" + g.name + "' has no targets");
  switch (g.kind) {
    case GateKind::kDense:
      if (g.matrix.size() != (std::size_t{1} << (2 * g.targets.size()))) {
        fail(ErrorCode::kStructural, "gate '" + g.name + "' matrix size does not match its targets");
      }
      break;
    case GateKind::kPermutation:
      if (g.table.size() != (std::size_t{1} << g.inputs.size())) {
        fail(ErrorCode::kStructural, "oracle table size does not match its inputs");
      }
      break;
    case GateKind::kPrepare:
      if (g.amplitudes.size() != (std::size_t{1} << g.targets.size())) {
        fail(ErrorCode::kStructural, "prepare amplitudes do not match its targets");
      }
      break;
  }
}

void Circuit::validate() const {
  if (qubits < 1) fail(ErrorCode::kStructural, "circuit needs at least one qubit");
  if (qubits > kMaxQubits) {
    fail(ErrorCode::kInstanceTooLarge, "circuit has " + std::to_string(qubits) + " qubits; cap is " +
                                           std::to_string(kMaxQubits));
  }
  if (steps.empty()) fail(ErrorCode::kStructural, "circuit needs at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Step &st = steps[i];
    if (st.measure < 0 || st.measure > qubits) {
      fail(ErrorCode::kStructural, "step " + std::to_string(i + 1) + " measures " + std::to_string(st.measure) +
                                       " of " + std::to_string(qubits) + " qubits");
    }
    for (const Gate &g : st.gates) validate_gate(g, qubits);
  }
}

void apply_gate(StateVector &s, const Gate &g) {
  validate_gate(g, s.qubits());
  switch (g.kind) {
    case GateKind::kDense:
      apply_dense(s, g.targets, g.matrix);
      break;
    case GateKind::kPermutation:
      apply_permutation(s, g);
      break;
    case GateKind::kPrepare:
      apply_prepare(s, g);
      break;
  }
}

StateVector apply_unitary(StateVector s, const Step &step) {
  for (const Gate &g : step.gates) apply_gate(s, g);
  return s;
}

CompiledStep::CompiledStep(const Step &step, int qubits) : step_(&step) {
  for (const Gate &g : step.gates) validate_gate(g, qubits);
  if (qubits > kCompileQubits || step.gates.size() < 2) return;
  // Column j of the matrix is the image of basis state j.
  const std::size_t dim = std::size_t{1} << qubits;
  dense_.assign(dim * dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    StateVector col = StateVector::basis(BitString::from_uint(j, qubits));
    for (const Gate &g : step.gates) apply_gate(col, g);
    for (std::size_t i = 0; i < dim; ++i) dense_[i * dim + j] = col[i];
  }
}

void CompiledStep::apply(StateVector &s) const {
  if (dense_.empty()) {
    for (const Gate &g : step_->gates) apply_gate(s, g);
    return;
  }
  const std::size_t dim = s.dim();
  std::vector<Complex> out(dim, 0.0);
  const auto &a = s.amplitudes();
  for (std::size_t i = 0; i < dim; ++i) {
    Complex acc = 0.0;
    const Complex *row = &dense_[i * dim];
    for (std::size_t j = 0; j < dim; ++j) acc += row[j] * a[j];
    out[i] = acc;
  }
  s.mutable_amplitudes().swap(out);
}

std::vector<double> outcome_probabilities(const StateVector &s, int m) {
  if (m < 0 || m > s.qubits()) fail(ErrorCode::kStructural, "measurement width out of range");
  const std::size_t block = std::size_t{1} << (s.qubits() - m);
  std::vector<double> p(std::size_t{1} << m, 0.0);
  for (std::size_t i = 0; i < s.dim(); ++i) p[i / block] += std::norm(s[i]);
  return p;
}

StateVector project(const StateVector &s, const BitString &u) {
  const int m = u.size();
  if (m > s.qubits()) fail(ErrorCode::kStructural, "outcome longer than the register");
  if (m == 0) return s;
  const std::size_t block = std::size_t{1} << (s.qubits() - m);
  const std::size_t start = static_cast<std::size_t>(u.to_uint()) * block;
  double mass = 0.0;
  for (std::size_t i = start; i < start + block; ++i) mass += std::norm(s[i]);
  if (mass <= kPruneThreshold) fail(ErrorCode::kImpossibleCondition, "outcome " + u.str() + " has zero probability");
  std::vector<Complex> a(s.dim(), 0.0);
  const double scale = 1.0 / std::sqrt(mass);
  for (std::size_t i = start; i < start + block; ++i) a[i] = s[i] * scale;
  return StateVector::from_amplitudes(s.qubits(), std::move(a));
}

namespace {

// Draws an outcome index among those above the pruning threshold.
std::size_t draw_outcome(const std::vector<double> &p, Rng &rng, double *prob) {
  double kept = 0.0;
  for (double v : p) kept += v > kPruneThreshold ? v : 0.0;
  const double u = rng.uniform() * kept;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= kPruneThreshold) continue;
    last = i;
    acc += p[i];
    if (u < acc) {
      *prob = p[i];
      return i;
    }
  }
  *prob = p[last];
  return last;
}

}  // namespace

BitString measure_in_place(StateVector &s, int m, Rng &rng) {
  if (m == 0) return BitString();
  const auto p = outcome_probabilities(s, m);
  double prob = 0.0;
  const std::size_t u = draw_outcome(p, rng, &prob);
  const std::size_t block = std::size_t{1} << (s.qubits() - m);
  const double scale = 1.0 / std::sqrt(prob);
  auto &a = s.mutable_amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = (i / block == u) ? a[i] * scale : Complex{0.0};
  }
  return BitString::from_uint(u, m);
}

MeasureResult measure_collapsing(const StateVector &s, int m, Rng &rng) {
  if (m < 0 || m > s.qubits()) fail(ErrorCode::kStructural, "measurement width out of range");
  if (m == 0) return {BitString(), s, 1.0};
  const auto p = outcome_probabilities(s, m);
  double prob = 0.0;
  const std::size_t u = draw_outcome(p, rng, &prob);
  BitString outcome = BitString::from_uint(u, m);
  return {outcome, project(s, outcome), prob};
}

FiniteDist readout_distribution(const StateVector &s) {
  FiniteDist::Map m;
  double total = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double p = std::norm(s[i]);
    if (p < kReadoutFloor) continue;
    m.emplace_hint(m.end(), BitString::from_uint(i, s.qubits()), p);
    total += p;
  }
  for (auto &[k, p] : m) p /= total;
  return FiniteDist::from_map(s.qubits(), std::move(m));
}

BitString sample_readout(const StateVector &s, Rng &rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double p = std::norm(s[i]);
    if (p < kReadoutFloor) continue;
    last = i;
    acc += p;
    if (u < acc) return BitString::from_uint(i, s.qubits());
  }
  return BitString::from_uint(last, s.qubits());
}

BitString Transcript::concat() const {
  BitString out;
  for (const auto &u : outcomes) out.append(u);
  return out;
}

Transcript Transcript::split(const Circuit &c, int t, const BitString &bits) {
  Transcript tau;
  int pos = 0;
  for (int i = 1; i <= t; ++i) {
    tau.outcomes.push_back(bits.substr(pos, c.measured(i)));
    pos += c.measured(i);
  }
  if (pos != bits.size()) fail(ErrorCode::kStructural, "transcript length does not match the circuit");
  return tau;
}

PrefixRun run_prefix(const Circuit &c, int t, Rng &rng) {
  if (t < 1 || t > c.T()) fail(ErrorCode::kStructural, "prefix length out of range");
  StateVector s = StateVector::zero(c.qubits);
  Transcript tau;
  for (int i = 1; i <= t; ++i) {
    const Step &st = c.steps[static_cast<std::size_t>(i - 1)];
    for (const Gate &g : st.gates) apply_gate(s, g);
    tau.outcomes.push_back(measure_in_place(s, st.measure, rng));
  }
  return {std::move(tau), std::move(s)};
}

ConditionedPrefix condition_on_transcript(const Circuit &c, const Transcript &tau) {
  if (tau.steps() < 1 || tau.steps() > c.T()) fail(ErrorCode::kStructural, "transcript length out of range");
  StateVector s = StateVector::zero(c.qubits);
  double prob = 1.0;
  for (int i = 1; i <= tau.steps(); ++i) {
    const Step &st = c.steps[static_cast<std::size_t>(i - 1)];
    const BitString &u = tau.outcomes[static_cast<std::size_t>(i - 1)];
    if (u.size() != st.measure) fail(ErrorCode::kStructural, "transcript entry width does not match the step");
    for (const Gate &g : st.gates) apply_gate(s, g);
    if (st.measure == 0) continue;
    const auto p = outcome_probabilities(s, st.measure);
    const double pu = p[static_cast<std::size_t>(u.to_uint())];
    if (pu <= kPruneThreshold) {
      fail(ErrorCode::kImpossibleCondition, "transcript " + tau.concat().str() + " has zero probability");
    }
    prob *= pu;
    s = project(s, u);
  }
  return {prob, std::move(s)};
}

double transcript_probability(const Circuit &c, const Transcript &tau) {
  try {
    return condition_on_transcript(c, tau).prob;
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kImpossibleCondition) return 0.0;
    throw;
  }
}

int BranchTree::find(const BitString &tau, int t) const {
  if (t < 0 || t >= static_cast<int>(levels_.size())) return -1;
  const auto &lv = level(t);
  auto it = std::lower_bound(lv.begin(), lv.end(), tau,
                             [this](int idx, const BitString &key) { return node(idx).tau < key; });
  if (it == lv.end() || node(*it).tau != tau) return -1;
  return *it;
}

std::vector<int> BranchTree::path(int idx) const {
  std::vector<int> out;
  for (int i = idx; i > 0; i = node(i).parent) out.push_back(i);
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t branch_count(const Circuit &c) {
  int bits = 0;
  for (const Step &st : c.steps) bits += st.measure;
  if (bits >= 63) return UINT64_MAX;
  return std::uint64_t{1} << bits;
}

BranchTree enumerate_branches(const Circuit &c, std::uint64_t guard) {
  c.validate();
  const std::uint64_t count = branch_count(c);
  if (count > guard) {
    fail(ErrorCode::kInstanceTooLarge, "circuit has " + std::to_string(count) +
                                           " collapsing paths, above the enumeration guard of " +
                                           std::to_string(guard));
  }
  BranchTree tree;
  tree.circuit_ = &c;
  BranchNode root;
  root.state = StateVector::zero(c.qubits);
  root.readout = FiniteDist::point(BitString::zeros(c.qubits));
  tree.nodes_.push_back(std::move(root));
  tree.levels_.push_back({0});
  for (int t = 1; t <= c.T(); ++t) {
    const Step &st = c.steps[static_cast<std::size_t>(t - 1)];
    const CompiledStep u(st, c.qubits);
    std::vector<int> next;
    for (int parent : tree.levels_.back()) {
      StateVector evolved = tree.nodes_[static_cast<std::size_t>(parent)].state;
      u.apply(evolved);
      const auto p = outcome_probabilities(evolved, st.measure);
      for (std::size_t o = 0; o < p.size(); ++o) {
        if (p[o] <= kPruneThreshold) continue;
        BranchNode n;
        n.depth = t;
        n.parent = parent;
        n.outcome = BitString::from_uint(o, st.measure);
        n.tau = tree.nodes_[static_cast<std::size_t>(parent)].tau + n.outcome;
        n.prob = tree.nodes_[static_cast<std::size_t>(parent)].prob * p[o];
        n.state = project(evolved, n.outcome);
        n.readout = readout_distribution(n.state);
        const int idx = static_cast<int>(tree.nodes_.size());
        tree.nodes_[static_cast<std::size_t>(parent)].children.push_back(idx);
        tree.nodes_.push_back(std::move(n));
        next.push_back(idx);
      }
    }
    tree.levels_.push_back(std::move(next));
  }
  return tree;
}

}  // namespace ncmo
