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

#include "ncmo/oracle.h"

#include <cstdlib>
#include <string>

#include "ncmo/error.h"

namespace ncmo {

Limits Limits::from_env() {
  Limits l;
  if (const char *v = std::getenv("NCMO_MAX_BRANCHES"); v != nullptr && *v != '\0') {
    char *end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (*end != '\0' || n == 0 || v[0] == '-') {
      fail(ErrorCode::kParse, std::string("NCMO_MAX_BRANCHES must be a positive integer, got '") + v + "'");
    }
    l.max_branches = n;
  }
  return l;
}

BitString OracleOutput::concat() const {
  BitString out;
  for (const auto &v : reads) out.append(v);
  return out;
}

OracleOutput OracleOutput::split(const BitString &bits, int qubits) {
  if (qubits <= 0 || bits.size() % qubits != 0) {
    fail(ErrorCode::kStructural, "oracle output of " + std::to_string(bits.size()) +
                                     " bits does not split into reads of " + std::to_string(qubits));
  }
  OracleOutput out;
  for (int pos = 0; pos < bits.size(); pos += qubits) out.reads.push_back(bits.substr(pos, qubits));
  return out;
}

OracleSampler::OracleSampler(const Circuit &c) : circuit_(&c) {
  c.validate();
  steps_.reserve(c.steps.size());
  for (const Step &st : c.steps) steps_.emplace_back(st, c.qubits);
}

OracleOutput OracleSampler::operator()(Rng &rng) const {
  StateVector s = StateVector::zero(circuit_->qubits);
  OracleOutput out;
  out.reads.reserve(steps_.size());
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    steps_[i].apply(s);
    const int m = circuit_->steps[i].measure;
    const BitString u = measure_in_place(s, m, rng);
    BitString v = sample_readout(s, rng);
    // A read of the post-measurement state always extends the outcome.
    if (!v.starts_with(u)) {
      fail(ErrorCode::kStructural, "branch consistency violated at step " + std::to_string(i + 1));
    }
    out.reads.push_back(std::move(v));
  }
  return out;
}

OracleOutput oracle_sample(const Circuit &c, Rng &rng) { return OracleSampler(c)(rng); }

void check_exact_guard(const Circuit &c, const Limits &limits) {
  const long long bits = static_cast<long long>(c.T()) * c.qubits;
  if (bits > limits.max_exact_bits) {
    fail(ErrorCode::kInstanceTooLarge, "joint output has " + std::to_string(bits) + " bits, above the " +
                                           std::to_string(limits.max_exact_bits) +
                                           "-bit materialization guard; use factored queries");
  }
}

namespace {

void expand(const std::vector<const FiniteDist *> &factors, std::size_t i, const BitString &prefix, double w,
            FiniteDist::Map &out) {
  if (i == factors.size()) {
    out[prefix] += w;
    return;
  }
  for (const auto &[s, p] : *factors[i]) expand(factors, i + 1, prefix + s, w * p, out);
}

}  // namespace

void add_product(const std::vector<const FiniteDist *> &factors, double weight, DistBuilder &out) {
  FiniteDist::Map local;
  expand(factors, 0, BitString(), weight, local);
  for (const auto &[s, p] : local) out.add(s, p);
}

FiniteDist oracle_exact(const BranchTree &tree, const Limits &limits) {
  const Circuit &c = tree.circuit();
  check_exact_guard(c, limits);
  DistBuilder out(c.T() * c.qubits);
  for (int leaf : tree.leaves()) {
    std::vector<const FiniteDist *> factors;
    for (int n : tree.path(leaf)) factors.push_back(&tree.node(n).readout);
    add_product(factors, tree.node(leaf).prob, out);
  }
  return out.build();
}

FiniteDist oracle_exact(const Circuit &c, const Limits &limits) {
  check_exact_guard(c, limits);
  return oracle_exact(enumerate_branches(c, limits.max_branches), limits);
}

QtSample q_t(const Circuit &c, int t, Rng &rng) {
  PrefixRun run = run_prefix(c, t, rng);
  const BitString v = sample_readout(run.state, rng);
  return {std::move(run.tau), v.suffix_from(c.measured(t))};
}

FiniteDist q_t_law(const BranchTree &tree, int t) {
  const Circuit &c = tree.circuit();
  if (t < 1 || t > c.T()) fail(ErrorCode::kStructural, "step index out of range");
  FiniteDist::Map m;
  int length = -1;
  for (int idx : tree.level(t)) {
    const BranchNode &n = tree.node(idx);
    const FiniteDist w = condition(n.readout, n.outcome);
    for (const auto &[s, p] : w) {
      BitString key = n.tau + s;
      length = key.size();
      m[std::move(key)] += n.prob * p;
    }
  }
  return FiniteDist::from_map(length, std::move(m));
}

namespace {

void require_positive(const Circuit &c, const Transcript &tau) {
  if (tau.steps() == 0) return;
  condition_on_transcript(c, tau);  // throws kImpossibleCondition
}

bool matches(const Transcript &want, const std::vector<BitString> &got) {
  for (int i = 0; i < want.steps(); ++i) {
    if (want.outcomes[static_cast<std::size_t>(i)] != got[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

[[noreturn]] void exhausted(std::uint64_t budget) {
  fail(ErrorCode::kRetryExhausted, "rejection sampling gave up after " + std::to_string(budget) + " attempts");
}

int check_tau(const Circuit &c, const Transcript &tau) {
  const int t = tau.steps();
  if (t < 0 || t > c.T()) fail(ErrorCode::kStructural, "transcript longer than the circuit");
  for (int i = 1; i <= t; ++i) {
    if (tau.outcomes[static_cast<std::size_t>(i - 1)].size() != c.measured(i)) {
      fail(ErrorCode::kStructural, "transcript entry " + std::to_string(i) + " has the wrong width");
    }
  }
  return t;
}

}  // namespace

FiniteDist q1_law(const BranchTree &tree, const Transcript &tau) {
  const Circuit &c = tree.circuit();
  const int t = check_tau(c, tau);
  const BitString prefix = tau.concat();
  const int idx = tree.find(prefix, t);
  if (idx < 0) fail(ErrorCode::kImpossibleCondition, "transcript " + prefix.str() + " has zero probability");
  const double base = tree.node(idx).prob;
  FiniteDist::Map m;
  int length = 0;
  for (int leaf : tree.leaves()) {
    const BranchNode &n = tree.node(leaf);
    if (!n.tau.starts_with(prefix)) continue;
    BitString rest = n.tau.suffix_from(prefix.size());
    length = rest.size();
    m[std::move(rest)] += n.prob / base;
  }
  return FiniteDist::from_map(length, std::move(m));
}

FiniteDist q2_law(const BranchTree &tree, const Transcript &tau) {
  const Circuit &c = tree.circuit();
  const int t = check_tau(c, tau);
  const int idx = tree.find(tau.concat(), t);
  if (idx < 0) fail(ErrorCode::kImpossibleCondition, "transcript " + tau.concat().str() + " has zero probability");
  // Reads are independent given the branch, so the law is a product.
  std::vector<FiniteDist> parts;
  for (int n : tree.path(idx)) parts.push_back(condition(tree.node(n).readout, tree.node(n).outcome));
  std::vector<const FiniteDist *> factors;
  for (const auto &p : parts) factors.push_back(&p);
  int length = 0;
  for (const auto &p : parts) length += p.length();
  DistBuilder out(length);
  add_product(factors, 1.0, out);
  return out.build();
}

BitString q1(const Circuit &c, const Transcript &tau, Rng &rng, const QPolicy &policy, std::uint64_t *tries) {
  check_tau(c, tau);
  if (policy.mode == QPolicy::Mode::kExact) {
    const BranchTree tree = enumerate_branches(c);
    if (tries) *tries = 0;
    return sample(q1_law(tree, tau), rng);
  }
  require_positive(c, tau);
  for (std::uint64_t k = 1; k <= policy.budget; ++k) {
    PrefixRun run = run_prefix(c, c.T(), rng);
    if (!matches(tau, run.tau.outcomes)) continue;
    if (tries) *tries = k;
    BitString rest;
    for (int i = tau.steps(); i < c.T(); ++i) rest.append(run.tau.outcomes[static_cast<std::size_t>(i)]);
    return rest;
  }
  exhausted(policy.budget);
}

BitString q2(const Circuit &c, const Transcript &tau, Rng &rng, const QPolicy &policy, std::uint64_t *tries) {
  const int t = check_tau(c, tau);
  if (policy.mode == QPolicy::Mode::kExact) {
    const BranchTree tree = enumerate_branches(c);
    if (tries) *tries = 0;
    return sample(q2_law(tree, tau), rng);
  }
  require_positive(c, tau);
  const OracleSampler oracle(c);
  for (std::uint64_t k = 1; k <= policy.budget; ++k) {
    const OracleOutput out = oracle(rng);
    bool ok = true;
    for (int i = 0; i < t && ok; ++i) {
      ok = out.reads[static_cast<std::size_t>(i)].starts_with(tau.outcomes[static_cast<std::size_t>(i)]);
    }
    if (!ok) continue;
    if (tries) *tries = k;
    BitString ws;
    for (int i = 1; i <= t; ++i) ws.append(out.reads[static_cast<std::size_t>(i - 1)].suffix_from(c.measured(i)));
    return ws;
  }
  exhausted(policy.budget);
}

}  // namespace ncmo
