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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "ncmo/circuit_json.h"
#include "ncmo/error.h"
#include "ncmo/oracle.h"
#include "ncmo/qsim.h"
#include "ncmo/random_circuit.h"
#include "ncmo/suites.h"

namespace ncmo {
namespace {

BitString B(const char *s) { return BitString::parse(s); }

template <typename F>
ErrorCode code_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ncmo::Error";
  return ErrorCode::kProtocol;
}

TEST(Qsim, QubitZeroIsMostSignificant) {
  StateVector s = StateVector::zero(2);
  apply_gate(s, gates::x(0));
  EXPECT_NEAR(readout_distribution(s).prob(B("10")), 1.0, 1e-12);
}

TEST(Qsim, RejectsNonUnitaryAndBadTargets) {
  EXPECT_EQ(code_of([] { gates::unitary({0}, {1, 0, 0, 2}); }), ErrorCode::kStructural);
  Circuit c;
  c.qubits = 2;
  c.steps.push_back(Step{{gates::cx(0, 0)}, 0});
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kStructural);
  c.steps[0] = Step{{gates::h(5)}, 0};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kStructural);
  c.steps[0] = Step{{}, 3};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kStructural);
}

TEST(Qsim, PrepareGateHitsTargetState) {
  const std::vector<Complex> amps = {std::sqrt(0.1), Complex(0, std::sqrt(0.2)), 0.0, -std::sqrt(0.7)};
  StateVector s = StateVector::zero(2);
  apply_gate(s, gates::prepare({0, 1}, amps));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s.amplitudes()[i] - amps[i]), 0.0, 1e-12);
}

TEST(Qsim, OracleGateXorsTable) {
  StateVector s = StateVector::basis(B("110"));  // x = 1, y = 10
  apply_gate(s, gates::oracle({0}, {1, 2}, {0, 3}));
  EXPECT_NEAR(readout_distribution(s).prob(B("101")), 1.0, 1e-12);
}

TEST(Qsim, ProjectionAndImpossibleOutcome) {
  StateVector s = StateVector::zero(2);
  apply_gate(s, gates::h(0));
  const auto probs = outcome_probabilities(s, 1);
  EXPECT_NEAR(probs[0], 0.5, 1e-12);
  EXPECT_NEAR(readout_distribution(project(s, B("1"))).prob(B("10")), 1.0, 1e-12);
  EXPECT_EQ(code_of([&] { (void)project(StateVector::zero(2), B("1")); }), ErrorCode::kImpossibleCondition);
}

TEST(Qsim, TranscriptProbabilityMatchesTree) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Circuit c = random_circuit(rng);
    const BranchTree tree = enumerate_branches(c);
    for (int leaf : tree.leaves()) {
      const Transcript tau = Transcript::split(c, c.T(), tree.node(leaf).tau);
      EXPECT_NEAR(transcript_probability(c, tau), tree.node(leaf).prob, 1e-12);
    }
  }
}

TEST(Qsim, BranchGuard) {
  Circuit c;
  c.qubits = 4;
  for (int t = 0; t < 3; ++t) c.steps.push_back(Step{{gates::h(0), gates::h(1), gates::h(2), gates::h(3)}, 4});
  EXPECT_EQ(branch_count(c), 4096u);
  EXPECT_EQ(code_of([&] { (void)enumerate_branches(c, 100); }), ErrorCode::kInstanceTooLarge);
}

TEST(CircuitJson, RoundTripAndErrors) {
  Rng rng(9);
  const Circuit c = random_circuit(rng);
  const Circuit back = circuit_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_LT(sd(oracle_exact(back), oracle_exact(c)), 1e-12);
  EXPECT_EQ(code_of([] { circuit_from_json(nlohmann::json::parse(R"({"qubits": 1})")); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] {
              circuit_from_json(nlohmann::json::parse(R"({"qubits":1,"steps":[{"gates":[{"name":"rx","targets":[0]}]}]})"));
            }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([] { circuit_from_json(nlohmann::json::parse(R"({"qubits":13,"steps":[]})")); }),
            ErrorCode::kInstanceTooLarge);
}

TEST(Oracle, BellJointLaw) {
  const FiniteDist open = oracle_exact(bell_circuit(0));
  EXPECT_EQ(open.support_size(), 4u);
  for (const char *v : {"0000", "0011", "1100", "1111"}) EXPECT_NEAR(open.prob(B(v)), 0.25, 1e-12);
  const FiniteDist measured = oracle_exact(bell_circuit(1));
  EXPECT_NEAR(measured.prob(B("0000")) + measured.prob(B("1111")), 1.0, 1e-12);
}

TEST(Oracle, ReadsAreIndependentGivenBranch) {
  // One unmeasured step read twice: the two reads are i.i.d., not copies.
  Circuit c;
  c.qubits = 1;
  c.steps.push_back(Step{{gates::h(0)}, 0});
  c.steps.push_back(Step{});
  const FiniteDist law = oracle_exact(c);
  EXPECT_NEAR(law.prob(B("01")), 0.25, 1e-12);
}

TEST(Oracle, SamplerMatchesExactOnSmallCircuits) {
  Rng rng(21);
  RandomCircuitOptions opt;
  opt.max_qubits = 2;
  opt.max_steps = 2;
  for (int i = 0; i < 10; ++i) {
    const Circuit c = random_circuit(rng, opt);
    const OracleSampler s(c);
    EmpiricalDist emp;
    for (int k = 0; k < 50'000; ++k) emp.add(s(rng).concat());
    EXPECT_LT(sd(emp.normalized(), oracle_exact(c)), 0.015);
  }
}

TEST(Oracle, ExactGuard) {
  Circuit c;
  c.qubits = 4;
  for (int t = 0; t < 6; ++t) c.steps.push_back(Step{});
  EXPECT_EQ(code_of([&] { (void)oracle_exact(c); }), ErrorCode::kInstanceTooLarge);
}

TEST(Oracle, ConditionalSamplersAgreeWithLaws) {
  Rng rng(4);
  RandomCircuitOptions opt;
  opt.min_steps = 3;
  opt.min_qubits = 2;
  opt.max_qubits = 3;
  for (int i = 0; i < 5; ++i) {
    const Circuit c = random_circuit(rng, opt);
    const BranchTree tree = enumerate_branches(c);
    int leaf = tree.level(1).front();
    for (int node : tree.level(1)) {
      if (tree.node(node).prob > tree.node(leaf).prob) leaf = node;
    }
    const Transcript tau = Transcript::split(c, 1, tree.node(leaf).tau);
    for (auto mode : {QPolicy::Mode::kExact, QPolicy::Mode::kRejection}) {
      QPolicy policy;
      policy.mode = mode;
      EmpiricalDist e1, e2;
      for (int k = 0; k < 8'000; ++k) {
        e1.add(q1(c, tau, rng, policy));
        e2.add(q2(c, tau, rng, policy));
      }
      EXPECT_LT(sd(e1.normalized(), q1_law(tree, tau)), 0.05);
      EXPECT_LT(sd(e2.normalized(), q2_law(tree, tau)), 0.05);
    }
  }
}

TEST(Oracle, RejectionBudgetExhausts) {
  // Outcome 1 has probability sin²(0.005) ≈ 2.5e-5; a budget of 1 almost surely misses.
  Circuit c;
  c.qubits = 1;
  c.steps.push_back(Step{{gates::ry(0, 0.01)}, 1});
  c.steps.push_back(Step{});
  Transcript tau;
  tau.outcomes.push_back(B("1"));
  Rng rng(1);
  const QPolicy policy{QPolicy::Mode::kRejection, 1};
  int exhausted = 0;
  for (int i = 0; i < 20; ++i) {
    try {
      (void)q1(c, tau, rng, policy);
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kRetryExhausted) ++exhausted;
    }
  }
  EXPECT_GE(exhausted, 19);
  Transcript impossible;
  impossible.outcomes.push_back(B("1"));
  Circuit z;
  z.qubits = 1;
  z.steps.push_back(Step{{}, 1});
  EXPECT_EQ(code_of([&] { (void)q1(z, impossible, rng); }), ErrorCode::kImpossibleCondition);
}

TEST(Limits, EnvironmentOverride) {
  ::setenv("NCMO_MAX_BRANCHES", "12", 1);
  EXPECT_EQ(Limits::from_env().max_branches, 12u);
  ::setenv("NCMO_MAX_BRANCHES", "lots", 1);
  EXPECT_EQ(code_of([] { (void)Limits::from_env(); }), ErrorCode::kParse);
  ::unsetenv("NCMO_MAX_BRANCHES");
  EXPECT_EQ(Limits::from_env().max_branches, kDefaultBranchGuard);
}

}  // namespace
}  // namespace ncmo
