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
#include <map>
#include <set>

#include "ncmo/commitment.h"
#include "ncmo/dcrpuzz.h"
#include "ncmo/error.h"
#include "ncmo/mac.h"

#ifndef NCMO_TEST_DATA
#define NCMO_TEST_DATA "tests/data"
#endif

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

// --- dCRPuzz ---

TEST(Dcr, ColAnswersAreConditionallyIndependent) {
  const FiniteDist law = FiniteDist::from_map(3, {{B("000"), 0.1}, {B("001"), 0.3}, {B("110"), 0.6}});
  const DcrScheme s = law_scheme("t", law, 1);
  const FiniteDist col = col_law(s, BitString());
  EXPECT_NEAR(col.prob(B("00001")), 0.4 * 0.25 * 0.75, 1e-12);
  EXPECT_NEAR(col.prob(B("11010")), 0.6, 1e-12);
  EXPECT_NEAR(sd(marginal(col, 0, 3), law), 0.0, 1e-12);
  EXPECT_NEAR(sd(dpp_oracle_law(s, BitString()), col), 0.0, 1e-12);
}

TEST(Dcr, RandomSchemesAreOracleCol) {
  Rng rng(31);
  for (int i = 0; i < 5; ++i) {
    const DcrScheme s = random_circuit_scheme(rng, 1);
    s.validate();
    for (const auto &[pp, p] : s.setup) EXPECT_LT(sd(dpp_oracle_law(s, pp), col_law(s, pp)), 1e-12);
    EXPECT_LT(dcr_advantage(s, [&](const BitString &pp) { return dpp_oracle_law(s, pp); }), 1e-12);
  }
}

TEST(Dcr, CollisionFinderMatchesCol) {
  Rng rng(2);
  const DcrScheme s = random_circuit_scheme(rng, 0);
  for (auto kind : {CollisionFinder::Kind::kCol, CollisionFinder::Kind::kOracle}) {
    CollisionFinder finder(s, kind);
    EmpiricalDist emp;
    for (int i = 0; i < 40'000; ++i) emp.add(finder(BitString(), rng).concat());
    EXPECT_LT(sd(emp.normalized(), col_law(s, BitString())), 0.03);
  }
}

TEST(Dcr, SchemeFiles) {
  const DcrScheme law = load_scheme(std::string(NCMO_TEST_DATA) + "/scheme_law.json");
  EXPECT_EQ(law.puzz_len, 1);
  EXPECT_TRUE(law.circuit_backed());
  const DcrScheme circ = load_scheme(std::string(NCMO_TEST_DATA) + "/scheme_circuit.json");
  EXPECT_LT(sd(dpp_oracle_law(circ, BitString()), col_law(circ, BitString())), 1e-12);
  EXPECT_EQ(code_of([] { (void)load_scheme(std::string(NCMO_TEST_DATA) + "/missing.json"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] {
              (void)scheme_from_json(nlohmann::json::parse(
                  R"({"pp_len":0,"puzz_len":2,"ans_len":1,"source":{"law":{"length":2,"probs":{"00":1.0}}}})"));
            }),
            ErrorCode::kParse);
}

TEST(Dcr, PreimagePairs) {
  const std::vector<std::uint64_t> f = {0, 0, 1, 1, 1, 2, 3, 3};
  const Circuit c = preimage_pair_circuit(f, 3, 2);
  // |image| = 4 → 1 − 4/8.
  EXPECT_NEAR(distinct_preimage_probability(oracle_exact(c), 3, 2), 0.5, 1e-12);
  const std::vector<std::uint64_t> injective_on_image = {0, 1, 2, 3, 0, 1, 2, 3};
  EXPECT_NEAR(distinct_preimage_probability(oracle_exact(preimage_pair_circuit(injective_on_image, 3, 2)), 3, 2), 0.5,
              1e-12);
}

// --- MAC ---

TEST(Mac, HonestCorrectnessByExhaustiveSimulation) {
  const ToyMac mac(MacParams{2, 2, 1, 5});
  EXPECT_NEAR(mac_correctness_exact(mac), 1.0, 1e-12);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const BitString pp = mac.setup(rng);
    const ToyMac::Keys k = mac.gen(pp, rng);
    const BitString m = BitString::from_uint(rng.below(4), 2);
    EXPECT_TRUE(mac.verify(pp, k.vk, m, mac.sign(k.sigk, m, rng)));
  }
}

TEST(Mac, MatchingBasisRevealsX) {
  const ToyMac mac(MacParams{3, 3, 0, 1});
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const ToyMac::Keys k = mac.gen(BitString(), rng);
    EXPECT_EQ(mac.sign(k.sigk, k.theta, rng), k.x);
  }
  EXPECT_FALSE(mac.verify(BitString(), BitString::zeros(6), B("00"), B("000")));
}

TEST(Mac, NaiveForgerFails) {
  // Measure once in Z, reuse the outcome for a second message.
  const ToyMac mac(MacParams{4, 4, 1, 2});
  double win = 0.0;
  for (const auto &[pp, ppp] : mac.setup_law()) {
    for (std::uint64_t xt = 0; xt < 256; ++xt) {
      const BitString x = BitString::from_uint(xt >> 4, 4), th = BitString::from_uint(xt & 15, 4);
      const BitString vk = mac.evaluate(pp, x, th);
      for (const auto &[sigma, q] : mac.signature_law(x, th, B("0000"))) {
        for (std::uint64_t m1 = 1; m1 < 16; ++m1) {
          const MacForgery f{vk, B("0000"), sigma, BitString::from_uint(m1, 4), sigma};
          if (mac_forgery_wins(mac, pp, f)) win += ppp * q / 256.0 / 15.0;
        }
      }
    }
  }
  EXPECT_LT(win, 1.0);
  EXPECT_GT(win, 0.0);
}

TEST(Mac, ColBreakProbability) {
  for (int lm : {2, 4}) {
    const ToyMac mac(MacParams{4, lm, 1, 3});
    const GameReport g = mac_break_via_collision(mac, CollisionSourceKind::kExactCol, 4000, 1);
    EXPECT_NEAR(*g.exact, 1.0 - std::pow(2.0, -lm), 1e-12);
    EXPECT_NEAR(g.rate(), *g.exact, 0.03);
  }
  const ToyMac mac(MacParams{4, 4, 1, 3});
  const GameReport dup = mac_break_via_collision(mac, CollisionSourceKind::kHonestDuplicate, 2000, 1);
  EXPECT_EQ(dup.successes, 0u);
  EXPECT_EQ(*dup.exact, 0.0);
}

TEST(Mac, DerivedSchemePuzzleMarginalIsVkLaw) {
  const ToyMac mac(MacParams{2, 2, 1, 9});
  const DcrScheme s = mac_to_dcrpuzz(mac);
  ASSERT_TRUE(s.circuit_backed());
  for (const auto &[pp, p] : s.setup) {
    std::map<BitString, double> vk;
    for (std::uint64_t xt = 0; xt < 16; ++xt) {
      vk[mac.evaluate(pp, BitString::from_uint(xt >> 2, 2), BitString::from_uint(xt & 3, 2))] += 1.0 / 16;
    }
    for (const auto &[v, q] : marginal(s.samp(pp), 0, 4)) EXPECT_NEAR(q, vk[v], 1e-12);
    EXPECT_LT(sd(dpp_oracle_law(s, pp), col_law(s, pp)), 1e-12);
  }
  const GameReport oracle = mac_break_via_collision(mac, CollisionSourceKind::kOracleBacked, 2000, 4);
  EXPECT_NEAR(*oracle.exact, 0.75, 1e-12);
  EXPECT_NEAR(oracle.rate(), 0.75, 0.04);
}

TEST(Mac, AlgorithmCEqualsCol) {
  const ToyMac mac(MacParams{2, 2, 1, 9});
  const DcrScheme s = mac_to_dcrpuzz(mac);
  for (const auto &[pp, p] : s.setup) EXPECT_LT(sd(algorithm_c_mac_law(mac, pp), col_law(s, pp)), 1e-12);
  // Retries are geometric with success probability Pr[vk] = 1/16.
  Rng rng(10);
  double mean = 0.0;
  const int runs = 4000;
  for (int i = 0; i < runs; ++i) {
    std::uint64_t retries = 0;
    (void)algorithm_c_mac(mac, B("0"), rng, 1'000'000, &retries);
    mean += static_cast<double>(retries) / runs;
  }
  EXPECT_NEAR(mean, 16.0, 1.0);
  EXPECT_EQ(code_of([&] { (void)algorithm_c_mac(mac, B("0"), rng, 0); }), ErrorCode::kRetryExhausted);
}

// --- commitment ---

TEST(Commitment, ToyIsCorrectAndReceiverChecksTable) {
  const ToyCommitment com(3, 1, 1, 7);
  const CommitmentAudit audit = hiding_and_correctness_audit(com, 0.1);
  EXPECT_NEAR(audit.correctness[0], 1.0, 1e-12);
  EXPECT_NEAR(audit.correctness[1], 1.0, 1e-12);
  const auto &t = com.table(B("0"));
  for (std::uint64_t xt = 0; xt < 64; ++xt) {
    const BitString s2 = BitString::from_uint(xt, 6);
    const BitString wrong = BitString::from_uint((t[xt] + 1) % 4, 2);
    EXPECT_FALSE(com.receiver_accepts(B("0"), wrong, s2, s2[0]));
  }
}

TEST(Commitment, LiteralFormAlwaysOpensToZero) {
  const ToyCommitment com(3, 1, 1, 7);
  for (const auto &[r1, p] : com.r1_law()) {
    for (const auto &[s, q] : com_samp_law(com, r1, ComVariant::kLiteral)) EXPECT_FALSE(s[3]) << s;  // x₁ of s₂
  }
  EXPECT_EQ(*com_break_via_collision(com, ComVariant::kLiteral, CollisionSourceKind::kExactCol, 10, 1).exact, 0.0);
}

TEST(Commitment, CoherentFormParityStatistics) {
  const ToyCommitment com(3, 1, 0, 11);
  const DcrScheme s = com_to_dcrpuzz(com, ComVariant::kCoherent);
  const FiniteDist col = col_law(s, BitString());
  const FiniteDist puzz = s.samp(BitString());
  // Puzzle marginal is the committed-bit-averaged s₁ law.
  const FiniteDist s1_0 = com.s1_law(BitString(), false), s1_1 = com.s1_law(BitString(), true);
  for (const auto &[y, p] : marginal(puzz, 0, 2)) EXPECT_NEAR(p, 0.5 * (s1_0.prob(y) + s1_1.prob(y)), 1e-12);
  // Given y, b and b′ are i.i.d. with Pr[b = 1 | y] = k₁/(k₀ + k₁).
  for (const auto &[y, py] : marginal(puzz, 0, 2)) {
    const double q1 = 0.5 * s1_1.prob(y) / py;
    double differ = 0.0;
    for (const auto &[t, p] : condition(col, y)) {
      if (t[0] != t[7]) differ += p;
    }
    EXPECT_NEAR(differ, 2.0 * q1 * (1.0 - q1), 1e-12);
  }
}

TEST(Commitment, BalancedTableGivesHalf) {
  // n = 2, c = 1: each y has four preimages with x₁ = 0 and four with x₁ = 1.
  const std::vector<std::uint64_t> table = {0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0};
  const ToyCommitment com(2, 1, std::vector<std::vector<std::uint64_t>>{table});
  const DcrScheme s = com_to_dcrpuzz(com, ComVariant::kCoherent);
  const FiniteDist col = col_law(s, BitString());
  for (const auto &[y, py] : marginal(col, 0, 1)) {
    double differ = 0.0;
    for (const auto &[r, p] : condition(col, y)) {
      if (r[0] != r[5]) differ += p;
    }
    EXPECT_NEAR(differ, 0.5, 1e-12);
  }
  const GameReport g = com_break_via_collision(com, ComVariant::kCoherent, CollisionSourceKind::kExactCol, 10, 1);
  EXPECT_NEAR(*g.exact, 0.25, 1e-12);
}

TEST(Commitment, TrivialSchemeAuditPlugIn) {
  const TrivialCommitment com;
  for (double inv_p : {0.1, 0.25, 0.5}) {
    const CommitmentAudit a = hiding_and_correctness_audit(com, inv_p);
    EXPECT_NEAR(a.hiding_sd, 0.0, 1e-15);
    EXPECT_NEAR(a.bound, (1 - inv_p) * (1 - inv_p), 1e-12);
    EXPECT_TRUE(a.bound_holds);
  }
  const CommitmentAudit degenerate = hiding_and_correctness_audit(com, 1.0);
  EXPECT_NEAR(degenerate.good_mass[0], 1.0, 1e-12);
  EXPECT_EQ(degenerate.bound, 0.0);
}

TEST(Commitment, ToyAuditBoundHolds) {
  const ToyCommitment com(3, 1, 1, 1);
  const CommitmentAudit a = hiding_and_correctness_audit(com, 0.25);
  EXPECT_TRUE(a.g1_transfer_holds);
  EXPECT_TRUE(a.bound_holds);
  EXPECT_NEAR(a.algorithm_c_success, algorithm_c_com_exact(com, RegenPolicy::kOpenBit).success, 1e-12);
}

TEST(Commitment, AlgorithmCPolicies) {
  const ToyCommitment com(3, 1, 1, 1);
  Rng rng(5);
  // Re-opening a b = 0 state as 1 never verifies on this scheme.
  EXPECT_EQ(algorithm_c_com_exact(com, RegenPolicy::kCommitBit).success, 0.0);
  for (int i = 0; i < 200; ++i) {
    const ComOpenings o = algorithm_c_com(com, B("0"), rng, RegenPolicy::kCommitBit);
    EXPECT_FALSE(com.receiver_accepts(B("0"), o.s1, o.s2b, true));
  }
  // A table where some y has only x₁ = 0 preimages exercises the error path.
  for (std::uint64_t seed = 1; seed < 200; ++seed) {
    const ToyCommitment sparse(2, 0, 0, seed);
    const AlgorithmCExact e = algorithm_c_com_exact(sparse, RegenPolicy::kOpenBit);
    if (e.impossible_mass == 0.0) continue;
    const FiniteDist ones = sparse.s1_law(BitString(), true);
    int seen = 0;
    for (int i = 0; i < 400 && seen == 0; ++i) {
      try {
        (void)algorithm_c_com(sparse, BitString(), rng, RegenPolicy::kOpenBit);
      } catch (const Error &err) {
        EXPECT_EQ(err.code(), ErrorCode::kImpossibleCondition);
        ++seen;
      }
    }
    EXPECT_EQ(seen, 1);
    return;
  }
  FAIL() << "no table with a one-sided preimage found";
}

TEST(Commitment, BreakViaOracleMatchesCol) {
  const ToyCommitment com(3, 1, 1, 3);
  const GameReport col = com_break_via_collision(com, ComVariant::kCoherent, CollisionSourceKind::kExactCol, 10, 1);
  const GameReport orc = com_break_via_collision(com, ComVariant::kCoherent, CollisionSourceKind::kOracleBacked, 4000, 1);
  EXPECT_NEAR(*orc.exact, *col.exact, 1e-12);
  EXPECT_NEAR(orc.rate(), *orc.exact, 0.03);
  const GameReport dup = com_break_via_collision(com, ComVariant::kCoherent, CollisionSourceKind::kHonestDuplicate, 500, 1);
  EXPECT_EQ(dup.successes, 0u);
}

TEST(Commitment, ParameterCaps) {
  EXPECT_EQ(code_of([] { ToyCommitment(5, 1); }), ErrorCode::kInstanceTooLarge);
  EXPECT_EQ(code_of([] { ToyCommitment(3, 3); }), ErrorCode::kStructural);
  EXPECT_EQ(code_of([] { ToyMac(MacParams{7, 4, 1, 1}); }), ErrorCode::kInstanceTooLarge);
  EXPECT_EQ(code_of([] { (void)com_variant_from_string("sideways"); }), ErrorCode::kParse);
}

}  // namespace
}  // namespace ncmo
