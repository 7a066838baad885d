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

#include "ncmo/bitstring.h"
#include "ncmo/dist.h"
#include "ncmo/error.h"
#include "ncmo/rng.h"

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

TEST(BitString, ParseAndSlice) {
  const BitString b = B("10110");
  EXPECT_EQ(b.size(), 5);
  EXPECT_TRUE(b[0]);
  EXPECT_FALSE(b[1]);
  EXPECT_EQ(b.substr(1, 3), B("011"));
  EXPECT_EQ(b.to_uint(), 22u);
  EXPECT_EQ(BitString::from_uint(22, 5), b);
  EXPECT_EQ(b.popcount(), 3);
  EXPECT_EQ(code_of([&] { (void)b.substr(4, 2); }), ErrorCode::kStructural);
  EXPECT_EQ(code_of([] { (void)BitString::parse("10x"); }), ErrorCode::kParse);
}

TEST(BitString, LexicographicOrder) {
  EXPECT_LT(B("01"), B("10"));
  EXPECT_LT(B("0"), B("00"));
  EXPECT_EQ(B("") + B("1"), B("1"));
}

TEST(Rng, ForksAreDeterministicAndDistinct) {
  const Rng root(7);
  Rng a = root.fork(1), b = root.fork(1), c = root.fork(2);
  EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(root.fork(1).next(), c.next());
  Rng r(3);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(7), 7u);
}

TEST(FiniteDist, ValidatesMass) {
  EXPECT_EQ(code_of([] { FiniteDist::from_map(1, {{B("0"), 0.5}}); }), ErrorCode::kStructural);
  EXPECT_EQ(code_of([] { FiniteDist::from_map(1, {{B("0"), 1.5}, {B("1"), -0.5}}); }), ErrorCode::kStructural);
  EXPECT_EQ(code_of([] { FiniteDist::from_map(2, {{B("0"), 1.0}}); }), ErrorCode::kStructural);
  const FiniteDist d = FiniteDist::from_map(1, {{B("0"), 1.0}, {B("1"), 0.0}});
  EXPECT_EQ(d.support_size(), 1u);
}

TEST(FiniteDist, StatisticalDistance) {
  const FiniteDist p = FiniteDist::from_map(2, {{B("00"), 0.5}, {B("11"), 0.5}});
  const FiniteDist q = FiniteDist::uniform(2);
  EXPECT_NEAR(sd(p, q), 0.5, 1e-15);
  EXPECT_NEAR(sd(p, p), 0.0, 1e-15);
  EXPECT_EQ(code_of([&] { (void)sd(p, FiniteDist::uniform(1)); }), ErrorCode::kStructural);
}

TEST(FiniteDist, ConditionMarginalPushForward) {
  const FiniteDist p = FiniteDist::from_map(2, {{B("00"), 0.2}, {B("01"), 0.2}, {B("11"), 0.6}});
  const FiniteDist c = condition(p, B("0"));
  EXPECT_NEAR(c.prob(B("0")), 0.5, 1e-15);
  EXPECT_NEAR(c.prob(B("1")), 0.5, 1e-15);
  EXPECT_EQ(code_of([&] { (void)condition(FiniteDist::point(B("00")), B("1")); }), ErrorCode::kImpossibleCondition);
  EXPECT_NEAR(marginal(p, 1, 1).prob(B("1")), 0.8, 1e-15);
  EXPECT_NEAR(prefix_mass(p, B("1")), 0.6, 1e-15);
  const FiniteDist parity = push_forward(p, [](const BitString &s) { return BitString::from_uint(s.popcount() % 2, 1); });
  EXPECT_NEAR(parity.prob(B("1")), 0.2, 1e-15);
  EXPECT_NEAR(product(FiniteDist::uniform(1), FiniteDist::point(B("1"))).prob(B("01")), 0.5, 1e-15);
}

TEST(FiniteDist, SamplerMatchesLaw) {
  const FiniteDist p = FiniteDist::from_map(2, {{B("00"), 0.1}, {B("01"), 0.2}, {B("11"), 0.7}});
  const DistSampler s(p);
  Rng rng(11);
  EmpiricalDist emp;
  for (int i = 0; i < 200'000; ++i) emp.add(s(rng));
  EXPECT_LT(sd(emp.normalized(), p), 0.005);
  EXPECT_EQ(code_of([] { EmpiricalDist().normalized(); }), ErrorCode::kStructural);
}

TEST(FiniteDist, JsonRoundTrip) {
  const FiniteDist p = FiniteDist::from_map(2, {{B("01"), 0.25}, {B("10"), 0.75}});
  EXPECT_EQ(sd(dist_from_json(nlohmann::json::parse(to_json(p).dump())), p), 0.0);
  EXPECT_EQ(code_of([] { dist_from_json(nlohmann::json{{"length", 1}}); }), ErrorCode::kParse);
}

}  // namespace
}  // namespace ncmo
