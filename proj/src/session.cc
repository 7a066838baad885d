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

#include "ncmo/session.h"

#include <vector>

#include "ncmo/error.h"

namespace ncmo {

MachineStep SingleQueryMachine::next(const BitString &x, double eps, std::span<const OracleOutput> answers) const {
  if (answers.empty()) return NextQuery{circuit_(x, eps)};
  return FinalOutput{output_(x, answers.front())};
}

Circuit first_query(const BaseMachine &m, const BitString &x, double eps) {
  MachineStep s = m.next(x, eps, {});
  if (auto *q = std::get_if<NextQuery>(&s)) return std::move(q->circuit);
  fail(ErrorCode::kStructural, "machine makes no query on instance " + x.str());
}

OracleOutput MixtureSolver::sample(const Circuit &c, double accuracy, Rng &rng) const {
  const bool noise = rng.uniform() < accuracy;
  OracleOutput genuine = oracle_sample(c, rng);
  if (!noise) return genuine;
  OracleOutput zero;
  zero.reads.assign(static_cast<std::size_t>(c.T()), BitString::zeros(c.qubits));
  return zero;
}

FiniteDist MixtureSolver::law(const Circuit &c, double accuracy) const {
  const FiniteDist exact = oracle_exact(c, limits_);
  DistBuilder b(exact.length());
  b.add_scaled(exact, 1.0 - accuracy);
  b.add(BitString::zeros(exact.length()), accuracy);
  return b.build();
}

FinalOutput adaptive_session(const BaseMachine &m, const BitString &x, double eps, const BackendRouter &route,
                             Rng &rng) {
  std::vector<OracleOutput> answers;
  for (;;) {
    MachineStep s = m.next(x, eps, answers);
    if (auto *f = std::get_if<FinalOutput>(&s)) return std::move(*f);
    const int index = static_cast<int>(answers.size());
    if (index >= m.query_bound()) {
      fail(ErrorCode::kProtocol, "machine exceeded its declared bound of " + std::to_string(m.query_bound()) +
                                     " queries");
    }
    answers.push_back(route(index).sample(std::get<NextQuery>(s).circuit, rng));
  }
}

FinalOutput adaptive_session(const BaseMachine &m, const BitString &x, double eps, const OracleBackend &backend,
                             Rng &rng) {
  return adaptive_session(m, x, eps, [&](int) -> const OracleBackend & { return backend; }, rng);
}

namespace {

struct LawWalker {
  const BaseMachine &m;
  const BitString &x;
  double eps;
  const BackendRouter &route;
  FiniteDist::Map out;
  int length = -1;

  void walk(std::vector<OracleOutput> &answers, double prob) {
    MachineStep s = m.next(x, eps, answers);
    if (auto *f = std::get_if<FinalOutput>(&s)) {
      if (length < 0) {
        length = f->value.size();
      } else if (f->value.size() != length) {
        fail(ErrorCode::kStructural, "machine outputs have inconsistent lengths");
      }
      out[f->value] += prob;
      return;
    }
    const int index = static_cast<int>(answers.size());
    if (index >= m.query_bound()) {
      fail(ErrorCode::kProtocol, "machine exceeded its declared bound of " + std::to_string(m.query_bound()) +
                                     " queries");
    }
    const Circuit &c = std::get<NextQuery>(s).circuit;
    const FiniteDist law = route(index).law(c);
    for (const auto &[bits, p] : law) {
      answers.push_back(OracleOutput::split(bits, c.qubits));
      walk(answers, prob * p);
      answers.pop_back();
    }
  }
};

}  // namespace

FiniteDist session_law(const BaseMachine &m, const BitString &x, double eps, const BackendRouter &route) {
  LawWalker w{m, x, eps, route, {}, -1};
  std::vector<OracleOutput> answers;
  w.walk(answers, 1.0);
  return FiniteDist::from_map(w.length < 0 ? 0 : w.length, std::move(w.out));
}

FiniteDist session_law(const BaseMachine &m, const BitString &x, double eps, const OracleBackend &backend) {
  return session_law(m, x, eps, [&](int) -> const OracleBackend & { return backend; });
}

namespace {

class DecisionMachine : public BaseMachine {
 public:
  explicit DecisionMachine(std::shared_ptr<const BaseMachine> inner) : inner_(std::move(inner)) {}
  MachineStep next(const BitString &x, double eps, std::span<const OracleOutput> answers) const override {
    MachineStep s = inner_->next(x, eps, answers);
    if (auto *f = std::get_if<FinalOutput>(&s); f != nullptr && f->value.size() != 1) {
      fail(ErrorCode::kStructural, "decision machine output '" + f->value.str() + "' is not a single bit");
    }
    return s;
  }
  int query_bound() const override { return inner_->query_bound(); }

 private:
  std::shared_ptr<const BaseMachine> inner_;
};

}  // namespace

PdqpInstanceFamily decision_as_sampling(std::shared_ptr<const BaseMachine> machine,
                                        std::function<FiniteDist(int lambda)> instances, double eps) {
  PdqpInstanceFamily fam;
  fam.machine = std::make_shared<DecisionMachine>(std::move(machine));
  fam.instances = std::move(instances);
  fam.eps = eps;
  return fam;
}

}  // namespace ncmo
