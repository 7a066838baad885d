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

#ifndef NCMO_SESSION_H_
#define NCMO_SESSION_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>

#include "ncmo/dist.h"
#include "ncmo/oracle.h"
#include "ncmo/qsim.h"

namespace ncmo {

struct NextQuery {
  Circuit circuit;
};
struct FinalOutput {
  BitString value;
};
using MachineStep = std::variant<NextQuery, FinalOutput>;

// A deterministic classical machine that interacts with the oracle: given the
// instance, the accuracy and all answers so far, it either asks one more
// circuit or stops with its output. Implementations must be pure.
class BaseMachine {
 public:
  virtual ~BaseMachine() = default;
  virtual MachineStep next(const BitString &x, double eps, std::span<const OracleOutput> answers) const = 0;
  // Declared bound N on the number of queries.
  virtual int query_bound() const = 0;
};

// Non-adaptive machine: one query C_{x,ε}, then a classical post-processing.
class SingleQueryMachine : public BaseMachine {
 public:
  using CircuitFn = std::function<Circuit(const BitString &x, double eps)>;
  using OutputFn = std::function<BitString(const BitString &x, const OracleOutput &answer)>;

  SingleQueryMachine(CircuitFn circuit, OutputFn output)
      : circuit_(std::move(circuit)), output_(std::move(output)) {}

  MachineStep next(const BitString &x, double eps, std::span<const OracleOutput> answers) const override;
  int query_bound() const override { return 1; }

 private:
  CircuitFn circuit_;
  OutputFn output_;
};

// Machine given by its transition function.
class LambdaMachine : public BaseMachine {
 public:
  using NextFn = std::function<MachineStep(const BitString &x, double eps, std::span<const OracleOutput> answers)>;
  LambdaMachine(NextFn next, int bound) : next_(std::move(next)), bound_(bound) {}
  MachineStep next(const BitString &x, double eps, std::span<const OracleOutput> answers) const override {
    return next_(x, eps, answers);
  }
  int query_bound() const override { return bound_; }

 private:
  NextFn next_;
  int bound_;
};

// Makes no queries and outputs a fixed string.
class ConstantMachine : public BaseMachine {
 public:
  explicit ConstantMachine(BitString value) : value_(std::move(value)) {}
  MachineStep next(const BitString &, double, std::span<const OracleOutput>) const override {
    return FinalOutput{value_};
  }
  int query_bound() const override { return 0; }

 private:
  BitString value_;
};

// The circuit a machine asks first, with no answers yet. kStructural when the
// machine stops without querying.
Circuit first_query(const BaseMachine &m, const BitString &x, double eps);

// Answers oracle queries. Every call is a fresh, independent run: backends
// never carry quantum state from one query to the next.
class OracleBackend {
 public:
  virtual ~OracleBackend() = default;
  virtual OracleOutput sample(const Circuit &c, Rng &rng) const = 0;
  // Exact law of sample(c, ·) over v_1‖…‖v_T.
  virtual FiniteDist law(const Circuit &c) const = 0;
  virtual std::string name() const = 0;
};

class TrueOracle : public OracleBackend {
 public:
  explicit TrueOracle(Limits limits = {}) : limits_(limits) {}
  OracleOutput sample(const Circuit &c, Rng &rng) const override { return oracle_sample(c, rng); }
  FiniteDist law(const Circuit &c) const override { return oracle_exact(c, limits_); }
  std::string name() const override { return "oracle"; }

 private:
  Limits limits_;
};

// Classical-style solver for the oracle's sampling problem: on (C, δ) it
// outputs samples whose law is within δ of the oracle's.
class OracleSolver {
 public:
  virtual ~OracleSolver() = default;
  virtual OracleOutput sample(const Circuit &c, double accuracy, Rng &rng) const = 0;
  virtual FiniteDist law(const Circuit &c, double accuracy) const = 0;
  virtual std::string name() const = 0;
};

// Exact oracle law mixed with the all-zero answer at weight `accuracy`;
// its distance to the oracle is at most `accuracy`.
class MixtureSolver : public OracleSolver {
 public:
  explicit MixtureSolver(Limits limits = {}) : limits_(limits) {}
  OracleOutput sample(const Circuit &c, double accuracy, Rng &rng) const override;
  FiniteDist law(const Circuit &c, double accuracy) const override;
  std::string name() const override { return "mixture"; }

 private:
  Limits limits_;
};

// A solver bound to one accuracy, usable as a backend.
class SolverBackend : public OracleBackend {
 public:
  SolverBackend(const OracleSolver &solver, double accuracy) : solver_(&solver), accuracy_(accuracy) {}
  OracleOutput sample(const Circuit &c, Rng &rng) const override { return solver_->sample(c, accuracy_, rng); }
  FiniteDist law(const Circuit &c) const override { return solver_->law(c, accuracy_); }
  std::string name() const override { return solver_->name(); }

 private:
  const OracleSolver *solver_;
  double accuracy_;
};

// Picks the backend that answers query number `index` (0-based).
using BackendRouter = std::function<const OracleBackend &(int index)>;

// Runs the machine to completion. kProtocol when it exceeds its query bound.
FinalOutput adaptive_session(const BaseMachine &m, const BitString &x, double eps, const BackendRouter &route,
                             Rng &rng);
FinalOutput adaptive_session(const BaseMachine &m, const BitString &x, double eps, const OracleBackend &backend,
                             Rng &rng);

// Exact output law of the session, by nested enumeration of every answer.
FiniteDist session_law(const BaseMachine &m, const BitString &x, double eps, const BackendRouter &route);
FiniteDist session_law(const BaseMachine &m, const BitString &x, double eps, const OracleBackend &backend);

// A sampling problem family given by a machine: instance x ← E(1^λ), target
// law D_x (optional), evaluated at accuracy `eps`.
struct PdqpInstanceFamily {
  std::shared_ptr<const BaseMachine> machine;
  std::function<FiniteDist(int lambda)> instances;
  std::function<FiniteDist(const BitString &x)> reference;  // may be empty
  double eps = 0.25;
};

// Wraps a decision machine as a sampling problem whose law is the machine's
// output bit. Outputs of any other length raise kStructural.
PdqpInstanceFamily decision_as_sampling(std::shared_ptr<const BaseMachine> machine,
                                        std::function<FiniteDist(int lambda)> instances, double eps = 0.25);

}  // namespace ncmo

#endif  // NCMO_SESSION_H_
