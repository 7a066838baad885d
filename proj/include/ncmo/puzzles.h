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

#ifndef NCMO_PUZZLES_H_
#define NCMO_PUZZLES_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncmo/dist.h"
#include "ncmo/oracle.h"
#include "ncmo/qsim.h"
#include "ncmo/session.h"

namespace ncmo {

// What an adversary sees besides (t, τ_t): the instance and its circuit.
struct AdversaryContext {
  BitString x;
  const Circuit *circuit = nullptr;
};

// Guesses the non-collapsed suffix w_t from (x, t, τ_t). Implementations must
// be reentrant: no mutable state across calls.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string kind() const = 0;
  // Law of the guess, over {0,1}^{ℓ − m_t}.
  virtual FiniteDist law(const AdversaryContext &ctx, int t, const Transcript &tau) const = 0;
  virtual BitString guess(const AdversaryContext &ctx, int t, const Transcript &tau, Rng &rng) const;
};

// The exact conditional law of w_t given τ_t, by direct projection.
class PerfectAdversary : public Adversary {
 public:
  std::string kind() const override { return "perfect"; }
  FiniteDist law(const AdversaryContext &ctx, int t, const Transcript &tau) const override;
};

// Re-runs the first t steps up to `budget` times until the transcript
// matches, then reads w from that run; answers 0…0 if every attempt misses.
// With p = Pr[τ_t], its law is (1 − (1−p)^B)·cond + (1−p)^B·δ_{0…0}.
class RejectionAdversary : public Adversary {
 public:
  explicit RejectionAdversary(std::uint64_t budget) : budget_(budget) {}
  std::string kind() const override { return "rejection:" + std::to_string(budget_); }
  FiniteDist law(const AdversaryContext &ctx, int t, const Transcript &tau) const override;
  BitString guess(const AdversaryContext &ctx, int t, const Transcript &tau, Rng &rng) const override;
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

// Ignores τ_t: answers with the marginal law of w_t over all branches.
class ObliviousAdversary : public Adversary {
 public:
  explicit ObliviousAdversary(Limits limits = {}) : limits_(limits) {}
  std::string kind() const override { return "oblivious"; }
  FiniteDist law(const AdversaryContext &ctx, int t, const Transcript &tau) const override;

 private:
  Limits limits_;
};

class CustomAdversary : public Adversary {
 public:
  using LawFn = std::function<FiniteDist(const AdversaryContext &, int, const Transcript &)>;
  CustomAdversary(std::string name, LawFn law) : name_(std::move(name)), law_(std::move(law)) {}
  std::string kind() const override { return "custom:" + name_; }
  FiniteDist law(const AdversaryContext &ctx, int t, const Transcript &tau) const override {
    return law_(ctx, t, tau);
  }

 private:
  std::string name_;
  LawFn law_;
};

// "perfect", "oblivious" or "rejection:<budget>". kParse otherwise.
std::unique_ptr<Adversary> make_adversary(const std::string &spec, const Limits &limits = {});

// Hybrid B(k): reads 1..k genuine, reads k+1..T replaced by u_i‖adv(x, i, τ_i),
// on a single Born-sampled branch.
OracleOutput hybrid_b(int k, const AdversaryContext &ctx, const Adversary &adv, Rng &rng);
FiniteDist hybrid_law(int k, const AdversaryContext &ctx, const Adversary &adv, const Limits &limits = {});

// Q*: every read produced by the adversary on top of the collapsing outcomes.
OracleOutput q_star(const AdversaryContext &ctx, const Adversary &adv, Rng &rng);
// Computed by enumerating all transcripts directly (independently of the
// branch tree used by hybrid_law).
FiniteDist q_star_law(const AdversaryContext &ctx, const Adversary &adv, const Limits &limits = {});

// Law of τ_t‖w with w drawn from the adversary instead of the state.
FiniteDist completed_q_t_law(const BranchTree &tree, int t, const AdversaryContext &ctx, const Adversary &adv);

struct PerStepReport {
  std::vector<double> hybrid;       // SD(B(t−1), B(t)), t = 1..T
  std::vector<double> single_step;  // SD({τ_t, w_t}, {τ_t, adv}), t = 1..T
  double q_star_to_oracle = 0.0;    // sd(Q*, Q)
  double sum = 0.0;                 // Σ_t single_step[t]
};
PerStepReport per_step_sd(const AdversaryContext &ctx, const Adversary &adv, const Limits &limits = {});

// Puzzle encodings. Every field has a fixed width for a given sampler:
//
//   puzz = [ |x| : 8 bits ][ x ]            (instance form only)
//          [ t : 8 bits ][ |τ_t| : 8 bits ][ τ_t ][ 0 padding to tau_width ]
//   ans  = [ w_t ][ 0 padding to ans_width ]
struct PuzzleLayout {
  bool with_x = true;
  int x_len = 0;
  int tau_width = 0;
  int ans_width = 0;

  int puzz_length() const { return (with_x ? 8 + x_len : 0) + 16 + tau_width; }
};
BitString encode_puzz(const PuzzleLayout &layout, const BitString &x, int t, const BitString &tau);
struct DecodedPuzz {
  BitString x;
  int t = 0;
  BitString tau;
};
// kParse on malformed input.
DecodedPuzz decode_puzz(const PuzzleLayout &layout, const BitString &puzz);
BitString pad_to(const BitString &s, int width);

// A (puzz, ans) sampler with an enumerable joint law.
class PuzzleSampler {
 public:
  virtual ~PuzzleSampler() = default;
  virtual int puzz_length() const = 0;
  virtual int ans_length() const = 0;
  // Law of puzz‖ans.
  virtual FiniteDist law() const = 0;
  virtual std::pair<BitString, BitString> sample(Rng &rng) const;
};

// Maps a puzzle to the law of the adversary's answer.
using Answerer = std::function<FiniteDist(const BitString &puzz)>;

class LawPuzzle : public PuzzleSampler {
 public:
  LawPuzzle(FiniteDist law, int puzz_length);
  int puzz_length() const override { return puzz_len_; }
  int ans_length() const override { return law_.length() - puzz_len_; }
  FiniteDist law() const override { return law_; }

 private:
  FiniteDist law_;
  int puzz_len_;
};

// Answers with the exact conditional law of ans given puzz (the optimum).
Answerer conditional_answerer(const PuzzleSampler &sampler);
// Brute-force verifier: accepts iff Pr[ans | puzz] > 0.
bool brute_force_verify(const PuzzleSampler &sampler, const BitString &puzz, const BitString &ans);

// The one-way puzzle built from a non-adaptive family: x ← E(1^λ), t ← [T_x],
// run C_x up to t, read all qubits once; puzz = (x, t, τ_t), ans = w_t.
class InstancePuzzle : public PuzzleSampler {
 public:
  InstancePuzzle(const PdqpInstanceFamily &fam, int lambda, Limits limits = {});
  int puzz_length() const override { return layout_.puzz_length(); }
  int ans_length() const override { return layout_.ans_width; }
  FiniteDist law() const override;
  std::pair<BitString, BitString> sample(Rng &rng) const override;

  const PuzzleLayout &layout() const { return layout_; }
  // The adversary plugged in as a puzzle answerer.
  Answerer answerer(const Adversary &adv) const;

 private:
  FiniteDist instances_;
  std::map<BitString, Circuit> circuits_;
  PuzzleLayout layout_;
  Limits limits_;
};

// The auxiliary-input variant: z = (x, 1^k) fixes the instance and accuracy
// 1/k; puzz = (t, τ_t) with x omitted.
class AuxPuzzle : public PuzzleSampler {
 public:
  AuxPuzzle(const PdqpInstanceFamily &fam, const BitString &z, Limits limits = {});
  int puzz_length() const override { return layout_.puzz_length(); }
  int ans_length() const override { return layout_.ans_width; }
  FiniteDist law() const override;
  std::pair<BitString, BitString> sample(Rng &rng) const override;

  const PuzzleLayout &layout() const { return layout_; }
  const BitString &x() const { return x_; }
  double eps() const { return eps_; }
  Answerer answerer(const Adversary &adv) const;

 private:
  BitString x_;
  double eps_;
  Circuit circuit_;
  PuzzleLayout layout_;
  Limits limits_;
};

// z = [ |x| : 8 bits ][ x ][ 1^k ], k ≥ 1, accuracy ε = 1/k.
BitString encode_aux(const BitString &x, int k);
struct AuxInput {
  BitString x;
  int k = 0;
  double eps() const { return 1.0 / k; }
};
AuxInput decode_aux(const BitString &z);  // kParse on malformed z

std::pair<BitString, BitString> samp_from_instance(const PdqpInstanceFamily &fam, int lambda, Rng &rng);
std::pair<BitString, BitString> aux_samp(const BitString &z, const PdqpInstanceFamily &fam, Rng &rng);

// Law of puzz‖A(puzz) with puzz drawn from the sampler.
FiniteDist completed_law(const PuzzleSampler &sampler, const Answerer &answer);

enum class AdvantageMode { kExact, kEmpirical };
struct AdvantageReport {
  double alpha = 0.0;
  AdvantageMode mode = AdvantageMode::kExact;
  std::uint64_t shots = 0;
  double margin = 0.0;  // empirical mode: heuristic √(K/shots), K = joint support size
};
AdvantageReport advantage(const PuzzleSampler &sampler, const Answerer &answer, AdvantageMode mode,
                          std::uint64_t shots = 0, std::uint64_t seed = 0);

// Answers oracle queries with Q* built from an adversary.
class QStarBackend : public OracleBackend {
 public:
  QStarBackend(const Adversary &adv, BitString x, Limits limits = {})
      : adv_(&adv), x_(std::move(x)), limits_(limits) {}
  OracleOutput sample(const Circuit &c, Rng &rng) const override;
  FiniteDist law(const Circuit &c) const override;
  std::string name() const override { return "q-star(" + adv_->kind() + ")"; }

 private:
  const Adversary *adv_;
  BitString x_;
  Limits limits_;
};

// Solver for the oracle's sampling problem obtained from an adversary via Q*.
// The accuracy argument is accepted and ignored (the error is the adversary's).
class AdversarySolver : public OracleSolver {
 public:
  AdversarySolver(const Adversary &adv, BitString x, Limits limits = {}) : backend_(adv, std::move(x), limits) {}
  OracleOutput sample(const Circuit &c, double, Rng &rng) const override { return backend_.sample(c, rng); }
  FiniteDist law(const Circuit &c, double) const override { return backend_.law(c); }
  std::string name() const override { return backend_.name(); }

 private:
  QStarBackend backend_;
};

// F: runs the (non-adaptive) family machine with Q* as its oracle.
BitString solver_f(const PdqpInstanceFamily &fam, const BitString &x, double eps, const Adversary &adv, Rng &rng,
                   const Limits &limits = {});
FiniteDist solver_law(const PdqpInstanceFamily &fam, const BitString &x, double eps, const Adversary &adv,
                      const Limits &limits = {});

// The first `i` queries go to the solver at accuracy ε/N, the rest to the oracle.
FinalOutput adaptive_replacement_hybrid(const BaseMachine &m, const BitString &x, double eps, int i,
                                        const OracleSolver &solver, Rng &rng, const Limits &limits = {});
FiniteDist adaptive_replacement_law(const BaseMachine &m, const BitString &x, double eps, int i,
                                    const OracleSolver &solver, const Limits &limits = {});

}  // namespace ncmo

#endif  // NCMO_PUZZLES_H_
