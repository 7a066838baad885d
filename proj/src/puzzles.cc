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

#include "ncmo/puzzles.h"

#include <algorithm>
#include <cmath>

#include "ncmo/error.h"

namespace ncmo {

namespace {

const Circuit &circuit_of(const AdversaryContext &ctx) {
  if (ctx.circuit == nullptr) fail(ErrorCode::kStructural, "adversary context has no circuit");
  return *ctx.circuit;
}

void check_step(const Circuit &c, int t, const Transcript &tau) {
  if (t < 1 || t > c.T() || tau.steps() != t) {
    fail(ErrorCode::kStructural, "adversary queried with an inconsistent step/transcript");
  }
}

// The conditional law of w_t given τ_t.
FiniteDist conditional_suffix(const Circuit &c, int t, const Transcript &tau) {
  const ConditionedPrefix cp = condition_on_transcript(c, tau);
  return condition(readout_distribution(cp.state), tau.outcomes[static_cast<std::size_t>(t - 1)]);
}

void check_guess_length(const Circuit &c, int t, int got) {
  const int want = c.qubits - c.measured(t);
  if (got != want) {
    fail(ErrorCode::kProtocol, "adversary answered " + std::to_string(got) + " bits at step " + std::to_string(t) +
                                   ", expected " + std::to_string(want));
  }
}

}  // namespace

BitString Adversary::guess(const AdversaryContext &ctx, int t, const Transcript &tau, Rng &rng) const {
  return sample(law(ctx, t, tau), rng);
}

FiniteDist PerfectAdversary::law(const AdversaryContext &ctx, int t, const Transcript &tau) const {
  const Circuit &c = circuit_of(ctx);
  check_step(c, t, tau);
  return conditional_suffix(c, t, tau);
}

FiniteDist RejectionAdversary::law(const AdversaryContext &ctx, int t, const Transcript &tau) const {
  const Circuit &c = circuit_of(ctx);
  check_step(c, t, tau);
  const BitString zero = BitString::zeros(c.qubits - c.measured(t));
  const double p = transcript_probability(c, tau);
  if (p <= 0.0) return FiniteDist::point(zero);
  const double miss = std::pow(1.0 - p, static_cast<double>(budget_));
  DistBuilder b(zero.size());
  b.add_scaled(conditional_suffix(c, t, tau), 1.0 - miss);
  b.add(zero, miss);
  return b.build();
}

BitString RejectionAdversary::guess(const AdversaryContext &ctx, int t, const Transcript &tau, Rng &rng) const {
  const Circuit &c = circuit_of(ctx);
  check_step(c, t, tau);
  for (std::uint64_t k = 0; k < budget_; ++k) {
    PrefixRun run = run_prefix(c, t, rng);
    if (run.tau.outcomes != tau.outcomes) continue;
    return sample_readout(run.state, rng).suffix_from(c.measured(t));
  }
  return BitString::zeros(c.qubits - c.measured(t));
}

FiniteDist ObliviousAdversary::law(const AdversaryContext &ctx, int t, const Transcript &tau) const {
  const Circuit &c = circuit_of(ctx);
  check_step(c, t, tau);
  const BranchTree tree = enumerate_branches(c, limits_.max_branches);
  DistBuilder b(c.qubits - c.measured(t));
  for (int idx : tree.level(t)) {
    const BranchNode &n = tree.node(idx);
    b.add_scaled(condition(n.readout, n.outcome), n.prob);
  }
  return b.build();
}

std::unique_ptr<Adversary> make_adversary(const std::string &spec, const Limits &limits) {
  if (spec == "perfect") return std::make_unique<PerfectAdversary>();
  if (spec == "oblivious") return std::make_unique<ObliviousAdversary>(limits);
  const std::string prefix = "rejection:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string n = spec.substr(prefix.size());
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) ||
        n.size() > 12) {
      fail(ErrorCode::kParse, "rejection budget must be a positive integer: '" + spec + "'");
    }
    const std::uint64_t budget = std::stoull(n);
    if (budget == 0) fail(ErrorCode::kParse, "rejection budget must be positive");
    return std::make_unique<RejectionAdversary>(budget);
  }
  fail(ErrorCode::kParse, "unknown adversary '" + spec + "' (perfect|oblivious|rejection:<budget>)");
}

OracleOutput hybrid_b(int k, const AdversaryContext &ctx, const Adversary &adv, Rng &rng) {
  const Circuit &c = circuit_of(ctx);
  if (k < 0 || k > c.T()) fail(ErrorCode::kStructural, "hybrid index out of range");
  StateVector s = StateVector::zero(c.qubits);
  Transcript tau;
  OracleOutput out;
  for (int i = 1; i <= c.T(); ++i) {
    const Step &st = c.steps[static_cast<std::size_t>(i - 1)];
    for (const Gate &g : st.gates) apply_gate(s, g);
    BitString u = measure_in_place(s, st.measure, rng);
    tau.outcomes.push_back(u);
    if (i <= k) {
      out.reads.push_back(sample_readout(s, rng));
    } else {
      BitString w = adv.guess(ctx, i, tau, rng);
      check_guess_length(c, i, w.size());
      out.reads.push_back(u + w);
    }
  }
  return out;
}

OracleOutput q_star(const AdversaryContext &ctx, const Adversary &adv, Rng &rng) { return hybrid_b(0, ctx, adv, rng); }

namespace {

// u‖adv(x, t, τ_t), checked for width.
FiniteDist completed_read(const AdversaryContext &ctx, const Adversary &adv, int t, const Transcript &tau) {
  const Circuit &c = *ctx.circuit;
  const FiniteDist g = adv.law(ctx, t, tau);
  check_guess_length(c, t, g.length());
  return product(FiniteDist::point(tau.outcomes[static_cast<std::size_t>(t - 1)]), g);
}

}  // namespace

FiniteDist hybrid_law(int k, const AdversaryContext &ctx, const Adversary &adv, const Limits &limits) {
  const Circuit &c = circuit_of(ctx);
  if (k < 0 || k > c.T()) fail(ErrorCode::kStructural, "hybrid index out of range");
  check_exact_guard(c, limits);
  const BranchTree tree = enumerate_branches(c, limits.max_branches);
  std::map<int, FiniteDist> replaced;  // per node of depth > k
  DistBuilder out(c.T() * c.qubits);
  for (int leaf : tree.leaves()) {
    std::vector<const FiniteDist *> factors;
    for (int idx : tree.path(leaf)) {
      const BranchNode &n = tree.node(idx);
      if (n.depth <= k) {
        factors.push_back(&n.readout);
        continue;
      }
      auto it = replaced.find(idx);
      if (it == replaced.end()) {
        it = replaced.emplace(idx, completed_read(ctx, adv, n.depth, Transcript::split(c, n.depth, n.tau))).first;
      }
      factors.push_back(&it->second);
    }
    add_product(factors, tree.node(leaf).prob, out);
  }
  return out.build();
}

FiniteDist q_star_law(const AdversaryContext &ctx, const Adversary &adv, const Limits &limits) {
  const Circuit &c = circuit_of(ctx);
  check_exact_guard(c, limits);
  const std::uint64_t paths = branch_count(c);
  if (paths > limits.max_branches) {
    fail(ErrorCode::kInstanceTooLarge, "circuit has " + std::to_string(paths) +
                                           " collapsing paths, above the enumeration guard of " +
                                           std::to_string(limits.max_branches));
  }
  int bits = 0;
  for (const Step &st : c.steps) bits += st.measure;
  std::map<std::pair<int, BitString>, FiniteDist> reads;
  DistBuilder out(c.T() * c.qubits);
  for (std::uint64_t j = 0; j < paths; ++j) {
    const Transcript full = Transcript::split(c, c.T(), BitString::from_uint(j, bits));
    const double p = transcript_probability(c, full);
    if (p <= 0.0) continue;
    std::vector<const FiniteDist *> factors;
    Transcript prefix;
    for (int t = 1; t <= c.T(); ++t) {
      prefix.outcomes.push_back(full.outcomes[static_cast<std::size_t>(t - 1)]);
      const auto key = std::make_pair(t, prefix.concat());
      auto it = reads.find(key);
      if (it == reads.end()) it = reads.emplace(key, completed_read(ctx, adv, t, prefix)).first;
      factors.push_back(&it->second);
    }
    add_product(factors, p, out);
  }
  return out.build();
}

FiniteDist completed_q_t_law(const BranchTree &tree, int t, const AdversaryContext &ctx, const Adversary &adv) {
  const Circuit &c = tree.circuit();
  if (t < 1 || t > c.T()) fail(ErrorCode::kStructural, "step index out of range");
  FiniteDist::Map m;
  int length = -1;
  for (int idx : tree.level(t)) {
    const BranchNode &n = tree.node(idx);
    const FiniteDist g = adv.law(ctx, t, Transcript::split(c, t, n.tau));
    check_guess_length(c, t, g.length());
    for (const auto &[w, p] : g) {
      BitString key = n.tau + w;
      length = key.size();
      m[std::move(key)] += n.prob * p;
    }
  }
  return FiniteDist::from_map(length, std::move(m));
}

PerStepReport per_step_sd(const AdversaryContext &ctx, const Adversary &adv, const Limits &limits) {
  const Circuit &c = circuit_of(ctx);
  check_exact_guard(c, limits);
  const BranchTree tree = enumerate_branches(c, limits.max_branches);
  PerStepReport r;
  FiniteDist prev = hybrid_law(0, ctx, adv, limits);
  for (int t = 1; t <= c.T(); ++t) {
    FiniteDist cur = hybrid_law(t, ctx, adv, limits);
    r.hybrid.push_back(sd(prev, cur));
    r.single_step.push_back(sd(q_t_law(tree, t), completed_q_t_law(tree, t, ctx, adv)));
    r.sum += r.single_step.back();
    prev = std::move(cur);
  }
  r.q_star_to_oracle = sd(q_star_law(ctx, adv, limits), oracle_exact(tree, limits));
  return r;
}

BitString pad_to(const BitString &s, int width) {
  if (s.size() > width) fail(ErrorCode::kStructural, "field wider than its padded width");
  return s + BitString::zeros(width - s.size());
}

namespace {

BitString byte_field(int v, const char *what) {
  if (v < 0 || v > 255) fail(ErrorCode::kStructural, std::string(what) + " does not fit an 8-bit field");
  return BitString::from_uint(static_cast<std::uint64_t>(v), 8);
}

}  // namespace

BitString encode_puzz(const PuzzleLayout &layout, const BitString &x, int t, const BitString &tau) {
  BitString out;
  if (layout.with_x) {
    if (x.size() != layout.x_len) fail(ErrorCode::kStructural, "instance length does not match the layout");
    out.append(byte_field(x.size(), "|x|")).append(x);
  }
  out.append(byte_field(t, "t")).append(byte_field(tau.size(), "|tau|")).append(pad_to(tau, layout.tau_width));
  return out;
}

DecodedPuzz decode_puzz(const PuzzleLayout &layout, const BitString &puzz) {
  if (puzz.size() != layout.puzz_length()) fail(ErrorCode::kParse, "puzzle has the wrong length");
  DecodedPuzz d;
  int pos = 0;
  if (layout.with_x) {
    if (static_cast<int>(puzz.substr(0, 8).to_uint()) != layout.x_len) {
      fail(ErrorCode::kParse, "puzzle instance length field is inconsistent");
    }
    d.x = puzz.substr(8, layout.x_len);
    pos = 8 + layout.x_len;
  }
  d.t = static_cast<int>(puzz.substr(pos, 8).to_uint());
  const int n = static_cast<int>(puzz.substr(pos + 8, 8).to_uint());
  if (n > layout.tau_width) fail(ErrorCode::kParse, "puzzle transcript length field is too large");
  d.tau = puzz.substr(pos + 16, n);
  if (puzz.suffix_from(pos + 16 + n).popcount() != 0) fail(ErrorCode::kParse, "puzzle padding is not zero");
  return d;
}

std::pair<BitString, BitString> PuzzleSampler::sample(Rng &rng) const {
  const BitString s = ncmo::sample(law(), rng);
  return {s.prefix(puzz_length()), s.suffix_from(puzz_length())};
}

LawPuzzle::LawPuzzle(FiniteDist law, int puzz_length) : law_(std::move(law)), puzz_len_(puzz_length) {
  if (puzz_length < 0 || puzz_length > law_.length()) fail(ErrorCode::kStructural, "puzzle length out of range");
}

Answerer conditional_answerer(const PuzzleSampler &sampler) {
  return [law = sampler.law()](const BitString &puzz) { return condition(law, puzz); };
}

bool brute_force_verify(const PuzzleSampler &sampler, const BitString &puzz, const BitString &ans) {
  if (puzz.size() != sampler.puzz_length() || ans.size() != sampler.ans_length()) return false;
  return sampler.law().prob(puzz + ans) > 0.0;
}

namespace {

struct Widths {
  int tau = 0;
  int ans = 0;
};

void widen(Widths &w, const Circuit &c) {
  int acc = 0;
  for (int t = 1; t <= c.T(); ++t) {
    acc += c.measured(t);
    w.tau = std::max(w.tau, acc);
    w.ans = std::max(w.ans, c.qubits - c.measured(t));
  }
}

// Adds Σ_t (1/T)·Pr[τ_t]·Pr[w | τ_t] into `out`, keyed by the encoded pair.
void add_puzzle_law(const PuzzleLayout &layout, const BitString &x, const Circuit &c, double weight,
                    const Limits &limits, FiniteDist::Map &out) {
  const BranchTree tree = enumerate_branches(c, limits.max_branches);
  const double per_t = weight / c.T();
  for (int t = 1; t <= c.T(); ++t) {
    for (int idx : tree.level(t)) {
      const BranchNode &n = tree.node(idx);
      const BitString puzz = encode_puzz(layout, x, t, n.tau);
      for (const auto &[w, p] : condition(n.readout, n.outcome)) {
        out[puzz + pad_to(w, layout.ans_width)] += per_t * n.prob * p;
      }
    }
  }
}

std::pair<BitString, BitString> draw_puzzle(const PuzzleLayout &layout, const BitString &x, const Circuit &c,
                                            Rng &rng) {
  const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(c.T())));
  PrefixRun run = run_prefix(c, t, rng);
  const BitString v = sample_readout(run.state, rng);
  return {encode_puzz(layout, x, t, run.tau.concat()), pad_to(v.suffix_from(c.measured(t)), layout.ans_width)};
}

FiniteDist answer_law(const PuzzleLayout &layout, const DecodedPuzz &d, const Circuit &c, const BitString &x,
                      const Adversary &adv) {
  if (d.t < 1 || d.t > c.T()) fail(ErrorCode::kParse, "puzzle step index out of range");
  const AdversaryContext ctx{x, &c};
  const FiniteDist g = adv.law(ctx, d.t, Transcript::split(c, d.t, d.tau));
  check_guess_length(c, d.t, g.length());
  return push_forward(g, [&](const BitString &w) { return pad_to(w, layout.ans_width); });
}

}  // namespace

InstancePuzzle::InstancePuzzle(const PdqpInstanceFamily &fam, int lambda, Limits limits)
    : instances_(fam.instances ? fam.instances(lambda) : FiniteDist()), limits_(limits) {
  if (!fam.machine || !fam.instances) fail(ErrorCode::kStructural, "instance family is incomplete");
  Widths w;
  for (const auto &[x, p] : instances_) {
    Circuit c = first_query(*fam.machine, x, fam.eps);
    c.validate();
    widen(w, c);
    circuits_.emplace(x, std::move(c));
  }
  layout_ = PuzzleLayout{true, instances_.length(), w.tau, w.ans};
}

FiniteDist InstancePuzzle::law() const {
  FiniteDist::Map m;
  for (const auto &[x, p] : instances_) add_puzzle_law(layout_, x, circuits_.at(x), p, limits_, m);
  return FiniteDist::from_map(layout_.puzz_length() + layout_.ans_width, std::move(m));
}

std::pair<BitString, BitString> InstancePuzzle::sample(Rng &rng) const {
  const BitString x = ncmo::sample(instances_, rng);
  return draw_puzzle(layout_, x, circuits_.at(x), rng);
}

Answerer InstancePuzzle::answerer(const Adversary &adv) const {
  return [this, &adv](const BitString &puzz) {
    const DecodedPuzz d = decode_puzz(layout_, puzz);
    auto it = circuits_.find(d.x);
    if (it == circuits_.end()) fail(ErrorCode::kParse, "puzzle names an instance outside the family");
    return answer_law(layout_, d, it->second, d.x, adv);
  };
}

BitString encode_aux(const BitString &x, int k) {
  if (k < 1) fail(ErrorCode::kStructural, "accuracy parameter must be at least 1");
  return byte_field(x.size(), "|x|") + x + BitString::ones(k);
}

AuxInput decode_aux(const BitString &z) {
  if (z.size() < 9) fail(ErrorCode::kParse, "auxiliary input too short");
  const int n = static_cast<int>(z.prefix(8).to_uint());
  if (z.size() < 8 + n + 1) fail(ErrorCode::kParse, "auxiliary input truncated");
  AuxInput a;
  a.x = z.substr(8, n);
  const BitString unary = z.suffix_from(8 + n);
  if (unary.popcount() != unary.size()) fail(ErrorCode::kParse, "accuracy part of the auxiliary input is not unary");
  a.k = unary.size();
  return a;
}

AuxPuzzle::AuxPuzzle(const PdqpInstanceFamily &fam, const BitString &z, Limits limits) : limits_(limits) {
  const AuxInput a = decode_aux(z);
  if (!fam.machine) fail(ErrorCode::kStructural, "instance family has no machine");
  x_ = a.x;
  eps_ = a.eps();
  circuit_ = first_query(*fam.machine, x_, eps_);
  circuit_.validate();
  Widths w;
  widen(w, circuit_);
  layout_ = PuzzleLayout{false, 0, w.tau, w.ans};
}

FiniteDist AuxPuzzle::law() const {
  FiniteDist::Map m;
  add_puzzle_law(layout_, x_, circuit_, 1.0, limits_, m);
  return FiniteDist::from_map(layout_.puzz_length() + layout_.ans_width, std::move(m));
}

std::pair<BitString, BitString> AuxPuzzle::sample(Rng &rng) const { return draw_puzzle(layout_, x_, circuit_, rng); }

Answerer AuxPuzzle::answerer(const Adversary &adv) const {
  return [this, &adv](const BitString &puzz) {
    return answer_law(layout_, decode_puzz(layout_, puzz), circuit_, x_, adv);
  };
}

std::pair<BitString, BitString> samp_from_instance(const PdqpInstanceFamily &fam, int lambda, Rng &rng) {
  return InstancePuzzle(fam, lambda).sample(rng);
}

std::pair<BitString, BitString> aux_samp(const BitString &z, const PdqpInstanceFamily &fam, Rng &rng) {
  return AuxPuzzle(fam, z).sample(rng);
}

FiniteDist completed_law(const PuzzleSampler &sampler, const Answerer &answer) {
  const int P = sampler.puzz_length();
  const FiniteDist puzzles = marginal(sampler.law(), 0, P);
  DistBuilder out(P + sampler.ans_length());
  for (const auto &[puzz, p] : puzzles) {
    const FiniteDist a = answer(puzz);
    if (a.length() != sampler.ans_length()) fail(ErrorCode::kProtocol, "answerer produced the wrong answer length");
    for (const auto &[ans, q] : a) out.add(puzz + ans, p * q);
  }
  return out.build();
}

AdvantageReport advantage(const PuzzleSampler &sampler, const Answerer &answer, AdvantageMode mode,
                          std::uint64_t shots, std::uint64_t seed) {
  AdvantageReport r;
  r.mode = mode;
  if (mode == AdvantageMode::kExact) {
    r.alpha = sd(sampler.law(), completed_law(sampler, answer));
    return r;
  }
  if (shots == 0) fail(ErrorCode::kStructural, "empirical advantage needs shots > 0");
  Rng rng(seed);
  Rng honest_rng = rng.fork(1);
  Rng adv_rng = rng.fork(2);
  EmpiricalDist honest, completed;
  std::map<BitString, DistSampler> answers;
  for (std::uint64_t i = 0; i < shots; ++i) {
    auto [puzz, ans] = sampler.sample(honest_rng);
    honest.add(puzz + ans);
    auto [puzz2, unused] = sampler.sample(adv_rng);
    (void)unused;
    auto it = answers.find(puzz2);
    if (it == answers.end()) {
      const FiniteDist a = answer(puzz2);
      if (a.length() != sampler.ans_length()) fail(ErrorCode::kProtocol, "answerer produced the wrong answer length");
      it = answers.emplace(puzz2, DistSampler(a)).first;
    }
    completed.add(puzz2 + it->second(adv_rng));
  }
  r.alpha = sd(honest.normalized(), completed.normalized());
  r.shots = shots;
  const double k = static_cast<double>(std::max(honest.counts().size(), completed.counts().size()));
  r.margin = std::sqrt(k / static_cast<double>(shots));
  return r;
}

OracleOutput QStarBackend::sample(const Circuit &c, Rng &rng) const {
  return q_star(AdversaryContext{x_, &c}, *adv_, rng);
}

FiniteDist QStarBackend::law(const Circuit &c) const {
  return q_star_law(AdversaryContext{x_, &c}, *adv_, limits_);
}

namespace {

void require_non_adaptive(const BaseMachine &m) {
  if (m.query_bound() > 1) fail(ErrorCode::kStructural, "solver F needs a non-adaptive (single-query) machine");
}

}  // namespace

BitString solver_f(const PdqpInstanceFamily &fam, const BitString &x, double eps, const Adversary &adv, Rng &rng,
                   const Limits &limits) {
  require_non_adaptive(*fam.machine);
  const QStarBackend backend(adv, x, limits);
  return adaptive_session(*fam.machine, x, eps, backend, rng).value;
}

FiniteDist solver_law(const PdqpInstanceFamily &fam, const BitString &x, double eps, const Adversary &adv,
                      const Limits &limits) {
  require_non_adaptive(*fam.machine);
  const QStarBackend backend(adv, x, limits);
  return session_law(*fam.machine, x, eps, backend);
}

namespace {

void check_hybrid_index(const BaseMachine &m, int i) {
  if (i < 0 || i > m.query_bound()) fail(ErrorCode::kStructural, "replacement index out of range");
}

double per_query_accuracy(const BaseMachine &m, double eps) {
  return m.query_bound() > 0 ? eps / m.query_bound() : eps;
}

}  // namespace

FinalOutput adaptive_replacement_hybrid(const BaseMachine &m, const BitString &x, double eps, int i,
                                        const OracleSolver &solver, Rng &rng, const Limits &limits) {
  check_hybrid_index(m, i);
  const TrueOracle oracle(limits);
  const SolverBackend replaced(solver, per_query_accuracy(m, eps));
  return adaptive_session(
      m, x, eps, [&](int q) -> const OracleBackend & { return q < i ? static_cast<const OracleBackend &>(replaced) : oracle; },
      rng);
}

FiniteDist adaptive_replacement_law(const BaseMachine &m, const BitString &x, double eps, int i,
                                    const OracleSolver &solver, const Limits &limits) {
  check_hybrid_index(m, i);
  const TrueOracle oracle(limits);
  const SolverBackend replaced(solver, per_query_accuracy(m, eps));
  return session_law(m, x, eps, [&](int q) -> const OracleBackend & {
    return q < i ? static_cast<const OracleBackend &>(replaced) : oracle;
  });
}

}  // namespace ncmo
