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

#include "ncmo/suites.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ncmo/commitment.h"
#include "ncmo/dcrpuzz.h"
#include "ncmo/error.h"
#include "ncmo/mac.h"
#include "ncmo/puzzles.h"
#include "ncmo/random_circuit.h"

namespace ncmo {

using nlohmann::ordered_json;

namespace {

constexpr double kExactTol = 1e-9;

std::string tag(const char *prefix, std::size_t i) { return std::string(prefix) + "[" + std::to_string(i) + "]"; }

// The random-circuit corpus shared by the hybrid checks.
std::vector<Circuit> hybrid_corpus(const SuiteOptions &opt, std::size_t count) {
  std::vector<Circuit> out;
  const Rng root(opt.seed ^ 0x6879627269647321ULL);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = root.fork(i);
    out.push_back(random_circuit(rng));
  }
  return out;
}

// Normal-approximation mean of TV(empirical, p) for n i.i.d. draws from p:
// ½ Σ_v √(2 p_v (1 − p_v) / (π n)).
double expected_sampling_tv(const FiniteDist &p, std::uint64_t n) {
  const double pi = 3.14159265358979323846;
  double total = 0.0;
  for (const auto &[v, q] : p) total += std::sqrt(2.0 * q * (1.0 - q) / (pi * static_cast<double>(n)));
  return 0.5 * total;
}

std::vector<std::unique_ptr<Adversary>> adversary_kinds(const Limits &limits) {
  std::vector<std::unique_ptr<Adversary>> out;
  out.push_back(make_adversary("perfect", limits));
  out.push_back(make_adversary("oblivious", limits));
  out.push_back(make_adversary("rejection:2", limits));
  return out;
}

}  // namespace

Circuit bell_circuit(int first_measure) {
  Circuit c;
  c.qubits = 2;
  c.steps.push_back(Step{{gates::h(0), gates::cx(0, 1)}, first_measure});
  c.steps.push_back(Step{});
  c.validate();
  return c;
}

const BaseMachine &two_query_machine() {
  static const LambdaMachine machine(
      [](const BitString &x, double, std::span<const OracleOutput> answers) -> MachineStep {
        const double angle = 0.3 + 0.7 * static_cast<double>(x.popcount() + x.size());
        if (answers.empty()) {
          Circuit c;
          c.qubits = 2;
          c.steps.push_back(Step{{gates::ry(0, angle), gates::cx(0, 1), gates::rx(1, 0.4)}, 1});
          c.steps.push_back(Step{{gates::h(1)}, 0});
          return NextQuery{std::move(c)};
        }
        if (answers.size() == 1) {
          // Adaptive: the second circuit depends on both reads of the first answer.
          const BitString &v1 = answers[0].reads[0];
          const BitString &v2 = answers[0].reads[1];
          Circuit c;
          c.qubits = 2;
          Step s;
          if (v1[1]) s.gates.push_back(gates::x(0));
          s.gates.push_back(gates::ry(1, v2[0] ? 1.1 : 0.2));
          s.gates.push_back(gates::cx(1, 0));
          s.measure = v2[1] ? 2 : 0;
          c.steps.push_back(std::move(s));
          return NextQuery{std::move(c)};
        }
        return FinalOutput{answers[0].reads[1] + answers[1].reads[0]};
      },
      2);
  return machine;
}

void suite_oracle_core(const SuiteOptions &opt, Report &report) {
  const Rng root(opt.seed ^ 0x6f7261636c652121ULL);
  ordered_json rows = ordered_json::array();
  double worst_tv = 0.0, worst_mass = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    Rng rng = root.fork(i);
    const Circuit c = random_circuit(rng);
    const BranchTree tree = enumerate_branches(c, opt.limits.max_branches);
    double mass = 0.0;
    for (int leaf : tree.leaves()) mass += tree.node(leaf).prob;
    const FiniteDist exact = oracle_exact(tree, opt.limits);
    const OracleSampler sampler(c);
    EmpiricalDist emp;
    for (std::uint64_t s = 0; s < opt.shots; ++s) emp.add(sampler(rng).concat());
    const double tv = sd(emp.normalized(), exact);
    const double noise = expected_sampling_tv(exact, opt.shots);
    worst_tv = std::max(worst_tv, tv);
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    rows.push_back({{"qubits", c.qubits},
                    {"steps", c.T()},
                    {"support", exact.support_size()},
                    {"tv", tv},
                    {"expected_sampling_tv", noise}});
    report.check_le(tag("oracle-core.tv", i), tv, 0.01);
    // Diagnostic: a correct sampler sits near its own noise floor.
    report.check_le(tag("oracle-core.tv-vs-noise-floor", i), tv, 2.0 * noise + 0.002);
    report.check_close(tag("oracle-core.branch-mass", i), mass, 1.0, kExactTol);
  }
  report.results()["oracle-core"] = {{"circuits", rows}, {"max_tv", worst_tv}, {"max_branch_mass_error", worst_mass}};
}

void suite_non_collapse(const SuiteOptions &opt, Report &report) {
  const FiniteDist open = oracle_exact(bell_circuit(0), opt.limits);
  const FiniteDist expected = FiniteDist::uniform_over(
      std::vector<BitString>{BitString::parse("0000"), BitString::parse("0011"), BitString::parse("1100"),
                             BitString::parse("1111")});
  report.check_close("non-collapse.bell-unmeasured", sd(open, expected), 0.0, kExactTol);

  const Circuit measured = bell_circuit(1);
  const BranchTree tree = enumerate_branches(measured, opt.limits.max_branches);
  bool same = true;
  for (int leaf : tree.leaves()) {
    const auto path = tree.path(leaf);
    const FiniteDist &r1 = tree.node(path[0]).readout;
    const FiniteDist &r2 = tree.node(path[1]).readout;
    same = same && r1.support_size() == 1 && r2.support_size() == 1 && sd(r1, r2) <= kExactTol;
  }
  report.check_true("non-collapse.bell-measured-reads-equal", same);
  const FiniteDist joint = oracle_exact(tree, opt.limits);
  double equal = 0.0;
  for (const auto &[v, p] : joint) {
    if (v.prefix(2) == v.suffix_from(2)) equal += p;
  }
  report.check_close("non-collapse.bell-measured-equal-mass", equal, 1.0, kExactTol);
  report.results()["non-collapse"] = {{"unmeasured", to_json(open)}, {"measured", to_json(joint)}};
}

void suite_hybrid_identities(const SuiteOptions &opt, Report &report) {
  const auto corpus = hybrid_corpus(opt, 20);
  const auto kinds = adversary_kinds(opt.limits);
  ordered_json rows = ordered_json::array();
  double worst_endpoint = 0.0, worst_step = 0.0, worst_slack = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Circuit &c = corpus[i];
    const AdversaryContext ctx{BitString(), &c};
    const FiniteDist oracle = oracle_exact(c, opt.limits);
    for (const auto &adv : kinds) {
      const std::string name = tag("hybrid", i) + "." + adv->kind();
      const double top = sd(hybrid_law(c.T(), ctx, *adv, opt.limits), oracle);
      const double bottom = sd(hybrid_law(0, ctx, *adv, opt.limits), q_star_law(ctx, *adv, opt.limits));
      worst_endpoint = std::max({worst_endpoint, top, bottom});
      report.check_close(name + ".B(T)=Q", top, 0.0, kExactTol);
      report.check_close(name + ".B(0)=Q*", bottom, 0.0, kExactTol);

      const PerStepReport steps = per_step_sd(ctx, *adv, opt.limits);
      double step_err = 0.0;
      for (std::size_t t = 0; t < steps.hybrid.size(); ++t) {
        step_err = std::max(step_err, std::abs(steps.hybrid[t] - steps.single_step[t]));
      }
      worst_step = std::max(worst_step, step_err);
      report.check_close(name + ".per-step", step_err, 0.0, kExactTol);
      report.check_le(name + ".telescoping", steps.q_star_to_oracle, steps.sum, kExactTol);
      worst_slack = std::max(worst_slack, steps.q_star_to_oracle - steps.sum);
      if (adv->kind() == "perfect") {
        report.check_close(name + ".perfect-zero", std::max(steps.q_star_to_oracle, steps.sum), 0.0, kExactTol);
      }
      rows.push_back({{"circuit", i},
                      {"adversary", adv->kind()},
                      {"per_step", steps.single_step},
                      {"sum", steps.sum},
                      {"sd_q_star_oracle", steps.q_star_to_oracle}});
    }
  }
  report.results()["hybrid-identities"] = {{"rows", rows},
                                           {"max_endpoint_sd", worst_endpoint},
                                           {"max_per_step_error", worst_step},
                                           {"max_telescoping_excess", worst_slack}};
}

void suite_col_oracle(const SuiteOptions &opt, Report &report) {
  const Rng root(opt.seed ^ 0x636f6c2d6f726121ULL);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < 10; ++i) {
    Rng rng = root.fork(i);
    const DcrScheme s = random_circuit_scheme(rng);
    double worst = 0.0;
    for (const auto &[pp, p] : s.setup) worst = std::max(worst, sd(dpp_oracle_law(s, pp, opt.limits), col_law(s, pp)));
    report.check_close(tag("col-oracle", i), worst, 0.0, kExactTol);
    rows.push_back({{"scheme", s.name}, {"puzz_len", s.puzz_len}, {"ans_len", s.ans_len}, {"max_sd", worst}});
  }
  report.results()["col-oracle"] = rows;
}

void suite_reductions(const SuiteOptions &opt, Report &report) {
  ordered_json out;
  {
    const ToyMac mac(MacParams{4, 4, 2, opt.seed});
    const GameReport g = mac_break_via_collision(mac, CollisionSourceKind::kExactCol, opt.trials, opt.seed);
    report.check_close("reductions.mac.exact", *g.exact, 1.0 - std::pow(2.0, -4), kExactTol);
    report.check_close("reductions.mac.empirical", g.rate(), *g.exact, 0.02);
    const GameReport dup = mac_break_via_collision(mac, CollisionSourceKind::kHonestDuplicate, opt.trials, opt.seed);
    report.check_close("reductions.mac.duplicate", dup.rate(), 0.0, 0.0);
    report.check_close("reductions.mac.correctness", mac_correctness_exact(mac), 1.0, kExactTol);
    out["mac"] = {{"exact", *g.exact}, {"empirical", g.rate()}, {"trials", g.trials}, {"duplicate_rate", dup.rate()}};
  }
  {
    const ToyCommitment com(3, 1, 1, opt.seed);
    // Enumerated from the tables alone: Col draws b, b′ i.i.d. from Pr[x₁ | y],
    // and the breaker wins iff b = 0 and b′ = 1.
    double enumerated = 0.0, both_parity = 0.0;
    const double cells = std::pow(2.0, 2 * com.n());
    for (const auto &[r1, pr] : com.r1_law()) {
      const auto &t = com.table(r1);
      std::vector<double> k0(std::size_t{1} << com.s1_length()), k1(k0.size());
      for (std::size_t idx = 0; idx < t.size(); ++idx) (idx < t.size() / 2 ? k0 : k1)[t[idx]] += 1;
      for (std::size_t y = 0; y < k0.size(); ++y) {
        if (k0[y] + k1[y] == 0) continue;
        enumerated += pr * k0[y] * k1[y] / ((k0[y] + k1[y]) * cells);
        if (k0[y] > 0 && k1[y] > 0) both_parity += pr * (k0[y] + k1[y]) / cells;
      }
    }
    const GameReport coh = com_break_via_collision(com, ComVariant::kCoherent, CollisionSourceKind::kExactCol,
                                                   opt.trials, opt.seed);
    report.check_close("reductions.commitment.coherent.exact", *coh.exact, enumerated, kExactTol);
    report.check_close("reductions.commitment.coherent.empirical", coh.rate(), *coh.exact, 0.02);
    const GameReport lit = com_break_via_collision(com, ComVariant::kLiteral, CollisionSourceKind::kExactCol,
                                                   opt.trials, opt.seed);
    report.check_close("reductions.commitment.literal.exact", *lit.exact, 0.0, kExactTol);
    report.check_close("reductions.commitment.literal.empirical", lit.rate(), 0.0, 0.0);
    const CommitmentAudit audit = hiding_and_correctness_audit(com, 0.25);
    report.check_close("reductions.commitment.correctness0", audit.correctness[0], 1.0, kExactTol);
    report.check_close("reductions.commitment.correctness1", audit.correctness[1], 1.0, kExactTol);
    report.check_true("reductions.commitment.lemma-bound", audit.bound_holds);
    out["commitment"] = {{"coherent_exact", *coh.exact},
                         {"coherent_empirical", coh.rate()},
                         {"enumerated", enumerated},
                         {"pr_both_parity_y", both_parity},
                         {"literal_exact", *lit.exact},
                         {"literal_empirical", lit.rate()},
                         {"hiding_sd", audit.hiding_sd},
                         {"lemma_bound", audit.bound},
                         {"algorithm_c_success", audit.algorithm_c_success}};
  }
  report.results()["reductions"] = out;
}

void suite_adaptive(const SuiteOptions &opt, Report &report) {
  const BaseMachine &m = two_query_machine();
  const PerfectAdversary perfect;
  const MixtureSolver mixture(opt.limits);
  const TrueOracle oracle(opt.limits);
  const double eps = 0.1;
  ordered_json rows = ordered_json::array();
  for (const char *xs : {"0", "1", "01", "110"}) {
    const BitString x = BitString::parse(xs);
    const FiniteDist reference = session_law(m, x, eps, oracle);
    const AdversarySolver solver(perfect, x, opt.limits);
    for (int i = 0; i <= m.query_bound(); ++i) {
      const double d = sd(adaptive_replacement_law(m, x, eps, i, solver, opt.limits), reference);
      report.check_close("adaptive.x=" + x.str() + ".i=" + std::to_string(i), d, 0.0, kExactTol);
      // Each solver answer at accuracy ε/N moves the output by at most ε/N.
      const double dm = sd(adaptive_replacement_law(m, x, eps, i, mixture, opt.limits), reference);
      report.check_le("adaptive.mixture.x=" + x.str() + ".i=" + std::to_string(i), dm,
                      i * eps / m.query_bound(), kExactTol);
      rows.push_back({{"x", x.str()}, {"i", i}, {"sd_perfect", d}, {"sd_mixture", dm}});
    }
  }
  report.results()["adaptive"] = rows;
}

void suite_preimage(const SuiteOptions &opt, Report &report) {
  const Rng root(opt.seed ^ 0x707265696d616765ULL);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < 10; ++i) {
    Rng rng = root.fork(i);
    std::vector<std::uint64_t> f(8);
    for (auto &y : f) y = rng.below(4);
    std::vector<int> count(4, 0);
    for (auto y : f) ++count[y];
    // E_y[1/|f⁻¹(y)|] with Pr[y] = |f⁻¹(y)|/8 is |image|/8.
    const double expected =
        1.0 - static_cast<double>(std::count_if(count.begin(), count.end(), [](int k) { return k > 0; })) / 8.0;
    const Circuit c = preimage_pair_circuit(f, 3, 2);
    const double exact = distinct_preimage_probability(oracle_exact(c, opt.limits), 3, 2);
    const OracleSampler sampler(c);
    std::uint64_t distinct = 0;
    for (std::uint64_t s = 0; s < opt.shots; ++s) {
      const OracleOutput o = sampler(rng);
      if (o.reads[0].suffix_from(2) != o.reads[1].suffix_from(2)) ++distinct;
    }
    const double empirical = static_cast<double>(distinct) / static_cast<double>(opt.shots);
    report.check_close(tag("preimage.exact", i), exact, expected, kExactTol);
    report.check_close(tag("preimage.empirical", i), empirical, expected, 0.01);
    rows.push_back({{"f", f}, {"expected", expected}, {"exact", exact}, {"empirical", empirical}});
  }
  report.results()["preimage"] = rows;
}

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {"oracle-core", "non-collapse", "hybrid-identities", "col-oracle",
                                                 "reductions",  "adaptive",     "preimage",          "all"};
  return names;
}

void run_suite(const std::string &name, const SuiteOptions &opt, Report &report) {
  if (name == "oracle-core") return suite_oracle_core(opt, report);
  if (name == "non-collapse") return suite_non_collapse(opt, report);
  if (name == "hybrid-identities") return suite_hybrid_identities(opt, report);
  if (name == "col-oracle") return suite_col_oracle(opt, report);
  if (name == "reductions") return suite_reductions(opt, report);
  if (name == "adaptive") return suite_adaptive(opt, report);
  if (name == "preimage") return suite_preimage(opt, report);
  if (name == "all") {
    for (const auto &n : suite_names()) {
      if (n != "all") run_suite(n, opt, report);
    }
    return;
  }
  fail(ErrorCode::kParse, "unknown suite '" + name + "'");
}

}  // namespace ncmo
