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

// ncmo: command-line runner for the oracle, hybrid, puzzle and reduction checks.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncmo/circuit_json.h"
#include "ncmo/commitment.h"
#include "ncmo/dcrpuzz.h"
#include "ncmo/error.h"
#include "ncmo/mac.h"
#include "ncmo/oracle.h"
#include "ncmo/puzzles.h"
#include "ncmo/report.h"
#include "ncmo/suites.h"

namespace {

using nlohmann::ordered_json;
using namespace ncmo;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 2;
constexpr int kExitInputError = 3;
constexpr int kExitCapExceeded = 4;

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

std::uint64_t require_seed(const Common &c) {
  if (!c.seed) fail(ErrorCode::kParse, "--seed is required in sampling modes");
  return *c.seed;
}

// "n=4,lm=4" → {n: 4, lm: 4}.
std::map<std::string, std::uint64_t> parse_params(const std::string &text) {
  std::map<std::string, std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorCode::kParse, "bad parameter '" + item + "' (want key=value)");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(value, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != value.size() || value.empty()) fail(ErrorCode::kParse, "parameter '" + key + "' is not an integer");
    out[key] = v;
  }
  return out;
}

int param(const std::map<std::string, std::uint64_t> &p, const std::string &key, int fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : static_cast<int>(it->second);
}

void reject_unknown(const std::map<std::string, std::uint64_t> &p, std::initializer_list<const char *> known) {
  for (const auto &[k, v] : p) {
    bool ok = false;
    for (const char *n : known) ok = ok || k == n;
    if (!ok) fail(ErrorCode::kParse, "unknown parameter '" + k + "'");
  }
}

ordered_json game_json(const GameReport &g) {
  ordered_json j = {{"game", g.game}, {"trials", g.trials}, {"successes", g.successes}, {"rate", g.rate()}};
  if (g.aborted) j["aborted"] = g.aborted;
  if (g.exact) j["exact"] = *g.exact;
  return j;
}

// --- run-oracle ---

struct OracleArgs {
  std::string circuit;
  std::string mode = "exact";
  std::uint64_t shots = 10'000;
  double tolerance = 0.05;
};

Report run_oracle(const OracleArgs &a, const Common &common, const Limits &limits) {
  const Circuit c = load_circuit(a.circuit);
  ordered_json config = {{"circuit", a.circuit}, {"mode", a.mode}};
  if (a.mode == "sample") {
    config["shots"] = a.shots;
    config["seed"] = require_seed(common);
    config["tolerance"] = a.tolerance;
  } else if (a.mode != "exact") {
    fail(ErrorCode::kParse, "--mode must be exact or sample");
  }
  Report r("run-oracle", config);
  r.results()["qubits"] = c.qubits;
  r.results()["steps"] = c.T();
  r.results()["measure"] = [&] {
    ordered_json m = ordered_json::array();
    for (const Step &s : c.steps) m.push_back(s.measure);
    return m;
  }();
  if (a.mode == "exact") {
    const BranchTree tree = enumerate_branches(c, limits.max_branches);
    double mass = 0.0;
    for (int leaf : tree.leaves()) mass += tree.node(leaf).prob;
    const FiniteDist law = oracle_exact(tree, limits);
    r.check_close("branch-mass", mass, 1.0, 1e-9);
    r.check_close("law-mass", law.total(), 1.0, 1e-9);
    r.results()["branches"] = tree.leaves().size();
    r.results()["law"] = to_json(law);
  } else {
    Rng rng(*common.seed);
    const OracleSampler sampler(c);
    EmpiricalDist emp;
    for (std::uint64_t s = 0; s < a.shots; ++s) emp.add(sampler(rng).concat());
    ordered_json counts = ordered_json::object();
    for (const auto &[v, k] : emp.counts()) counts[v.str()] = k;
    r.results()["counts"] = counts;
    // Compare against the exact law when it can be materialized.
    if (branch_count(c) <= limits.max_branches && c.T() * c.qubits <= limits.max_exact_bits) {
      const double tv = sd(emp.normalized(), oracle_exact(c, limits));
      r.results()["tv_to_exact"] = tv;
      r.check_le("tv-to-exact", tv, a.tolerance);
    }
  }
  return r;
}

// --- check-hybrid ---

struct HybridArgs {
  std::string circuit;
  std::vector<std::string> adversaries = {"perfect", "oblivious", "rejection:2"};
  std::string x;
  double tolerance = 1e-9;
};

Report check_hybrid(const HybridArgs &a, const Limits &limits) {
  const Circuit c = load_circuit(a.circuit);
  const BitString x = BitString::parse(a.x);
  Report r("check-hybrid", {{"circuit", a.circuit}, {"adversaries", a.adversaries}, {"x", a.x},
                            {"tolerance", a.tolerance}});
  const AdversaryContext ctx{x, &c};
  const FiniteDist oracle = oracle_exact(c, limits);
  ordered_json rows = ordered_json::array();
  for (const std::string &spec : a.adversaries) {
    const auto adv = make_adversary(spec, limits);
    const std::string p = adv->kind() + ".";
    r.check_close(p + "B(T)=Q", sd(hybrid_law(c.T(), ctx, *adv, limits), oracle), 0.0, a.tolerance);
    r.check_close(p + "B(0)=Q*", sd(hybrid_law(0, ctx, *adv, limits), q_star_law(ctx, *adv, limits)), 0.0,
                  a.tolerance);
    const PerStepReport s = per_step_sd(ctx, *adv, limits);
    for (std::size_t t = 0; t < s.hybrid.size(); ++t) {
      r.check_close(p + "per-step[" + std::to_string(t + 1) + "]", s.hybrid[t], s.single_step[t], a.tolerance);
    }
    r.check_le(p + "telescoping", s.q_star_to_oracle, s.sum, a.tolerance);
    rows.push_back({{"adversary", adv->kind()},
                    {"hybrid_step_sd", s.hybrid},
                    {"single_step_sd", s.single_step},
                    {"sum", s.sum},
                    {"sd_q_star_oracle", s.q_star_to_oracle}});
  }
  r.results()["adversaries"] = rows;
  return r;
}

// --- run-reduction ---

struct ReductionArgs {
  std::string primitive;
  std::string variant = "coherent";
  std::string params;
  std::string source = "col";
  std::uint64_t trials = 10'000;
  double tolerance = 0.02;
  double threshold = 0.25;
};

Report run_reduction(const ReductionArgs &a, const Common &common) {
  const auto p = parse_params(a.params);
  const CollisionSourceKind kind = collision_source_from_string(a.source);
  const std::uint64_t seed = require_seed(common);
  ordered_json config = {{"primitive", a.primitive}, {"source", a.source}, {"params", p},
                         {"trials", a.trials},       {"seed", seed},       {"tolerance", a.tolerance}};
  if (a.primitive == "mac") {
    reject_unknown(p, {"n", "lm", "pp_bits", "table"});
    const ToyMac mac(MacParams{param(p, "n", 4), param(p, "lm", 4), param(p, "pp_bits", 2),
                               p.count("table") ? p.at("table") : 1});
    Report r("run-reduction", config);
    const GameReport g = mac_break_via_collision(mac, kind, a.trials, seed);
    r.check_close("empirical-vs-exact", g.rate(), *g.exact, a.tolerance);
    if (kind == CollisionSourceKind::kExactCol || kind == CollisionSourceKind::kAlgorithmC ||
        kind == CollisionSourceKind::kOracleBacked) {
      r.check_close("exact-vs-1-2^-lm", *g.exact, 1.0 - std::pow(2.0, -mac.params().lm), 1e-9);
    }
    const double correctness = mac_correctness_exact(mac);
    r.check_close("correctness", correctness, 1.0, 1e-9);
    r.results()["game"] = game_json(g);
    r.results()["correctness"] = correctness;
    return r;
  }
  if (a.primitive == "commitment") {
    reject_unknown(p, {"n", "c", "r1_bits", "table"});
    const ComVariant v = com_variant_from_string(a.variant);
    config["variant"] = a.variant;
    config["threshold"] = a.threshold;
    const ToyCommitment com(param(p, "n", 3), param(p, "c", 1), param(p, "r1_bits", 1),
                            p.count("table") ? p.at("table") : 1);
    Report r("run-reduction", config);
    const GameReport g = com_break_via_collision(com, v, kind, a.trials, seed);
    r.check_close("empirical-vs-exact", g.rate(), *g.exact, a.tolerance);
    const CommitmentAudit audit = hiding_and_correctness_audit(com, a.threshold);
    r.check_close("correctness[0]", audit.correctness[0], 1.0, 1e-9);
    r.check_close("correctness[1]", audit.correctness[1], 1.0, 1e-9);
    r.check_true("lemma-bound", audit.bound_holds);
    r.results()["game"] = game_json(g);
    r.results()["audit"] = {{"threshold", audit.threshold},
                            {"correctness", {audit.correctness[0], audit.correctness[1]}},
                            {"good_mass", {audit.good_mass[0], audit.good_mass[1]}},
                            {"hiding_sd", audit.hiding_sd},
                            {"g1_mass_under_b0", audit.g1_mass_under_b0},
                            {"bound", audit.bound},
                            {"algorithm_c_success", audit.algorithm_c_success}};
    return r;
  }
  fail(ErrorCode::kParse, "--primitive must be mac or commitment");
}

// --- run-dcr ---

struct DcrArgs {
  std::string scheme;
  std::string mode = "exact";
  std::uint64_t trials = 10'000;
  double tolerance = 0.05;
};

Report run_dcr(const DcrArgs &a, const Common &common, const Limits &limits) {
  const DcrScheme s = load_scheme(a.scheme);
  ordered_json config = {{"scheme", a.scheme}, {"mode", a.mode}};
  if (a.mode == "sample") {
    config["trials"] = a.trials;
    config["seed"] = require_seed(common);
    config["tolerance"] = a.tolerance;
  } else if (a.mode != "exact") {
    fail(ErrorCode::kParse, "--mode must be exact or sample");
  }
  Report r("run-dcr", config);
  r.results()["circuit_backed"] = s.circuit_backed();
  ordered_json rows = ordered_json::array();
  Rng rng(common.seed.value_or(0));
  std::optional<CollisionFinder> finder;
  if (a.mode == "sample" && s.circuit_backed()) finder.emplace(s, CollisionFinder::Kind::kOracle);
  for (const auto &[pp, p] : s.setup) {
    const FiniteDist col = col_law(s, pp);
    ordered_json row = {{"pp", pp.str()}, {"col", to_json(col)}};
    if (s.circuit_backed()) {
      const double d = sd(dpp_oracle_law(s, pp, limits), col);
      row["sd_oracle_col"] = d;
      r.check_close("oracle=col[" + pp.str() + "]", d, 0.0, 1e-9);
      if (finder) {
        EmpiricalDist emp;
        for (std::uint64_t i = 0; i < a.trials; ++i) emp.add((*finder)(pp, rng).concat());
        const double tv = sd(emp.normalized(), col);
        row["empirical_tv"] = tv;
        r.check_le("empirical[" + pp.str() + "]", tv, a.tolerance);
      }
    }
    rows.push_back(std::move(row));
  }
  r.results()["pp"] = rows;
  return r;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInstanceTooLarge:
    case ErrorCode::kRetryExhausted:
      return kExitCapExceeded;
    default:
      return kExitInputError;
  }
}

void print_error(const std::string &code, const std::string &message) {
  std::cerr << ordered_json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Non-collapsing measurement oracle: exact and sampled checks"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--out", common.out, "Write the JSON report here (default: stdout)");
    sub->add_option("--seed", common.seed, "64-bit seed (required when sampling)");
    sub->add_flag("--timing", common.timing, "Include wall time in the report");
  };

  OracleArgs oracle_args;
  auto *oracle_cmd = app.add_subcommand("run-oracle", "Exact law or samples of the oracle on a circuit file");
  oracle_cmd->add_option("--circuit", oracle_args.circuit, "Circuit JSON")->required();
  oracle_cmd->add_option("--mode", oracle_args.mode, "exact|sample")->check(CLI::IsMember({"exact", "sample"}));
  oracle_cmd->add_option("--shots", oracle_args.shots, "Samples in sample mode");
  oracle_cmd->add_option("--tolerance", oracle_args.tolerance, "TV tolerance against the exact law");
  add_common(oracle_cmd);

  HybridArgs hybrid_args;
  auto *hybrid_cmd = app.add_subcommand("check-hybrid", "Hybrid endpoint, per-step and telescoping identities");
  hybrid_cmd->add_option("--circuit", hybrid_args.circuit, "Circuit JSON")->required();
  hybrid_cmd->add_option("--adversary", hybrid_args.adversaries, "perfect|oblivious|rejection:<budget> (repeatable)");
  hybrid_cmd->add_option("--x", hybrid_args.x, "Instance bits passed to adversaries");
  hybrid_cmd->add_option("--tolerance", hybrid_args.tolerance, "Absolute tolerance");
  add_common(hybrid_cmd);

  ReductionArgs red_args;
  auto *red_cmd = app.add_subcommand("run-reduction", "MAC or commitment break through a collision finder");
  red_cmd->add_option("--primitive", red_args.primitive, "mac|commitment")->required();
  red_cmd->add_option("--variant", red_args.variant, "literal|coherent (commitment)");
  red_cmd->add_option("--params", red_args.params, "e.g. n=4,lm=4 or n=3,c=1");
  red_cmd->add_option("--source", red_args.source, "col|oracle|duplicate|algorithm-c");
  red_cmd->add_option("--trials", red_args.trials, "Game trials");
  red_cmd->add_option("--tolerance", red_args.tolerance, "Empirical tolerance");
  red_cmd->add_option("--threshold", red_args.threshold, "1/p for the commitment audit");
  add_common(red_cmd);

  DcrArgs dcr_args;
  auto *dcr_cmd = app.add_subcommand("run-dcr", "Col law and oracle-backed collisions for a scheme file");
  dcr_cmd->add_option("--scheme", dcr_args.scheme, "Scheme JSON")->required();
  dcr_cmd->add_option("--mode", dcr_args.mode, "exact|sample")->check(CLI::IsMember({"exact", "sample"}));
  dcr_cmd->add_option("--trials", dcr_args.trials, "Collisions drawn in sample mode");
  dcr_cmd->add_option("--tolerance", dcr_args.tolerance, "TV tolerance in sample mode");
  add_common(dcr_cmd);

  std::string suite_name;
  SuiteOptions suite_opt;
  auto *suite_cmd = app.add_subcommand("suite", "Run an acceptance suite");
  suite_cmd->add_option("name", suite_name, "Suite id")->required()->check(CLI::IsMember(suite_names()));
  suite_cmd->add_option("--shots", suite_opt.shots, "Oracle samples per circuit");
  suite_cmd->add_option("--trials", suite_opt.trials, "Game trials");
  add_common(suite_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    print_error("parse", e.what());
    return kExitInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const Limits limits = Limits::from_env();
    std::optional<Report> report;
    if (*oracle_cmd) {
      report = run_oracle(oracle_args, common, limits);
    } else if (*hybrid_cmd) {
      report = check_hybrid(hybrid_args, limits);
    } else if (*red_cmd) {
      report = run_reduction(red_args, common);
    } else if (*dcr_cmd) {
      report = run_dcr(dcr_args, common, limits);
    } else {
      suite_opt.seed = common.seed.value_or(suite_opt.seed);
      suite_opt.limits = limits;
      report.emplace("suite", ordered_json{{"suite", suite_name},
                                           {"seed", suite_opt.seed},
                                           {"shots", suite_opt.shots},
                                           {"trials", suite_opt.trials}});
      run_suite(suite_name, suite_opt, *report);
    }
    if (common.timing) {
      report->set_wall_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    if (common.out.empty()) {
      std::cout << report->dump();
    } else {
      report->write(common.out);
    }
    if (!report->passed()) {
      std::cerr << report->failures() << " of " << report->checks() << " checks failed\n";
      return kExitCheckFailure;
    }
    return kExitPass;
  } catch (const Error &e) {
    print_error(error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception &e) {
    print_error("parse", e.what());
    return kExitInputError;
  }
}
