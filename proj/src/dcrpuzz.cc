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

#include "ncmo/dcrpuzz.h"

#include <cmath>
#include <memory>

#include "ncmo/circuit_json.h"
#include "ncmo/error.h"
#include "ncmo/random_circuit.h"

namespace ncmo {

void DcrScheme::validate() const {
  if (pp_len < 0 || puzz_len < 0 || ans_len < 0) fail(ErrorCode::kStructural, "negative register width");
  if (setup.length() != pp_len) fail(ErrorCode::kStructural, "setup law does not match pp_len");
  if (!samp) fail(ErrorCode::kStructural, "scheme has no sampler");
  for (const auto &[pp, p] : setup) {
    if (samp(pp).length() != puzz_len + ans_len) {
      fail(ErrorCode::kStructural, "sampler law width does not match puzz_len + ans_len");
    }
    if (vpp) {
      const Circuit v = vpp(pp);
      if (v.qubits < puzz_len + ans_len) fail(ErrorCode::kStructural, "V_pp is narrower than puzz and ans");
      for (const Step &st : v.steps) {
        if (st.measure != 0) fail(ErrorCode::kStructural, "V_pp must not measure");
      }
    }
  }
}

CollisionTriple CollisionTriple::split(const DcrScheme &s, const BitString &bits) {
  if (bits.size() != s.triple_length()) fail(ErrorCode::kStructural, "collision triple has the wrong width");
  return {bits.prefix(s.puzz_len), bits.substr(s.puzz_len, s.ans_len), bits.suffix_from(s.puzz_len + s.ans_len)};
}

FiniteDist col_law(const DcrScheme &s, const BitString &pp) {
  const FiniteDist law = s.samp(pp);
  const FiniteDist puzzles = marginal(law, 0, s.puzz_len);
  FiniteDist::Map m;
  for (const auto &[puzz, pz] : puzzles) {
    const FiniteDist answers = condition(law, puzz);
    for (const auto &[a, pa] : answers) {
      for (const auto &[a2, pb] : answers) m.emplace(puzz + a + a2, pz * pa * pb);
    }
  }
  return FiniteDist::from_map(s.triple_length(), std::move(m));
}

CollisionTriple col(const DcrScheme &s, const BitString &pp, Rng &rng) {
  const FiniteDist law = s.samp(pp);
  const BitString first = sample(law, rng);
  const BitString puzz = first.prefix(s.puzz_len);
  return {puzz, first.suffix_from(s.puzz_len), sample(condition(law, puzz), rng)};
}

FiniteDist circuit_samp_law(const Circuit &v, int p, int a) {
  StateVector st = StateVector::zero(v.qubits);
  for (const Step &step : v.steps) {
    if (step.measure != 0) fail(ErrorCode::kStructural, "V_pp must not measure");
    for (const Gate &g : step.gates) apply_gate(st, g);
  }
  return marginal(readout_distribution(st), 0, p + a);
}

Circuit purify(const FiniteDist &law) {
  const int n = law.length();
  if (n < 1) fail(ErrorCode::kStructural, "cannot purify a law over empty strings");
  if (n > kMaxQubits) fail(ErrorCode::kInstanceTooLarge, "law too wide to purify");
  std::vector<Complex> amps(std::size_t{1} << n, 0.0);
  for (const auto &[s, p] : law) amps[static_cast<std::size_t>(s.to_uint())] = std::sqrt(p);
  std::vector<int> targets(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) targets[static_cast<std::size_t>(q)] = q;
  Circuit c;
  c.qubits = n;
  c.steps.push_back(Step{{gates::prepare(std::move(targets), std::move(amps))}, 0});
  return c;
}

Circuit dpp_instance(const DcrScheme &s, const BitString &pp) {
  if (!s.vpp) fail(ErrorCode::kStructural, "scheme '" + s.name + "' has no V_pp circuit");
  const Circuit v = s.vpp(pp);
  Circuit c;
  c.qubits = v.qubits;
  Step first;
  for (const Step &st : v.steps) {
    if (st.measure != 0) fail(ErrorCode::kStructural, "V_pp must not measure");
    first.gates.insert(first.gates.end(), st.gates.begin(), st.gates.end());
  }
  first.measure = s.puzz_len;
  c.steps.push_back(std::move(first));
  c.steps.push_back(Step{});
  c.validate();
  return c;
}

BitString dpp_output_map(const DcrScheme &s, int qubits, const BitString &reads) {
  if (reads.size() != 2 * qubits) fail(ErrorCode::kStructural, "expected two reads");
  const BitString v1 = reads.prefix(qubits);
  const BitString v2 = reads.suffix_from(qubits);
  return v1.prefix(s.puzz_len + s.ans_len) + v2.substr(s.puzz_len, s.ans_len);
}

FiniteDist dpp_oracle_law(const DcrScheme &s, const BitString &pp, const Limits &limits) {
  const Circuit c = dpp_instance(s, pp);
  return push_forward(oracle_exact(c, limits),
                      [&](const BitString &reads) { return dpp_output_map(s, c.qubits, reads); });
}

CollisionTriple dpp_collision(const DcrScheme &s, const BitString &pp, Rng &rng) {
  const Circuit c = dpp_instance(s, pp);
  return CollisionTriple::split(s, dpp_output_map(s, c.qubits, oracle_sample(c, rng).concat()));
}

CollisionFinder::CollisionFinder(const DcrScheme &s, Kind kind) : scheme_(&s), kind_(kind) {}

CollisionTriple CollisionFinder::operator()(const BitString &pp, Rng &rng) {
  if (kind_ == Kind::kOracle) {
    auto it = oracle_.find(pp);
    if (it == oracle_.end()) {
      it = oracle_.emplace(pp, OracleEntry{dpp_instance(*scheme_, pp), nullptr}).first;
      it->second.sampler = std::make_unique<OracleSampler>(it->second.circuit);
    }
    const int qubits = it->second.circuit.qubits;
    return CollisionTriple::split(*scheme_, dpp_output_map(*scheme_, qubits, (*it->second.sampler)(rng).concat()));
  }
  auto law = laws_.find(pp);
  if (law == laws_.end()) {
    law = laws_.emplace(pp, scheme_->samp(pp)).first;
    first_.emplace(pp, DistSampler(law->second));
  }
  const BitString first = first_.at(pp)(rng);
  const BitString puzz = first.prefix(scheme_->puzz_len);
  const BitString key = pp + puzz;
  auto cond = second_.find(key);
  if (cond == second_.end()) cond = second_.emplace(key, DistSampler(condition(law->second, puzz))).first;
  return {puzz, first.suffix_from(scheme_->puzz_len), cond->second(rng)};
}

Circuit preimage_pair_circuit(const std::vector<std::uint64_t> &f, int in_bits, int out_bits) {
  if (f.size() != (std::size_t{1} << in_bits)) fail(ErrorCode::kStructural, "f needs 2^in_bits entries");
  Circuit c;
  c.qubits = in_bits + out_bits;
  Step first;
  std::vector<int> inputs, outputs;
  for (int q = 0; q < out_bits; ++q) outputs.push_back(q);
  for (int q = out_bits; q < c.qubits; ++q) {
    first.gates.push_back(gates::h(q));
    inputs.push_back(q);
  }
  first.gates.push_back(gates::oracle(inputs, outputs, f));
  first.measure = out_bits;
  c.steps.push_back(std::move(first));
  c.steps.push_back(Step{});
  c.validate();
  return c;
}

double distinct_preimage_probability(const FiniteDist &oracle_law, int in_bits, int out_bits) {
  const int w = in_bits + out_bits;
  if (oracle_law.length() != 2 * w) fail(ErrorCode::kStructural, "expected two reads");
  double p = 0.0;
  for (const auto &[v, q] : oracle_law) {
    if (v.substr(out_bits, in_bits) != v.substr(w + out_bits, in_bits)) p += q;
  }
  return p;
}

double dcr_advantage(const DcrScheme &s, const CollisionSource &adversary) {
  double total = 0.0;
  for (const auto &[pp, p] : s.setup) total += p * sd(adversary(pp), col_law(s, pp));
  return total;
}

DcrScheme law_scheme(std::string name, FiniteDist law, int puzz_len, int pp_len) {
  DcrScheme s;
  s.name = std::move(name);
  s.pp_len = pp_len;
  s.puzz_len = puzz_len;
  s.ans_len = law.length() - puzz_len;
  s.setup = FiniteDist::uniform(pp_len);
  auto shared = std::make_shared<const FiniteDist>(std::move(law));
  s.samp = [shared](const BitString &) { return *shared; };
  if (shared->length() >= 1 && shared->length() <= kMaxQubits) {
    auto circuit = std::make_shared<const Circuit>(purify(*shared));
    s.vpp = [circuit](const BitString &) { return *circuit; };
  }
  s.validate();
  return s;
}

DcrScheme circuit_scheme(std::string name, std::map<BitString, Circuit> circuits, int puzz_len, int ans_len) {
  if (circuits.empty()) fail(ErrorCode::kStructural, "circuit scheme needs at least one V_pp");
  DcrScheme s;
  s.name = std::move(name);
  s.pp_len = circuits.begin()->first.size();
  s.puzz_len = puzz_len;
  s.ans_len = ans_len;
  std::vector<BitString> keys;
  auto laws = std::make_shared<std::map<BitString, FiniteDist>>();
  for (auto &[pp, c] : circuits) {
    c.validate();
    keys.push_back(pp);
    laws->emplace(pp, circuit_samp_law(c, puzz_len, ans_len));
  }
  s.setup = FiniteDist::uniform_over(keys);
  auto shared = std::make_shared<const std::map<BitString, Circuit>>(std::move(circuits));
  s.samp = [laws](const BitString &pp) {
    auto it = laws->find(pp);
    if (it == laws->end()) fail(ErrorCode::kStructural, "pp outside the scheme's setup support");
    return it->second;
  };
  s.vpp = [shared](const BitString &pp) {
    auto it = shared->find(pp);
    if (it == shared->end()) fail(ErrorCode::kStructural, "pp outside the scheme's setup support");
    return it->second;
  };
  s.validate();
  return s;
}

DcrScheme random_circuit_scheme(Rng &rng, int pp_len) {
  const int qubits = 2 + static_cast<int>(rng.below(3));
  const int p = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits - 1)));
  const int a = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits - p)));
  std::map<BitString, Circuit> circuits;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << pp_len); ++v) {
    Circuit c;
    c.qubits = qubits;
    c.steps.push_back(random_unitary_step(rng, qubits, 2));
    circuits.emplace(BitString::from_uint(v, pp_len), std::move(c));
  }
  return circuit_scheme("random", std::move(circuits), p, a);
}

namespace {

using nlohmann::json;

int int_field(const json &j, const char *field) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    fail(ErrorCode::kParse, std::string("scheme needs integer '") + field + "'");
  }
  return j[field].get<int>();
}

Circuit circuit_value(const json &j, const std::string &base_dir) {
  if (j.is_string()) {
    std::string path = j.get<std::string>();
    if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
    return load_circuit(path);
  }
  return circuit_from_json(j);
}

}  // namespace

DcrScheme scheme_from_json(const json &j, const std::string &base_dir) {
  if (!j.is_object()) fail(ErrorCode::kParse, "scheme must be a JSON object");
  const int pp_len = int_field(j, "pp_len");
  const int puzz_len = int_field(j, "puzz_len");
  const int ans_len = int_field(j, "ans_len");
  if (!j.contains("source") || !j["source"].is_object()) fail(ErrorCode::kParse, "scheme needs object 'source'");
  const json &src = j["source"];
  DcrScheme s;
  if (src.contains("law")) {
    const json &law = src["law"];
    if (law.contains("probs")) {
      s = law_scheme("law", dist_from_json(law), puzz_len, pp_len);
    } else {
      if (!law.is_object() || law.empty()) fail(ErrorCode::kParse, "'law' must be a distribution or a pp map");
      std::map<BitString, FiniteDist> laws;
      for (const auto &[key, value] : law.items()) laws.emplace(BitString::parse(key), dist_from_json(value));
      auto shared = std::make_shared<const std::map<BitString, FiniteDist>>(std::move(laws));
      std::vector<BitString> keys;
      for (const auto &[pp, d] : *shared) keys.push_back(pp);
      s.name = "law";
      s.pp_len = pp_len;
      s.puzz_len = puzz_len;
      s.ans_len = ans_len;
      s.setup = FiniteDist::uniform_over(keys);
      s.samp = [shared](const BitString &pp) {
        auto it = shared->find(pp);
        if (it == shared->end()) fail(ErrorCode::kStructural, "pp outside the scheme's setup support");
        return it->second;
      };
      if (puzz_len + ans_len >= 1 && puzz_len + ans_len <= kMaxQubits) {
        s.vpp = [shared](const BitString &pp) { return purify(shared->at(pp)); };
      }
    }
  } else if (src.contains("circuit") || src.contains("circuits")) {
    const int reg = int_field(src, "puzz_register");
    if (reg != puzz_len) fail(ErrorCode::kParse, "'puzz_register' must equal 'puzz_len'");
    std::map<BitString, Circuit> circuits;
    if (src.contains("circuit")) {
      Circuit c = circuit_value(src["circuit"], base_dir);
      if (pp_len == 0) {
        circuits.emplace(BitString(), std::move(c));
      } else {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << pp_len); ++v) circuits.emplace(BitString::from_uint(v, pp_len), c);
      }
    } else {
      if (!src["circuits"].is_object()) fail(ErrorCode::kParse, "'circuits' must map pp strings to circuits");
      for (const auto &[key, value] : src["circuits"].items()) {
        circuits.emplace(BitString::parse(key), circuit_value(value, base_dir));
      }
    }
    s = circuit_scheme("circuit", std::move(circuits), puzz_len, ans_len);
  } else {
    fail(ErrorCode::kParse, "scheme source needs 'law', 'circuit' or 'circuits'");
  }
  if (j.contains("setup")) s.setup = dist_from_json(j["setup"]);
  if (s.pp_len != pp_len || s.ans_len != ans_len) fail(ErrorCode::kParse, "declared widths do not match the source");
  s.validate();
  return s;
}

DcrScheme load_scheme(const std::string &path) {
  const auto slash = path.find_last_of('/');
  return scheme_from_json(load_json_file(path), slash == std::string::npos ? "." : path.substr(0, slash));
}

}  // namespace ncmo
