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

#include "ncmo/circuit_json.h"

#include <fstream>
#include <sstream>

#include "ncmo/error.h"

namespace ncmo {

namespace {

using nlohmann::json;

std::vector<int> int_list(const json &j, const char *field) {
  if (!j.contains(field) || !j[field].is_array()) {
    fail(ErrorCode::kParse, std::string("gate field '") + field + "' must be an array of integers");
  }
  std::vector<int> out;
  for (const auto &v : j[field]) {
    if (!v.is_number_integer()) fail(ErrorCode::kParse, std::string("non-integer entry in '") + field + "'");
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<Complex> complex_list(const json &j, const char *field) {
  if (!j.contains(field) || !j[field].is_array()) {
    fail(ErrorCode::kParse, std::string("gate field '") + field + "' must be an array of [re, im] pairs");
  }
  std::vector<Complex> out;
  for (const auto &v : j[field]) {
    if (v.is_number()) {
      out.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      out.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      fail(ErrorCode::kParse, std::string("malformed complex entry in '") + field + "'");
    }
  }
  return out;
}

nlohmann::ordered_json complex_json(const std::vector<Complex> &v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto &c : v) out.push_back({c.real(), c.imag()});
  return out;
}

Gate gate_from_json(const json &j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    fail(ErrorCode::kParse, "gate needs a string 'name'");
  }
  const std::string name = j["name"].get<std::string>();
  std::vector<int> targets = int_list(j, "targets");
  if (name == "unitary" || name == "u") return gates::unitary(std::move(targets), complex_list(j, "matrix"));
  if (name == "oracle") {
    if (!j.contains("table") || !j["table"].is_array()) fail(ErrorCode::kParse, "oracle gate needs 'table'");
    std::vector<std::uint64_t> table;
    for (const auto &v : j["table"]) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        fail(ErrorCode::kParse, "oracle table entries must be nonnegative integers");
      }
      table.push_back(v.get<std::uint64_t>());
    }
    return gates::oracle(int_list(j, "inputs"), std::move(targets), std::move(table));
  }
  if (name == "prepare") return gates::prepare(std::move(targets), complex_list(j, "amplitudes"));
  std::optional<double> angle;
  if (j.contains("angle")) {
    if (!j["angle"].is_number()) fail(ErrorCode::kParse, "gate angle must be a number");
    angle = j["angle"].get<double>();
  }
  if (j.contains("matrix")) fail(ErrorCode::kParse, "gate '" + name + "' does not take a matrix; use 'unitary'");
  return gates::named(name, std::move(targets), angle);
}

nlohmann::ordered_json gate_to_json(const Gate &g) {
  nlohmann::ordered_json j;
  j["name"] = g.name;
  j["targets"] = g.targets;
  switch (g.kind) {
    case GateKind::kDense:
      if (g.name == "unitary") j["matrix"] = complex_json(g.matrix);
      if (g.angle) j["angle"] = *g.angle;
      break;
    case GateKind::kPermutation:
      j["inputs"] = g.inputs;
      j["table"] = g.table;
      break;
    case GateKind::kPrepare:
      j["amplitudes"] = complex_json(g.amplitudes);
      break;
  }
  return j;
}

}  // namespace

Circuit circuit_from_json(const json &j) {
  if (!j.is_object()) fail(ErrorCode::kParse, "circuit must be a JSON object");
  if (!j.contains("qubits") || !j["qubits"].is_number_integer()) {
    fail(ErrorCode::kParse, "circuit needs integer 'qubits'");
  }
  if (!j.contains("steps") || !j["steps"].is_array()) fail(ErrorCode::kParse, "circuit needs array 'steps'");
  Circuit c;
  c.qubits = j["qubits"].get<int>();
  for (const auto &sj : j["steps"]) {
    if (!sj.is_object()) fail(ErrorCode::kParse, "step must be an object");
    Step st;
    if (sj.contains("measure")) {
      if (!sj["measure"].is_number_integer()) fail(ErrorCode::kParse, "step 'measure' must be an integer");
      st.measure = sj["measure"].get<int>();
    }
    if (sj.contains("gates")) {
      if (!sj["gates"].is_array()) fail(ErrorCode::kParse, "step 'gates' must be an array");
      for (const auto &gj : sj["gates"]) st.gates.push_back(gate_from_json(gj));
    }
    c.steps.push_back(std::move(st));
  }
  c.validate();
  return c;
}

nlohmann::ordered_json to_json(const Circuit &c) {
  nlohmann::ordered_json j;
  j["qubits"] = c.qubits;
  j["steps"] = nlohmann::ordered_json::array();
  for (const Step &st : c.steps) {
    nlohmann::ordered_json sj;
    sj["gates"] = nlohmann::ordered_json::array();
    for (const Gate &g : st.gates) sj["gates"].push_back(gate_to_json(g));
    sj["measure"] = st.measure;
    j["steps"].push_back(std::move(sj));
  }
  return j;
}

json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kParse, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::exception &e) {
    fail(ErrorCode::kParse, "'" + path + "': " + e.what());
  }
}

Circuit load_circuit(const std::string &path) { return circuit_from_json(load_json_file(path)); }

}  // namespace ncmo
