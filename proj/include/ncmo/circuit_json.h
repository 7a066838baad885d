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

#ifndef NCMO_CIRCUIT_JSON_H_
#define NCMO_CIRCUIT_JSON_H_

#include <string>

#include "json.hpp"
#include "ncmo/qsim.h"

namespace ncmo {

// Circuit files:
//   {"qubits": ℓ,
//    "steps": [{"gates": [{"name": "h", "targets": [0]}, …], "measure": m}, …]}
//
// Gate objects carry "name" and "targets" plus, depending on the name:
//   rx, ry, rz, cp   "angle": radians
//   unitary, u       "matrix": [[re, im], …] row-major, 2^k × 2^k
//   oracle           "inputs": [...], "table": [f(0), f(1), …]
//   prepare          "amplitudes": [[re, im], …]
Circuit circuit_from_json(const nlohmann::json &j);
nlohmann::ordered_json to_json(const Circuit &c);

// Reads and parses a circuit file. kParse on I/O or syntax problems.
Circuit load_circuit(const std::string &path);
nlohmann::json load_json_file(const std::string &path);

}  // namespace ncmo

#endif  // NCMO_CIRCUIT_JSON_H_
