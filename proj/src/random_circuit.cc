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

#include "ncmo/random_circuit.h"

#include <numbers>

namespace ncmo {

namespace {

double angle(Rng &rng) { return 2.0 * std::numbers::pi * rng.uniform(); }

int in_range(Rng &rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

}  // namespace

Step random_unitary_step(Rng &rng, int qubits, int layers) {
  Step st;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < qubits; ++q) {
      st.gates.push_back(gates::rz(q, angle(rng)));
      st.gates.push_back(gates::ry(q, angle(rng)));
      st.gates.push_back(gates::rz(q, angle(rng)));
    }
    for (int q = 0; q + 1 < qubits; ++q) {
      if (rng.bit()) st.gates.push_back(gates::cx(q, q + 1));
      else st.gates.push_back(gates::cx(q + 1, q));
    }
  }
  return st;
}

Circuit random_circuit(Rng &rng, const RandomCircuitOptions &opt) {
  Circuit c;
  c.qubits = in_range(rng, opt.min_qubits, opt.max_qubits);
  const int steps = in_range(rng, opt.min_steps, opt.max_steps);
  for (int t = 0; t < steps; ++t) {
    Step st = random_unitary_step(rng, c.qubits, opt.layers);
    st.measure = opt.allow_measurements ? in_range(rng, 0, c.qubits) : 0;
    c.steps.push_back(std::move(st));
  }
  c.validate();
  return c;
}

}  // namespace ncmo
