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

#ifndef NCMO_RANDOM_CIRCUIT_H_
#define NCMO_RANDOM_CIRCUIT_H_

#include "ncmo/qsim.h"
#include "ncmo/rng.h"

namespace ncmo {

struct RandomCircuitOptions {
  int min_qubits = 1;
  int max_qubits = 4;
  int min_steps = 1;
  int max_steps = 3;
  int layers = 2;                 // rotation+entangler layers per step
  bool allow_measurements = true;  // false keeps every m_t = 0
};

// A seeded random circuit: per step, `layers` rounds of random Euler
// rotations on every qubit followed by a random chain of CNOTs, and a
// uniformly random measurement width m_t ∈ [0, ℓ].
Circuit random_circuit(Rng &rng, const RandomCircuitOptions &opt = {});

// A step of random rotations and entanglers on `qubits` qubits, no measurement.
Step random_unitary_step(Rng &rng, int qubits, int layers);

}  // namespace ncmo

#endif  // NCMO_RANDOM_CIRCUIT_H_
