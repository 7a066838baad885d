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

#ifndef NCMO_SUITES_H_
#define NCMO_SUITES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ncmo/oracle.h"
#include "ncmo/report.h"
#include "ncmo/session.h"

namespace ncmo {

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  std::uint64_t shots = 100'000;  // oracle samples per circuit
  std::uint64_t trials = 10'000;  // game trials
  Limits limits;
};

const std::vector<std::string> &suite_names();

// Appends the checks of one suite ("all" runs every suite) to `report`.
// kParse on an unknown name.
void run_suite(const std::string &name, const SuiteOptions &opt, Report &report);

void suite_oracle_core(const SuiteOptions &opt, Report &report);
void suite_non_collapse(const SuiteOptions &opt, Report &report);
void suite_hybrid_identities(const SuiteOptions &opt, Report &report);
void suite_col_oracle(const SuiteOptions &opt, Report &report);
void suite_reductions(const SuiteOptions &opt, Report &report);
void suite_adaptive(const SuiteOptions &opt, Report &report);
void suite_preimage(const SuiteOptions &opt, Report &report);

// Shared fixtures.
Circuit bell_circuit(int first_measure);
// A deterministic 2-query machine on 2-qubit circuits whose second circuit
// depends on the first answer.
const BaseMachine &two_query_machine();

}  // namespace ncmo

#endif  // NCMO_SUITES_H_
