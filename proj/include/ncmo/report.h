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

#ifndef NCMO_REPORT_H_
#define NCMO_REPORT_H_

#include <string>

#include "json.hpp"

namespace ncmo {

inline constexpr const char *kVersion = "0.3.0";

// JSON report with named checks. Everything except the optional wall time is
// a function of the configuration, so equal configs give equal bytes.
class Report {
 public:
  Report(std::string command, nlohmann::ordered_json config);

  // |value − expected| ≤ tolerance.
  bool check_close(const std::string &name, double value, double expected, double tolerance);
  // value ≤ limit + tolerance.
  bool check_le(const std::string &name, double value, double limit, double tolerance = 0.0);
  bool check_true(const std::string &name, bool ok, nlohmann::ordered_json detail = nullptr);

  nlohmann::ordered_json &results() { return results_; }
  bool passed() const { return failures_ == 0; }
  int failures() const { return failures_; }
  int checks() const { return static_cast<int>(checks_.size()); }
  void set_wall_time(double seconds) { wall_time_ = seconds; }

  nlohmann::ordered_json to_json() const;
  std::string dump() const;
  // Writes dump() to `path`; kParse if the file cannot be written.
  void write(const std::string &path) const;

 private:
  std::string command_;
  nlohmann::ordered_json config_;
  nlohmann::ordered_json checks_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json results_ = nlohmann::ordered_json::object();
  int failures_ = 0;
  double wall_time_ = -1.0;
};

}  // namespace ncmo

#endif  // NCMO_REPORT_H_
