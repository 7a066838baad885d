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

#include "ncmo/report.h"

#include <cmath>
#include <fstream>

#include "ncmo/error.h"

namespace ncmo {

using nlohmann::ordered_json;

Report::Report(std::string command, ordered_json config) : command_(std::move(command)), config_(std::move(config)) {}

bool Report::check_close(const std::string &name, double value, double expected, double tolerance) {
  const bool ok = std::isfinite(value) && std::abs(value - expected) <= tolerance;
  checks_.push_back({{"name", name}, {"value", value}, {"expected", expected}, {"tolerance", tolerance}, {"pass", ok}});
  if (!ok) ++failures_;
  return ok;
}

bool Report::check_le(const std::string &name, double value, double limit, double tolerance) {
  const bool ok = std::isfinite(value) && value <= limit + tolerance;
  checks_.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"tolerance", tolerance}, {"pass", ok}});
  if (!ok) ++failures_;
  return ok;
}

bool Report::check_true(const std::string &name, bool ok, ordered_json detail) {
  ordered_json c = {{"name", name}, {"value", ok}};
  if (!detail.is_null()) c["detail"] = std::move(detail);
  c["pass"] = ok;
  checks_.push_back(std::move(c));
  if (!ok) ++failures_;
  return ok;
}

ordered_json Report::to_json() const {
  ordered_json j;
  j["tool"] = "ncmo";
  j["version"] = kVersion;
  j["command"] = command_;
  j["config"] = config_;
  j["checks"] = checks_;
  j["results"] = results_;
  j["summary"] = {{"checks", checks_.size()}, {"failures", failures_}};
  if (wall_time_ >= 0.0) j["wall_time_s"] = wall_time_;
  j["status"] = passed() ? "pass" : "fail";
  return j;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

void Report::write(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kParse, "cannot write report to '" + path + "'");
  out << dump();
  if (!out) fail(ErrorCode::kParse, "failed writing report to '" + path + "'");
}

}  // namespace ncmo
