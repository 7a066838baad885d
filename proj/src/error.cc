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

#include "ncmo/error.h"

namespace ncmo {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStructural:
      return "structural";
    case ErrorCode::kImpossibleCondition:
      return "impossible-condition";
    case ErrorCode::kRetryExhausted:
      return "retry-exhausted";
    case ErrorCode::kInstanceTooLarge:
      return "instance-too-large";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kProtocol:
      return "protocol";
  }
  return "unknown";
}

}  // namespace ncmo
