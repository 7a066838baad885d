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

#ifndef NCMO_ERROR_H_
#define NCMO_ERROR_H_

#include <stdexcept>
#include <string>

namespace ncmo {

// Machine-readable failure classes. The CLI maps these onto exit codes.
enum class ErrorCode {
  kStructural,          // malformed value: length mismatch, bad register widths, ...
  kImpossibleCondition, // conditioning on a zero-probability event
  kRetryExhausted,      // a rejection sampler ran out of its retry budget
  kInstanceTooLarge,    // an enumeration or simulation cap was exceeded
  kParse,               // unreadable input (JSON, auxiliary-input encodings)
  kProtocol,            // a machine or adversary broke its interface contract
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

}  // namespace ncmo

#endif  // NCMO_ERROR_H_
