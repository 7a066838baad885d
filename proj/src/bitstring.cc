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

#include "ncmo/bitstring.h"

#include <algorithm>

#include "ncmo/error.h"

namespace ncmo {

BitString BitString::parse(std::string_view text) {
  for (char c : text) {
    if (c != '0' && c != '1') {
      fail(ErrorCode::kParse, "not a bit string: '" + std::string(text) + "'");
    }
  }
  return BitString(std::string(text));
}

BitString BitString::from_uint(std::uint64_t value, int width) {
  if (width < 0 || width > 64) {
    fail(ErrorCode::kStructural, "from_uint width out of range: " + std::to_string(width));
  }
  std::string bits(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1u) bits[static_cast<std::size_t>(i)] = '1';
  }
  return BitString(std::move(bits));
}

BitString BitString::zeros(int width) { return BitString(std::string(static_cast<std::size_t>(width), '0')); }

BitString BitString::ones(int width) { return BitString(std::string(static_cast<std::size_t>(width), '1')); }

BitString BitString::substr(int pos, int len) const {
  if (pos < 0 || len < 0 || pos + len > size()) {
    fail(ErrorCode::kStructural, "substr [" + std::to_string(pos) + ", +" + std::to_string(len) +
                                     ") out of range for length " + std::to_string(size()));
  }
  return BitString(bits_.substr(static_cast<std::size_t>(pos), static_cast<std::size_t>(len)));
}

std::uint64_t BitString::to_uint() const {
  if (size() > 64) fail(ErrorCode::kStructural, "to_uint on a string longer than 64 bits");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

int BitString::popcount() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), '1')); }

}  // namespace ncmo
