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

#ifndef NCMO_BITSTRING_H_
#define NCMO_BITSTRING_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace ncmo {

// An ordered sequence of bits, stored as ASCII '0'/'1'.
//
// Ordering is lexicographic, which for equal lengths coincides with numeric
// order when the first bit is read as the most significant one. All
// distribution containers rely on this to iterate in a canonical order.
class BitString {
 public:
  BitString() = default;

  // Throws kParse if `text` contains anything but '0' and '1'.
  static BitString parse(std::string_view text);
  // The low `width` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, int width);
  static BitString zeros(int width);
  static BitString ones(int width);

  int size() const { return static_cast<int>(bits_.size()); }
  bool empty() const { return bits_.empty(); }
  bool operator[](int i) const { return bits_[static_cast<std::size_t>(i)] == '1'; }
  void set(int i, bool bit) { bits_[static_cast<std::size_t>(i)] = bit ? '1' : '0'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  BitString &append(const BitString &other) {
    bits_ += other.bits_;
    return *this;
  }

  // Bits [pos, pos + len). Throws kStructural when out of range.
  BitString substr(int pos, int len) const;
  BitString prefix(int len) const { return substr(0, len); }
  BitString suffix_from(int pos) const { return substr(pos, size() - pos); }
  bool starts_with(const BitString &p) const { return bits_.starts_with(p.bits_); }

  // Interprets the string as an unsigned integer, first bit most significant.
  // Throws kStructural for strings longer than 64 bits.
  std::uint64_t to_uint() const;
  int popcount() const;

  const std::string &str() const { return bits_; }

  friend BitString operator+(BitString a, const BitString &b) { return a.append(b); }
  friend bool operator==(const BitString &, const BitString &) = default;
  friend std::strong_ordering operator<=>(const BitString &a, const BitString &b) {
    return a.bits_.compare(b.bits_) <=> 0;
  }
  friend std::ostream &operator<<(std::ostream &os, const BitString &b) {
    return os << (b.empty() ? std::string("ε") : b.bits_);
  }

 private:
  explicit BitString(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

}  // namespace ncmo

template <>
struct std::hash<ncmo::BitString> {
  std::size_t operator()(const ncmo::BitString &b) const noexcept {
    return std::hash<std::string>{}(b.str());
  }
};

#endif  // NCMO_BITSTRING_H_
