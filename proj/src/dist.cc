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

#include "ncmo/dist.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncmo/error.h"

namespace ncmo {

FiniteDist FiniteDist::from_map(int length, Map probs) {
  if (length < 0) fail(ErrorCode::kStructural, "negative distribution length");
  double total = 0.0;
  for (auto it = probs.begin(); it != probs.end();) {
    if (it->first.size() != length) {
      fail(ErrorCode::kStructural, "support string '" + it->first.str() + "' has length " +
                                       std::to_string(it->first.size()) + ", expected " + std::to_string(length));
    }
    if (!std::isfinite(it->second) || it->second < 0.0) {
      fail(ErrorCode::kStructural, "invalid probability " + std::to_string(it->second) + " for '" +
                                       it->first.str() + "'");
    }
    total += it->second;
    if (it->second == 0.0) {
      it = probs.erase(it);
    } else {
      ++it;
    }
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    fail(ErrorCode::kStructural, "probabilities sum to " + std::to_string(total));
  }
  return FiniteDist(length, std::move(probs));
}

FiniteDist FiniteDist::point(const BitString &s) { return FiniteDist(s.size(), Map{{s, 1.0}}); }

FiniteDist FiniteDist::uniform(int length) {
  if (length < 0 || length > 24) fail(ErrorCode::kInstanceTooLarge, "uniform over 2^" + std::to_string(length));
  Map m;
  const std::uint64_t n = std::uint64_t{1} << length;
  const double p = 1.0 / static_cast<double>(n);
  for (std::uint64_t v = 0; v < n; ++v) m.emplace_hint(m.end(), BitString::from_uint(v, length), p);
  return FiniteDist(length, std::move(m));
}

FiniteDist FiniteDist::uniform_over(std::span<const BitString> support) {
  if (support.empty()) fail(ErrorCode::kStructural, "uniform_over an empty support");
  Map m;
  const double p = 1.0 / static_cast<double>(support.size());
  for (const auto &s : support) {
    if (!m.emplace(s, p).second) fail(ErrorCode::kStructural, "duplicate support string '" + s.str() + "'");
  }
  return from_map(support.front().size(), std::move(m));
}

double FiniteDist::prob(const BitString &s) const {
  auto it = probs_.find(s);
  return it == probs_.end() ? 0.0 : it->second;
}

double FiniteDist::total() const {
  double t = 0.0;
  for (const auto &[s, p] : probs_) t += p;
  return t;
}

void DistBuilder::add(const BitString &s, double p) {
  if (s.size() != length_) {
    fail(ErrorCode::kStructural,
         "builder expects length " + std::to_string(length_) + ", got '" + s.str() + "'");
  }
  if (p == 0.0) return;
  mass_[s] += p;
}

void DistBuilder::add_scaled(const FiniteDist &d, double weight) {
  for (const auto &[s, p] : d) add(s, weight * p);
}

double DistBuilder::total() const {
  double t = 0.0;
  for (const auto &[s, p] : mass_) t += p;
  return t;
}

double sd(const FiniteDist &p, const FiniteDist &q) {
  if (p.length() != q.length()) {
    fail(ErrorCode::kStructural, "sd between lengths " + std::to_string(p.length()) + " and " +
                                     std::to_string(q.length()));
  }
  double acc = 0.0;
  auto a = p.begin();
  auto b = q.begin();
  while (a != p.end() || b != q.end()) {
    if (b == q.end() || (a != p.end() && a->first < b->first)) {
      acc += a->second;
      ++a;
    } else if (a == p.end() || b->first < a->first) {
      acc += b->second;
      ++b;
    } else {
      acc += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

namespace {

// Strings with a given prefix form one contiguous run in lexicographic order.
template <typename F>
void for_each_with_prefix(const FiniteDist &d, const BitString &prefix, F &&f) {
  for (auto it = d.probs().lower_bound(prefix); it != d.end() && it->first.starts_with(prefix); ++it) {
    f(it->first, it->second);
  }
}

}  // namespace

double prefix_mass(const FiniteDist &d, const BitString &prefix) {
  if (prefix.size() > d.length()) {
    fail(ErrorCode::kStructural, "prefix longer than the distribution's strings");
  }
  double m = 0.0;
  for_each_with_prefix(d, prefix, [&](const BitString &, double p) { m += p; });
  return m;
}

FiniteDist condition(const FiniteDist &d, const BitString &prefix) {
  const double mass = prefix_mass(d, prefix);
  if (mass <= 0.0) fail(ErrorCode::kImpossibleCondition, "prefix '" + prefix.str() + "' has zero mass");
  FiniteDist::Map out;
  const int k = prefix.size();
  for_each_with_prefix(d, prefix, [&](const BitString &s, double p) {
    out.emplace_hint(out.end(), s.suffix_from(k), p / mass);
  });
  return FiniteDist::from_map(d.length() - k, std::move(out));
}

FiniteDist push_forward(const FiniteDist &d, const std::function<BitString(const BitString &)> &f) {
  FiniteDist::Map out;
  int length = -1;
  for (const auto &[s, p] : d) {
    BitString image = f(s);
    if (length < 0) {
      length = image.size();
    } else if (image.size() != length) {
      fail(ErrorCode::kStructural, "push_forward map produced inconsistent output lengths");
    }
    out[std::move(image)] += p;
  }
  if (length < 0) length = 0;
  return FiniteDist::from_map(length, std::move(out));
}

FiniteDist marginal(const FiniteDist &d, int pos, int len) {
  return push_forward(d, [pos, len](const BitString &s) { return s.substr(pos, len); });
}

FiniteDist product(const FiniteDist &a, const FiniteDist &b) {
  FiniteDist::Map out;
  for (const auto &[sa, pa] : a) {
    for (const auto &[sb, pb] : b) out.emplace_hint(out.end(), sa + sb, pa * pb);
  }
  return FiniteDist::from_map(a.length() + b.length(), std::move(out));
}

BitString sample(const FiniteDist &d, Rng &rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto &[s, p] : d) {
    acc += p;
    if (u < acc) return s;
  }
  // Only reachable through rounding when the total is slightly below one.
  return std::prev(d.end())->first;
}

DistSampler::DistSampler(const FiniteDist &d) {
  keys_.reserve(d.support_size());
  cumulative_.reserve(d.support_size());
  double acc = 0.0;
  for (const auto &[s, p] : d) {
    acc += p;
    keys_.push_back(s);
    cumulative_.push_back(acc);
  }
}

const BitString &DistSampler::operator()(Rng &rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return keys_.back();
  return keys_[static_cast<std::size_t>(it - cumulative_.begin())];
}

void EmpiricalDist::add(const BitString &s, std::uint64_t count) {
  if (length_ < 0) {
    length_ = s.size();
  } else if (s.size() != length_) {
    fail(ErrorCode::kStructural, "empirical samples of mixed lengths");
  }
  counts_[s] += count;
  shots_ += count;
}

FiniteDist EmpiricalDist::normalized() const {
  if (shots_ == 0) fail(ErrorCode::kStructural, "empirical distribution with no samples");
  FiniteDist::Map m;
  for (const auto &[s, c] : counts_) {
    m.emplace_hint(m.end(), s, static_cast<double>(c) / static_cast<double>(shots_));
  }
  return FiniteDist::from_map(length_, std::move(m));
}

EmpiricalDist empirical(std::span<const BitString> samples) {
  if (samples.empty()) fail(ErrorCode::kStructural, "empirical() of an empty sample");
  EmpiricalDist e;
  for (const auto &s : samples) e.add(s);
  return e;
}

nlohmann::ordered_json to_json(const FiniteDist &d) {
  nlohmann::ordered_json probs = nlohmann::ordered_json::object();
  for (const auto &[s, p] : d) probs[s.str()] = p;
  nlohmann::ordered_json j;
  j["length"] = d.length();
  j["probs"] = std::move(probs);
  return j;
}

FiniteDist dist_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("length") || !j.contains("probs") || !j["length"].is_number_integer() ||
      !j["probs"].is_object()) {
    fail(ErrorCode::kParse, "distribution JSON needs integer 'length' and object 'probs'");
  }
  FiniteDist::Map m;
  for (const auto &[key, value] : j["probs"].items()) {
    if (!value.is_number()) fail(ErrorCode::kParse, "probability for '" + key + "' is not a number");
    m[BitString::parse(key)] += value.get<double>();
  }
  return FiniteDist::from_map(j["length"].get<int>(), std::move(m));
}

}  // namespace ncmo
