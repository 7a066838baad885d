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

#include "ncmo/mac.h"

#include <map>
#include <memory>

#include "ncmo/error.h"

namespace ncmo {

namespace {

BitString random_bits(Rng &rng, int n) { return BitString::from_uint(rng.below(std::uint64_t{1} << n), n); }

}  // namespace

ToyMac::ToyMac(MacParams p) : p_(p) {
  if (p_.n < 1 || p_.n > 6) fail(ErrorCode::kInstanceTooLarge, "toy MAC supports 1 ≤ n ≤ 6");
  if (p_.lm < 1 || p_.lm > p_.n) fail(ErrorCode::kStructural, "toy MAC needs 1 ≤ message length ≤ n");
  if (p_.pp_bits < 0 || p_.pp_bits > 8) fail(ErrorCode::kInstanceTooLarge, "toy MAC supports at most 8 pp bits");
  const std::uint32_t size = std::uint32_t{1} << (2 * p_.n);
  const Rng root(p_.seed);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << p_.pp_bits); ++v) {
    Rng rng = root.fork(v);
    std::vector<std::uint32_t> perm(size), inv(size);
    for (std::uint32_t i = 0; i < size; ++i) perm[i] = i;
    for (std::uint32_t i = size - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    for (std::uint32_t i = 0; i < size; ++i) inv[perm[i]] = i;
    perm_.push_back(std::move(perm));
    inv_.push_back(std::move(inv));
  }
}

FiniteDist ToyMac::setup_law() const { return FiniteDist::uniform(p_.pp_bits); }

BitString ToyMac::setup(Rng &rng) const {
  return p_.pp_bits == 0 ? BitString() : random_bits(rng, p_.pp_bits);
}

const std::vector<std::uint32_t> &ToyMac::perm(const BitString &pp) const {
  if (pp.size() != p_.pp_bits) fail(ErrorCode::kStructural, "pp has the wrong length");
  return perm_[pp.empty() ? 0 : static_cast<std::size_t>(pp.to_uint())];
}

const std::vector<std::uint32_t> &ToyMac::inverse(const BitString &pp) const {
  if (pp.size() != p_.pp_bits) fail(ErrorCode::kStructural, "pp has the wrong length");
  return inv_[pp.empty() ? 0 : static_cast<std::size_t>(pp.to_uint())];
}

BitString ToyMac::evaluate(const BitString &pp, const BitString &x, const BitString &theta) const {
  if (x.size() != p_.n || theta.size() != p_.n) fail(ErrorCode::kStructural, "x and θ must have n bits");
  return BitString::from_uint(perm(pp)[static_cast<std::size_t>((x + theta).to_uint())], 2 * p_.n);
}

std::pair<BitString, BitString> ToyMac::invert(const BitString &pp, const BitString &vk) const {
  if (vk.size() != 2 * p_.n) fail(ErrorCode::kStructural, "vk must have 2n bits");
  const BitString pre = BitString::from_uint(inverse(pp)[static_cast<std::size_t>(vk.to_uint())], 2 * p_.n);
  return {pre.prefix(p_.n), pre.suffix_from(p_.n)};
}

StateVector conjugate_coding_state(const BitString &x, const BitString &theta) {
  StateVector s = StateVector::basis(x);
  for (int i = 0; i < theta.size(); ++i) {
    if (theta[i]) apply_gate(s, gates::h(i));
  }
  return s;
}

ToyMac::Keys ToyMac::gen(const BitString &pp, Rng &rng) const {
  Keys k;
  k.x = random_bits(rng, p_.n);
  k.theta = random_bits(rng, p_.n);
  k.vk = evaluate(pp, k.x, k.theta);
  k.sigk = conjugate_coding_state(k.x, k.theta);
  return k;
}

BitString ToyMac::sign(const StateVector &sigk, const BitString &m, Rng &rng) const {
  if (m.size() != p_.lm) fail(ErrorCode::kStructural, "message has the wrong length");
  StateVector s = sigk;
  // An X-basis measurement is H followed by a Z-basis measurement.
  for (int i = 0; i < p_.n; ++i) {
    if (basis(m, i)) apply_gate(s, gates::h(i));
  }
  return sample_readout(s, rng);
}

bool ToyMac::verify(const BitString &pp, const BitString &vk, const BitString &m, const BitString &sigma) const {
  if (vk.size() != 2 * p_.n || m.size() != p_.lm || sigma.size() != p_.n) return false;
  const auto [x, theta] = invert(pp, vk);
  for (int i = 0; i < p_.n; ++i) {
    if (basis(m, i) == theta[i] && sigma[i] != x[i]) return false;
  }
  return true;
}

FiniteDist ToyMac::signature_law(const BitString &x, const BitString &theta, const BitString &m) const {
  FiniteDist law;
  for (int i = 0; i < p_.n; ++i) {
    const FiniteDist bit = basis(m, i) == theta[i] ? FiniteDist::point(BitString::from_uint(x[i], 1))
                                                   : FiniteDist::uniform(1);
    law = product(law, bit);
  }
  return law;
}

namespace {

// Σ_{x,θ} 4^{-n} 2^{-lm} · δ_{R(x‖θ)} ⊗ δ_m ⊗ σ-law.
FiniteDist mac_samp_law(const ToyMac &mac, const BitString &pp) {
  const auto &p = mac.params();
  const double w = 1.0 / static_cast<double>(std::uint64_t{1} << (2 * p.n + p.lm));
  FiniteDist::Map m;
  for (std::uint64_t xt = 0; xt < (std::uint64_t{1} << (2 * p.n)); ++xt) {
    const BitString both = BitString::from_uint(xt, 2 * p.n);
    const BitString x = both.prefix(p.n), theta = both.suffix_from(p.n);
    const BitString vk = mac.evaluate(pp, x, theta);
    for (std::uint64_t mv = 0; mv < (std::uint64_t{1} << p.lm); ++mv) {
      const BitString msg = BitString::from_uint(mv, p.lm);
      for (const auto &[sigma, q] : mac.signature_law(x, theta, msg)) m[vk + msg + sigma] += w * q;
    }
  }
  return FiniteDist::from_map(mac.vk_length() + mac.ans_length(), std::move(m));
}

// Gen's posterior: vk ↦ (Pr[vk], law of (m, σ) given vk).
std::map<BitString, std::pair<double, FiniteDist>> posterior_answers(const ToyMac &mac, const BitString &pp) {
  const auto &p = mac.params();
  const double w = 1.0 / static_cast<double>(std::uint64_t{1} << (2 * p.n));
  std::map<BitString, std::pair<double, FiniteDist::Map>> acc;
  for (std::uint64_t xt = 0; xt < (std::uint64_t{1} << (2 * p.n)); ++xt) {
    const BitString both = BitString::from_uint(xt, 2 * p.n);
    const BitString x = both.prefix(p.n), theta = both.suffix_from(p.n);
    const BitString vk = mac.evaluate(pp, x, theta);
    auto it = acc.try_emplace(vk).first;
    it->second.first += w;
    const double wm = w / static_cast<double>(std::uint64_t{1} << p.lm);
    for (std::uint64_t mv = 0; mv < (std::uint64_t{1} << p.lm); ++mv) {
      const BitString msg = BitString::from_uint(mv, p.lm);
      for (const auto &[sigma, q] : mac.signature_law(x, theta, msg)) it->second.second[msg + sigma] += wm * q;
    }
  }
  std::map<BitString, std::pair<double, FiniteDist>> out;
  for (auto &[vk, entry] : acc) {
    for (auto &[a, q] : entry.second) q /= entry.first;
    out.emplace(vk, std::make_pair(entry.first, FiniteDist::from_map(mac.ans_length(), std::move(entry.second))));
  }
  return out;
}

// V² − Σ_m V_m² for one vk, given the answer law.
double pair_win(const ToyMac &mac, const BitString &pp, const BitString &vk, const FiniteDist &answers) {
  const int lm = mac.params().lm;
  std::map<BitString, double> valid;
  double total = 0.0;
  for (const auto &[a, p] : answers) {
    const BitString m = a.prefix(lm);
    if (!mac.verify(pp, vk, m, a.suffix_from(lm))) continue;
    valid[m] += p;
    total += p;
  }
  double same = 0.0;
  for (const auto &[m, v] : valid) same += v * v;
  return total * total - same;
}

}  // namespace

DcrScheme mac_to_dcrpuzz(const ToyMac &mac) {
  DcrScheme s;
  s.name = "mac";
  s.pp_len = mac.params().pp_bits;
  s.puzz_len = mac.vk_length();
  s.ans_len = mac.ans_length();
  s.setup = mac.setup_law();
  auto laws = std::make_shared<std::map<BitString, FiniteDist>>();
  for (const auto &[pp, p] : s.setup) laws->emplace(pp, mac_samp_law(mac, pp));
  s.samp = [laws](const BitString &pp) {
    auto it = laws->find(pp);
    if (it == laws->end()) fail(ErrorCode::kStructural, "pp outside the setup support");
    return it->second;
  };
  if (s.puzz_len + s.ans_len <= kMaxQubits) {
    auto circuits = std::make_shared<std::map<BitString, Circuit>>();
    for (const auto &[pp, law] : *laws) circuits->emplace(pp, purify(law));
    s.vpp = [circuits](const BitString &pp) { return circuits->at(pp); };
  }
  return s;
}

bool mac_forgery_wins(const ToyMac &mac, const BitString &pp, const MacForgery &f) {
  return f.m0 != f.m1 && mac.verify(pp, f.vk, f.m0, f.sigma0) && mac.verify(pp, f.vk, f.m1, f.sigma1);
}

MacForgery forgery_from_triple(const ToyMac &mac, const BitString &t) {
  const int v = mac.vk_length(), lm = mac.params().lm, n = mac.params().n;
  if (t.size() != v + 2 * (lm + n)) fail(ErrorCode::kStructural, "forgery has the wrong width");
  return {t.prefix(v), t.substr(v, lm), t.substr(v + lm, n), t.substr(v + lm + n, lm), t.suffix_from(v + 2 * lm + n)};
}

double mac_win_exact(const ToyMac &mac, const CollisionSource &source) {
  double total = 0.0;
  for (const auto &[pp, p] : mac.setup_law()) {
    for (const auto &[t, q] : source(pp)) {
      if (mac_forgery_wins(mac, pp, forgery_from_triple(mac, t))) total += p * q;
    }
  }
  return total;
}

double mac_col_win_exact(const ToyMac &mac, const DcrScheme &scheme) {
  double total = 0.0;
  for (const auto &[pp, p] : scheme.setup) {
    const FiniteDist law = scheme.samp(pp);
    for (const auto &[vk, pv] : marginal(law, 0, scheme.puzz_len)) {
      total += p * pv * pair_win(mac, pp, vk, condition(law, vk));
    }
  }
  return total;
}

MacForgery algorithm_c_mac(const ToyMac &mac, const BitString &pp, Rng &rng, std::uint64_t budget,
                           std::uint64_t *retries) {
  const int lm = mac.params().lm;
  const ToyMac::Keys first = mac.gen(pp, rng);
  MacForgery f;
  f.vk = first.vk;
  f.m0 = random_bits(rng, lm);
  f.sigma0 = mac.sign(first.sigk, f.m0, rng);
  for (std::uint64_t k = 1; k <= budget; ++k) {
    const ToyMac::Keys again = mac.gen(pp, rng);
    if (again.vk != f.vk) continue;
    if (retries) *retries = k;
    f.m1 = random_bits(rng, lm);
    f.sigma1 = mac.sign(again.sigk, f.m1, rng);
    return f;
  }
  fail(ErrorCode::kRetryExhausted, "Gen did not reproduce vk within " + std::to_string(budget) + " runs");
}

FiniteDist algorithm_c_mac_law(const ToyMac &mac, const BitString &pp) {
  FiniteDist::Map m;
  for (const auto &[vk, entry] : posterior_answers(mac, pp)) {
    const auto &[pv, answers] = entry;
    for (const auto &[a, p] : answers) {
      for (const auto &[a2, q] : answers) m.emplace(vk + a + a2, pv * p * q);
    }
  }
  return FiniteDist::from_map(mac.vk_length() + 2 * mac.ans_length(), std::move(m));
}

CollisionSourceKind collision_source_from_string(const std::string &s) {
  if (s == "col") return CollisionSourceKind::kExactCol;
  if (s == "oracle") return CollisionSourceKind::kOracleBacked;
  if (s == "duplicate") return CollisionSourceKind::kHonestDuplicate;
  if (s == "algorithm-c") return CollisionSourceKind::kAlgorithmC;
  fail(ErrorCode::kParse, "unknown collision source '" + s + "' (col|oracle|duplicate|algorithm-c)");
}

std::string to_string(CollisionSourceKind k) {
  switch (k) {
    case CollisionSourceKind::kExactCol: return "col";
    case CollisionSourceKind::kOracleBacked: return "oracle";
    case CollisionSourceKind::kHonestDuplicate: return "duplicate";
    case CollisionSourceKind::kAlgorithmC: return "algorithm-c";
  }
  return "?";
}

GameReport mac_break_via_collision(const ToyMac &mac, CollisionSourceKind kind, std::uint64_t trials,
                                   std::uint64_t seed) {
  const DcrScheme scheme = mac_to_dcrpuzz(mac);
  GameReport r;
  r.game = "one-shot-mac-forgery/" + to_string(kind);
  r.trials = trials;
  switch (kind) {
    case CollisionSourceKind::kExactCol:
      r.exact = mac_col_win_exact(mac, scheme);
      break;
    case CollisionSourceKind::kOracleBacked:
      if (!scheme.circuit_backed()) {
        fail(ErrorCode::kInstanceTooLarge, "the MAC's sampler is too wide for an oracle-backed collision finder");
      }
      r.exact = mac_win_exact(mac, [&](const BitString &pp) { return dpp_oracle_law(scheme, pp); });
      break;
    case CollisionSourceKind::kHonestDuplicate:
      r.exact = mac_win_exact(mac, [&](const BitString &pp) {
        return push_forward(scheme.samp(pp), [&](const BitString &s) { return s + s.suffix_from(scheme.puzz_len); });
      });
      break;
    case CollisionSourceKind::kAlgorithmC: {
      double total = 0.0;
      for (const auto &[pp, p] : mac.setup_law()) {
        for (const auto &[vk, entry] : posterior_answers(mac, pp)) {
          total += p * entry.first * pair_win(mac, pp, vk, entry.second);
        }
      }
      r.exact = total;
      break;
    }
  }
  Rng rng(seed);
  CollisionFinder finder(scheme, kind == CollisionSourceKind::kOracleBacked ? CollisionFinder::Kind::kOracle
                                                                             : CollisionFinder::Kind::kCol);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const BitString pp = mac.setup(rng);
    MacForgery f;
    switch (kind) {
      case CollisionSourceKind::kExactCol:
      case CollisionSourceKind::kOracleBacked:
        f = forgery_from_triple(mac, finder(pp, rng).concat());
        break;
      case CollisionSourceKind::kHonestDuplicate: {
        const ToyMac::Keys k = mac.gen(pp, rng);
        const BitString m = random_bits(rng, mac.params().lm);
        const BitString sigma = mac.sign(k.sigk, m, rng);
        f = {k.vk, m, sigma, m, sigma};
        break;
      }
      case CollisionSourceKind::kAlgorithmC:
        f = algorithm_c_mac(mac, pp, rng);
        break;
    }
    if (mac_forgery_wins(mac, pp, f)) ++r.successes;
  }
  return r;
}

double mac_correctness_exact(const ToyMac &mac) {
  const auto &p = mac.params();
  double total = 0.0;
  const double w = 1.0 / static_cast<double>(std::uint64_t{1} << (2 * p.n + p.lm));
  for (const auto &[pp, pp_prob] : mac.setup_law()) {
    for (std::uint64_t xt = 0; xt < (std::uint64_t{1} << (2 * p.n)); ++xt) {
      const BitString both = BitString::from_uint(xt, 2 * p.n);
      const BitString x = both.prefix(p.n), theta = both.suffix_from(p.n);
      const BitString vk = mac.evaluate(pp, x, theta);
      for (std::uint64_t mv = 0; mv < (std::uint64_t{1} << p.lm); ++mv) {
        const BitString m = BitString::from_uint(mv, p.lm);
        for (const auto &[sigma, q] : mac.signature_law(x, theta, m)) {
          if (mac.verify(pp, vk, m, sigma)) total += pp_prob * w * q;
        }
      }
    }
  }
  return total;
}

}  // namespace ncmo
