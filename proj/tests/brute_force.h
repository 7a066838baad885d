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

// Test-local reference oracle. Deliberately shares no simulation code with
// the library: gates are applied by index arithmetic on raw amplitude
// vectors and every law is a plain std::map keyed by '0'/'1' strings.

#ifndef NCMO_TESTS_BRUTE_FORCE_H_
#define NCMO_TESTS_BRUTE_FORCE_H_

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncmo/dist.h"
#include "ncmo/qsim.h"

namespace bf {

using Amps = std::vector<std::complex<double>>;
using Law = std::map<std::string, double>;

// Qubit q is bit (n − 1 − q) of the basis index.
inline int bit_of(std::uint64_t i, int n, int q) { return static_cast<int>((i >> (n - 1 - q)) & 1); }
inline std::uint64_t with_bit(std::uint64_t i, int n, int q, int v) {
  const std::uint64_t mask = std::uint64_t{1} << (n - 1 - q);
  return v ? (i | mask) : (i & ~mask);
}

inline std::uint64_t gather(std::uint64_t i, int n, const std::vector<int> &qs) {
  std::uint64_t v = 0;
  for (int q : qs) v = (v << 1) | static_cast<std::uint64_t>(bit_of(i, n, q));
  return v;
}

inline std::uint64_t scatter(std::uint64_t i, int n, const std::vector<int> &qs, std::uint64_t v) {
  const int k = static_cast<int>(qs.size());
  for (int j = 0; j < k; ++j) i = with_bit(i, n, qs[static_cast<std::size_t>(j)], static_cast<int>((v >> (k - 1 - j)) & 1));
  return i;
}

inline void apply(Amps &a, int n, const ncmo::Gate &g) {
  Amps out(a.size(), 0.0);
  if (g.kind == ncmo::GateKind::kDense) {
    const std::uint64_t dim = std::uint64_t{1} << g.targets.size();
    for (std::uint64_t i = 0; i < a.size(); ++i) {
      const std::uint64_t col = gather(i, n, g.targets);
      for (std::uint64_t row = 0; row < dim; ++row) {
        out[scatter(i, n, g.targets, row)] += g.matrix[row * dim + col] * a[i];
      }
    }
  } else if (g.kind == ncmo::GateKind::kPermutation) {
    for (std::uint64_t i = 0; i < a.size(); ++i) {
      const std::uint64_t in = gather(i, n, g.inputs);
      const std::uint64_t y = gather(i, n, g.targets) ^ g.table[in];
      out[scatter(i, n, g.targets, y)] += a[i];
    }
  } else {
    throw std::runtime_error("reference simulator does not model prepare gates");
  }
  a = std::move(out);
}

inline std::string bits(std::uint64_t v, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int j = 0; j < width; ++j) s[static_cast<std::size_t>(j)] = ((v >> (width - 1 - j)) & 1) ? '1' : '0';
  return s;
}

inline Law readout(const Amps &a, int n) {
  Law out;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    const double p = std::norm(a[i]);
    if (p > 1e-15) out[bits(i, n)] += p;
  }
  return out;
}

inline Law product(const Law &x, const Law &y) {
  Law out;
  for (const auto &[a, p] : x) {
    for (const auto &[b, q] : y) out[a + b] += p * q;
  }
  return out;
}

inline Law marginal(const Law &x, std::size_t pos, std::size_t len) {
  Law out;
  for (const auto &[a, p] : x) out[a.substr(pos, len)] += p;
  return out;
}

inline double sd(const Law &x, const Law &y) {
  double total = 0.0;
  for (const auto &[a, p] : x) {
    auto it = y.find(a);
    total += std::abs(p - (it == y.end() ? 0.0 : it->second));
  }
  for (const auto &[b, q] : y) {
    if (!x.count(b)) total += q;
  }
  return 0.5 * total;
}

inline Law from(const ncmo::FiniteDist &d) {
  Law out;
  for (const auto &[s, p] : d) out[s.str()] += p;
  return out;
}

// One collapsing path prefix: outcomes u_1..u_t and the state ψ_t after them.
struct Node {
  int depth = 0;
  double prob = 1.0;
  std::vector<std::string> outcomes;
  std::vector<Amps> states;  // states[t-1] = ψ_t
};

// Every node of positive probability at every depth 1..T.
inline std::vector<Node> enumerate(const ncmo::Circuit &c) {
  const int n = c.qubits;
  std::vector<Node> out;
  std::function<void(const Node &, Amps)> rec = [&](const Node &at, Amps a) {
    const int t = at.depth;
    if (t == c.T()) return;
    const ncmo::Step &step = c.steps[static_cast<std::size_t>(t)];
    for (const auto &g : step.gates) apply(a, n, g);
    const int m = step.measure;
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << m); ++u) {
      Amps proj(a.size(), 0.0);
      double p = 0.0;
      for (std::uint64_t i = 0; i < a.size(); ++i) {
        if ((i >> (n - m)) == u || m == 0) {
          proj[i] = a[i];
          p += std::norm(a[i]);
        }
      }
      if (p < 1e-14) continue;
      for (auto &z : proj) z /= std::sqrt(p);
      Node next = at;
      next.depth = t + 1;
      next.prob = at.prob * p;
      next.outcomes.push_back(bits(u, m));
      next.states.push_back(proj);
      out.push_back(next);
      rec(next, proj);
    }
  };
  Amps zero(std::size_t{1} << n, 0.0);
  zero[0] = 1.0;
  rec(Node{}, zero);
  return out;
}

inline ncmo::Transcript transcript(const Node &node, int t) {
  ncmo::Transcript tau;
  for (int s = 0; s < t; ++s) tau.outcomes.push_back(ncmo::BitString::parse(node.outcomes[static_cast<std::size_t>(s)]));
  return tau;
}

// Law of the k-th hybrid: reads 1..k genuine, later reads u_t‖guess(t, node).
// With k = T this is the oracle's law.
inline Law hybrid(const ncmo::Circuit &c, int k, const std::function<Law(int t, const Node &)> &guess) {
  Law total;
  for (const Node &leaf : enumerate(c)) {
    if (leaf.depth != c.T()) continue;
    Law joint{{"", 1.0}};
    for (int t = 1; t <= c.T(); ++t) {
      Law read;
      if (t <= k) {
        read = readout(leaf.states[static_cast<std::size_t>(t - 1)], c.qubits);
      } else {
        for (const auto &[w, p] : guess(t, leaf)) read[leaf.outcomes[static_cast<std::size_t>(t - 1)] + w] += p;
      }
      joint = product(joint, read);
    }
    for (const auto &[v, p] : joint) total[v] += leaf.prob * p;
  }
  return total;
}

inline Law oracle(const ncmo::Circuit &c) {
  return hybrid(c, c.T(), [](int, const Node &) -> Law { throw std::logic_error("unused"); });
}

// Σ_{τ_t} Pr[τ_t] · sd(w_t | τ_t, guess(t, τ_t)).
inline double single_step_sd(const ncmo::Circuit &c, int t, const std::function<Law(int, const Node &)> &guess) {
  double total = 0.0;
  const int m = c.steps[static_cast<std::size_t>(t - 1)].measure;
  for (const Node &node : enumerate(c)) {
    if (node.depth != t) continue;
    const Law w = marginal(readout(node.states.back(), c.qubits), static_cast<std::size_t>(m),
                           static_cast<std::size_t>(c.qubits - m));
    total += node.prob * sd(w, guess(t, node));
  }
  return total;
}

// Col over puzz‖ans‖ans′ from a law over puzz‖ans.
inline Law col(const Law &samp, std::size_t puzz_len) {
  std::map<std::string, Law> by_puzz;
  std::map<std::string, double> mass;
  for (const auto &[s, p] : samp) {
    by_puzz[s.substr(0, puzz_len)][s.substr(puzz_len)] += p;
    mass[s.substr(0, puzz_len)] += p;
  }
  Law out;
  for (const auto &[puzz, answers] : by_puzz) {
    const double z = mass[puzz];
    for (const auto &[a, p] : answers) {
      for (const auto &[b, q] : answers) out[puzz + a + b] += z * (p / z) * (q / z);
    }
  }
  return out;
}

// Readout of V|0…0⟩ for a measurement-free circuit.
inline Law unitary_readout(const ncmo::Circuit &v) {
  Amps a(std::size_t{1} << v.qubits, 0.0);
  a[0] = 1.0;
  for (const auto &s : v.steps) {
    for (const auto &g : s.gates) apply(a, v.qubits, g);
  }
  return readout(a, v.qubits);
}

}  // namespace bf

#endif  // NCMO_TESTS_BRUTE_FORCE_H_
