// Copyright 2026 The zxrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include "zxrl/circuit.hpp"
#include "zxrl/error.hpp"

namespace zxrl {

/// Stabilizer tableau (Aaronson-Gottesman layout) for up to 64 qubits.
/// Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers; each row is a
/// Pauli string stored as x/z bitmasks plus a sign bit.
class Tableau {
 public:
  static constexpr int kMaxQubits = 64;

  explicit Tableau(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits) throw Unsupported("tableau supports 1..64 qubits");
    rows_.resize(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      rows_[i].x = bit(i);
      rows_[n + i].z = bit(i);
    }
  }

  [[nodiscard]] int n_qubits() const { return n_; }

  void h(int q) {
    const auto m = bit(q);
    for (auto& r : rows_) {
      const bool x = r.x & m, z = r.z & m;
      r.sign ^= x && z;
      r.x = (r.x & ~m) | (z ? m : 0);
      r.z = (r.z & ~m) | (x ? m : 0);
    }
  }

  void s(int q) {
    const auto m = bit(q);
    for (auto& r : rows_) {
      const bool x = r.x & m, z = r.z & m;
      r.sign ^= x && z;
      if (x) r.z ^= m;
    }
  }

  void cnot(int c, int t) {
    const auto mc = bit(c), mt = bit(t);
    for (auto& r : rows_) {
      const bool xc = r.x & mc, zc = r.z & mc, xt = r.x & mt, zt = r.z & mt;
      r.sign ^= xc && zt && (xt == zc);
      if (xc) r.x ^= mt;
      if (zt) r.z ^= mc;
    }
  }

  void cz(int a, int b) {
    h(b);
    cnot(a, b);
    h(b);
  }

  /// Conjugates by a Clifford gate; Rz with odd k is rejected.
  void apply(const Gate& g) {
    check(g.q0);
    switch (g.kind) {
      case GateKind::H: h(g.q0); break;
      case GateKind::Rz:
        if (!g.phase.is_clifford()) throw Unsupported("tableau: non-Clifford Rz");
        for (int i = 0; i < g.phase.k() / 2; ++i) s(g.q0);
        break;
      case GateKind::CNOT: check(g.q1); cnot(g.q0, g.q1); break;
      case GateKind::CZ: check(g.q1); cz(g.q0, g.q1); break;
    }
  }

  void apply(const Circuit& c) {
    for (const Gate& g : c.gates) apply(g);
  }

  /// True if every generator is back to +X_i / +Z_i.
  [[nodiscard]] bool is_identity() const {
    for (int i = 0; i < n_; ++i) {
      const Row& d = rows_[i];
      const Row& s = rows_[n_ + i];
      if (d.x != bit(i) || d.z != 0 || d.sign) return false;
      if (s.z != bit(i) || s.x != 0 || s.sign) return false;
    }
    return true;
  }

  /// Image of generator row `r` as (x mask, z mask, sign).
  [[nodiscard]] std::tuple<std::uint64_t, std::uint64_t, bool> row(int r) const {
    return {rows_[r].x, rows_[r].z, rows_[r].sign};
  }

  friend bool operator==(const Tableau&, const Tableau&) = default;

 private:
  struct Row {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    bool sign = false;
    friend bool operator==(const Row&, const Row&) = default;
  };

  static std::uint64_t bit(int q) { return std::uint64_t{1} << q; }
  void check(int q) const {
    if (q < 0 || q >= n_) throw Error("tableau: qubit out of range");
  }

  int n_;
  std::vector<Row> rows_;
};

inline bool is_clifford(const Circuit& c) {
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::Rz && !g.phase.is_clifford()) return false;
  }
  return true;
}

/// a and b implement the same Clifford unitary up to global phase.
[[nodiscard]] inline bool equivalent_clifford(const Circuit& a, const Circuit& b) {
  if (a.n_qubits != b.n_qubits) throw Error("equivalent_clifford: width mismatch");
  Tableau t(a.n_qubits);
  t.apply(a);
  t.apply(inverse(b));
  return t.is_identity();
}

using Unitary = std::vector<std::complex<double>>;  // row-major 2^n x 2^n

/// Dense unitary of a circuit on at most 6 qubits; qubit q is bit q of the
/// basis index.
[[nodiscard]] inline Unitary dense_unitary(const Circuit& c) {
  constexpr int kMax = 6;
  if (c.n_qubits > kMax) throw Unsupported("dense oracle supports at most 6 qubits");
  validate(c);
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  Unitary u(dim * dim);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<std::complex<double>> psi(dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::fill(psi.begin(), psi.end(), 0.0);
    psi[col] = 1.0;
    for (const Gate& g : c.gates) {
      const std::size_t m0 = std::size_t{1} << g.q0;
      switch (g.kind) {
        case GateKind::H:
          for (std::size_t i = 0; i < dim; ++i) {
            if (i & m0) continue;
            const auto a = psi[i], b = psi[i | m0];
            psi[i] = r * (a + b);
            psi[i | m0] = r * (a - b);
          }
          break;
        case GateKind::Rz: {
          const auto ph = std::polar(1.0, g.phase.radians());
          for (std::size_t i = 0; i < dim; ++i) {
            if (i & m0) psi[i] *= ph;
          }
          break;
        }
        case GateKind::CNOT: {
          const std::size_t m1 = std::size_t{1} << g.q1;
          for (std::size_t i = 0; i < dim; ++i) {
            if ((i & m0) && !(i & m1)) std::swap(psi[i], psi[i | m1]);
          }
          break;
        }
        case GateKind::CZ: {
          const std::size_t m1 = std::size_t{1} << g.q1;
          for (std::size_t i = 0; i < dim; ++i) {
            if ((i & m0) && (i & m1)) psi[i] = -psi[i];
          }
          break;
        }
      }
    }
    for (std::size_t row = 0; row < dim; ++row) u[row * dim + col] = psi[row];
  }
  return u;
}

/// U_a = e^{i phi} U_b entrywise within `tol`.
[[nodiscard]] inline bool equal_up_to_phase(const Unitary& a, const Unitary& b,
                                            double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (std::abs(a[i]) > std::abs(a[best])) best = i;
  }
  if (std::abs(b[best]) < 1e-12) return false;
  const auto ratio = a[best] / b[best];
  const auto phase = ratio / std::abs(ratio);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - phase * b[i]) > tol) return false;
  }
  return true;
}

[[nodiscard]] inline bool equivalent_dense(const Circuit& a, const Circuit& b,
                                           double tol = 1e-9) {
  if (a.n_qubits != b.n_qubits) throw Error("equivalent_dense: width mismatch");
  return equal_up_to_phase(dense_unitary(a), dense_unitary(b), tol);
}

}  // namespace zxrl
