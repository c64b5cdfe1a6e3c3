// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qils {

// Dense 2^n statevector helpers shared by the exact-diagonalization oracle and
// the coherent-state baseline. Qubit j maps to bit j of the basis index, and
// bit b corresponds to spin z = 1 - 2b.
using Amp = std::complex<double>;
using Statevector = std::vector<Amp>;

inline int qubit_count(const Statevector& psi) {
  std::size_t dim = psi.size();
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim)
    throw std::invalid_argument("statevector dimension is not a power of two");
  return n;
}

inline double norm_squared(const Statevector& psi) {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return s;
}

/// |+>^n, all amplitudes 2^{-n/2}.
inline Statevector plus_state(int n) {
  Statevector psi(std::size_t{1} << n,
                  Amp(std::pow(2.0, -0.5 * n), 0.0));
  return psi;
}

/// Product state with per-qubit amplitudes (cos θ_j, sin θ_j).
inline Statevector product_state(std::span<const double> theta) {
  const int n = static_cast<int>(theta.size());
  Statevector psi(std::size_t{1} << n);
  for (std::size_t z = 0; z < psi.size(); ++z) {
    double amp = 1.0;
    for (int j = 0; j < n; ++j)
      amp *= ((z >> j) & 1) ? std::sin(theta[static_cast<std::size_t>(j)])
                            : std::cos(theta[static_cast<std::size_t>(j)]);
    psi[z] = Amp(amp, 0.0);
  }
  return psi;
}

/// Applies a 2x2 unitary u (row-major) to qubit q.
inline void apply_1q(Statevector& psi, int q, const std::array<Amp, 4>& u) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t z = 0; z < psi.size(); ++z) {
    if (z & bit) continue;
    const Amp a0 = psi[z];
    const Amp a1 = psi[z | bit];
    psi[z] = u[0] * a0 + u[1] * a1;
    psi[z | bit] = u[2] * a0 + u[3] * a1;
  }
}

/// exp(-i (x σ^X + y σ^Y + z σ^Z)) in closed axis-angle form.
inline std::array<Amp, 4> axis_rotation(double x, double y, double z) {
  const double alpha = std::sqrt(x * x + y * y + z * z);
  if (alpha == 0.0) return {Amp(1, 0), Amp(0, 0), Amp(0, 0), Amp(1, 0)};
  const double c = std::cos(alpha);
  const double s = std::sin(alpha) / alpha;
  // cos(a) I - i sin(a)/a (x X + y Y + z Z)
  return {Amp(c, -s * z), Amp(-s * y, -s * x), Amp(s * y, -s * x),
          Amp(c, s * z)};
}

/// Expectation <psi| sum_j sigma^X_j |psi> via bit-flip amplitude pairings.
inline double transverse_expectation(const Statevector& psi) {
  const int n = qubit_count(psi);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double term = 0.0;
    for (std::size_t z = 0; z < psi.size(); ++z) {
      if (z & bit) continue;
      term += 2.0 * (psi[z].real() * psi[z | bit].real() +
                     psi[z].imag() * psi[z | bit].imag());
    }
    total += term;
  }
  return total;
}

}  // namespace qils
