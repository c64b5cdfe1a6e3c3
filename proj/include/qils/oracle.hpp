// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qils/graph.hpp"
#include "qils/rng.hpp"
#include "qils/statevector.hpp"

namespace qils::oracle {

// Independent ground truth used by the test suites: exhaustive MaxCut,
// matrix-free expectations and ground energies of the interpolated
// Hamiltonian H(lambda) = (1-lambda) H_i + lambda H_f, and grid minimizers.
// Nothing here shares code with the solver paths it checks.

enum class Method { brute_force, expectation, ground_energy, grid };

struct OracleResult {
  double value = 0.0;
  Bitstring witness;
  Method method = Method::brute_force;
};

/// Exhaustive MaxCut over 2^(n-1) bitstrings; bit 0 is fixed to 0 since
/// flipping every bit leaves the cut unchanged. Gray-code order so each step
/// flips one vertex and updates the cut in O(deg).
inline OracleResult brute_force_maxcut(const Graph& g) {
  const int n = g.n();
  if (n > 24) throw std::invalid_argument("brute_force_maxcut: n > 24");
  if (n == 0) return {0.0, {}, Method::brute_force};

  Bitstring bits(static_cast<std::size_t>(n), 0);
  double cut = 0.0;       // incrementally tracked, may drift at ~1e-13
  double best = 0.0;      // always an exact cut_value of the witness
  Bitstring witness = bits;

  // Enumerate codes over bits 1..n-1; gray(i) flips exactly one bit per step,
  // so the running cut updates in O(deg). Candidates within rounding noise of
  // the incumbent are re-scored exactly before they can replace it.
  const std::uint64_t count = (n > 1) ? (std::uint64_t{1} << (n - 1)) : 1;
  std::uint32_t prev_gray = 0;
  for (std::uint64_t i = 1; i < count; ++i) {
    const std::uint32_t gray = static_cast<std::uint32_t>(i ^ (i >> 1));
    const std::uint32_t changed = gray ^ prev_gray;
    prev_gray = gray;
    int j = 1;
    while (!((changed >> (j - 1)) & 1)) ++j;  // vertex j flips
    const std::size_t vj = static_cast<std::size_t>(j);
    for (const auto& nb : g.neighbors(j)) {
      const bool crossed = bits[vj] != bits[static_cast<std::size_t>(nb.vertex)];
      cut += crossed ? -nb.weight : nb.weight;
    }
    bits[vj] ^= 1;
    if (cut > best - 1e-9 * (1.0 + std::abs(cut))) {
      const double exact = cut_value(g, bits);
      if (exact > best) {
        best = exact;
        witness = bits;
      }
    }
  }
  return {best, std::move(witness), Method::brute_force};
}

/// Per-basis-state classical energies E_f(z), indexed by the bitmask z.
inline std::vector<double> diagonal_energies(const Graph& g) {
  const int n = g.n();
  std::vector<double> diag(std::size_t{1} << n, 0.0);
  for (std::size_t z = 0; z < diag.size(); ++z) {
    double e = 0.0;
    for (const auto& edge : g.edges()) {
      const int zu = ((z >> edge.u) & 1) ? -1 : 1;
      const int zv = ((z >> edge.v) & 1) ? -1 : 1;
      e += edge.w * zu * zv;
    }
    diag[z] = e;
  }
  return diag;
}

/// <state| H(lambda) |state>, computed term by term without materializing the
/// 2^n x 2^n matrix.
inline double exact_expectation(const Graph& g, double lambda,
                                const Statevector& state) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lambda outside [0,1]");
  const int n = qubit_count(state);
  if (n != g.n()) throw std::invalid_argument("state dimension mismatch");
  if (n > 20) throw std::invalid_argument("exact_expectation: n > 20");
  if (std::abs(norm_squared(state) - 1.0) > 1e-9)
    throw std::invalid_argument("state is not normalized");

  double diag = 0.0;
  for (std::size_t z = 0; z < state.size(); ++z) {
    if (state[z] == Amp(0.0, 0.0)) continue;
    double e = 0.0;
    for (const auto& edge : g.edges()) {
      const int zu = ((z >> edge.u) & 1) ? -1 : 1;
      const int zv = ((z >> edge.v) & 1) ? -1 : 1;
      e += edge.w * zu * zv;
    }
    diag += std::norm(state[z]) * e;
  }
  return lambda * diag - (1.0 - lambda) * transverse_expectation(state);
}

namespace detail {

/// y = H(lambda) x, matrix-free.
inline void apply_hamiltonian(const Graph& g, double lambda,
                              const std::vector<double>& diag,
                              const std::vector<double>& x,
                              std::vector<double>& y) {
  const int n = g.n();
  const double t = -(1.0 - lambda);
  for (std::size_t z = 0; z < x.size(); ++z) y[z] = lambda * diag[z] * x[z];
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t z = 0; z < x.size(); ++z) {
      if (z & bit) continue;
      y[z] += t * x[z | bit];
      y[z | bit] += t * x[z];
    }
  }
}

/// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) strictly
/// below x, by the Sturm / LDL^T sign count.
inline int sturm_count(const std::vector<double>& alpha,
                       const std::vector<double>& beta, double x) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double b2 = (i == 0) ? 0.0 : beta[i - 1] * beta[i - 1];
    d = alpha[i] - x - b2 / (d == 0.0 ? 1e-300 : d);
    if (d < 0.0) ++count;
  }
  return count;
}

inline double tridiag_min_eigenvalue(const std::vector<double>& alpha,
                                     const std::vector<double>& beta) {
  double lo = alpha[0], hi = alpha[0];
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                     (i + 1 < alpha.size() ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Lowest eigenvalue of H(lambda) by Lanczos with full reorthogonalization,
/// matrix-free. Absolute accuracy ~1e-8 for n <= 14.
inline double exact_ground_energy(const Graph& g, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lambda outside [0,1]");
  const int n = g.n();
  if (n > 14) throw std::invalid_argument("exact_ground_energy: n > 14");
  const std::size_t dim = std::size_t{1} << n;
  const auto diag = diagonal_energies(g);

  const std::size_t max_steps = std::min<std::size_t>(dim, 220);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  basis.reserve(max_steps);

  Rng rng(0x5eedULL + static_cast<std::uint64_t>(dim));
  std::vector<double> v(dim);
  for (auto& x : v) x = uniform_unit(rng) - 0.5;
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  for (auto& x : v) x /= nv;

  std::vector<double> w(dim);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < max_steps; ++k) {
    basis.push_back(v);
    detail::apply_hamiltonian(g, lambda, diag, v, w);
    double a = 0.0;
    for (std::size_t z = 0; z < dim; ++z) a += v[z] * w[z];
    alpha.push_back(a);
    // Full reorthogonalization keeps the Krylov basis clean at these sizes.
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t z = 0; z < dim; ++z) dot += b[z] * w[z];
      for (std::size_t z = 0; z < dim; ++z) w[z] -= dot * b[z];
    }
    double nb = 0.0;
    for (double x : w) nb += x * x;
    nb = std::sqrt(nb);

    if (k >= 8 || nb < 1e-12 || k + 1 == max_steps) {
      const double cur = detail::tridiag_min_eigenvalue(alpha, beta);
      if (std::abs(cur - prev) < 1e-10 || nb < 1e-12 || k + 1 == max_steps) {
        if (nb >= 1e-12 && k + 1 == max_steps &&
            std::abs(cur - prev) > 1e-7)
          throw std::runtime_error("exact_ground_energy: Lanczos stalled");
        return cur;
      }
      prev = cur;
    }
    if (nb < 1e-12) break;
    beta.push_back(nb);
    for (std::size_t z = 0; z < dim; ++z) v[z] = w[z] / nb;
  }
  return detail::tridiag_min_eigenvalue(alpha, beta);
}

/// Argmin over a uniform theta grid on [0, pi/2] of A cos 2θ - B sin 2θ.
inline double grid_minimize_single_site(double A, double B, int points) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  const double step = (std::numbers::pi / 2.0) / (points - 1);
  double best_theta = 0.0;
  double best = A;  // value at theta = 0
  for (int i = 1; i < points; ++i) {
    const double theta = i * step;
    const double e = A * std::cos(2.0 * theta) - B * std::sin(2.0 * theta);
    if (e < best) {
      best = e;
      best_theta = theta;
    }
  }
  return best_theta;
}

}  // namespace qils::oracle
