// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "qils/energy.hpp"
#include "qils/graph.hpp"
#include "qils/oracle.hpp"
#include "qils/rng.hpp"
#include "qils/solver.hpp"
#include "qils/statevector.hpp"

namespace qils {

// ---------------------------------------------------------------------------
// LQA: gradient descent on product-state angles along a discretized annealing
// schedule  H_s = (1-s) H_i + s * gamma * H_f  with s = j/M, one steepest
// descent step per schedule point.
// ---------------------------------------------------------------------------

struct LqaConfig {
  double gamma = 0.5;  // rescale of the classical Hamiltonian
  double eta = 0.5;    // gradient step size
  long steps = 200;    // schedule length M
  std::uint64_t seed = 1;

  void validate() const {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  }
};

/// Schedule energy E_s = (1-s) * (-sum_j sin 2θ_j) + s*γ*sum_edges w cos cos.
inline double lqa_energy(const Graph& g, double s, double gamma,
                         std::span<const double> theta) {
  double coupling = 0.0;
  for (const auto& e : g.edges())
    coupling += e.w * std::cos(2.0 * theta[static_cast<std::size_t>(e.u)]) *
                std::cos(2.0 * theta[static_cast<std::size_t>(e.v)]);
  double transverse = 0.0;
  for (double t : theta) transverse += std::sin(2.0 * t);
  return s * gamma * coupling - (1.0 - s) * transverse;
}

/// ∂E_s/∂θ_j = -2 s γ a_j sin(2θ_j) - 2 (1-s) cos(2θ_j), from the old vector.
inline void lqa_gradient(const Graph& g, double s, double gamma,
                         std::span<const double> theta, const FieldCache& cache,
                         std::span<double> out) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double a = cache.field(static_cast<int>(j));
    out[j] = -2.0 * s * gamma * a * std::sin(2.0 * theta[j]) -
             2.0 * (1.0 - s) * std::cos(2.0 * theta[j]);
  }
}

/// Runs the annealing schedule. The trace records the best rounded solution
/// seen up to each step, one record per schedule point.
inline RunTrace run_lqa(const Graph& g, const LqaConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = static_cast<std::size_t>(g.n());
  AngleVector theta(n);
  for (auto& t : theta) t = uniform_unit(rng) * (std::numbers::pi / 2.0);

  FieldCache cache(g, theta);
  std::vector<double> grad(n);

  RunTrace trace;
  trace.best_energy = std::numeric_limits<double>::infinity();
  trace.best_cut = -std::numeric_limits<double>::infinity();
  trace.records.reserve(static_cast<std::size_t>(cfg.steps));

  using clock = std::chrono::steady_clock;
  for (long j = 1; j <= cfg.steps; ++j) {
    const auto t0 = clock::now();
    const double s = static_cast<double>(j) / static_cast<double>(cfg.steps);
    lqa_gradient(g, s, cfg.gamma, theta, cache, grad);
    for (std::size_t i = 0; i < n; ++i)
      theta[i] = std::clamp(theta[i] - cfg.eta * grad[i], 0.0,
                            std::numbers::pi / 2.0);
    cache.reset(theta);

    const Bitstring bits = round_to_bits(theta);
    const double energy = ising_energy(g, bits);
    if (energy < trace.best_energy) {
      trace.best_energy = energy;
      trace.best_cut = cut_from_energy(g, energy);
      trace.best_bits = bits;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    trace.records.push_back({j, trace.best_cut, trace.best_energy, 1, ms});
  }
  trace.total_sweeps = cfg.steps;
  return trace;
}

// ---------------------------------------------------------------------------
// GCS: desk-scale dense-statevector implementation of the coherent-state
// ansatz |Psi(x,B,y)> = U(y) V(B) U(x) |+>^n with single-qubit rotation
// layers U and the two-qubit phase layer V(B) = exp(-i sum_{j!=k} B_jk Z_j Z_k).
// ---------------------------------------------------------------------------

struct GcsParams {
  // x, y: per-qubit rotation coefficients (X, Y, Z). B: symmetric coupling
  // matrix with zero diagonal, stored dense row-major.
  std::vector<std::array<double, 3>> x;
  std::vector<std::array<double, 3>> y;
  std::vector<double> B;

  static GcsParams zeros(int n) {
    GcsParams p;
    p.x.assign(static_cast<std::size_t>(n), {0.0, 0.0, 0.0});
    p.y.assign(static_cast<std::size_t>(n), {0.0, 0.0, 0.0});
    p.B.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    return p;
  }

  int n() const { return static_cast<int>(x.size()); }

  double b(int j, int k) const {
    return B[static_cast<std::size_t>(j) * x.size() +
             static_cast<std::size_t>(k)];
  }
  /// Sets B_jk = B_kj = v (j != k).
  void set_b(int j, int k, double v) {
    B[static_cast<std::size_t>(j) * x.size() + static_cast<std::size_t>(k)] = v;
    B[static_cast<std::size_t>(k) * x.size() + static_cast<std::size_t>(j)] = v;
  }
};

/// Builds the GCS statevector. All parameters zero gives |+>^n exactly.
inline Statevector gcs_state(const GcsParams& params) {
  const int n = params.n();
  if (n > 20) throw std::invalid_argument("gcs_state: n > 20");
  Statevector psi = plus_state(n);

  for (int j = 0; j < n; ++j) {
    const auto& r = params.x[static_cast<std::size_t>(j)];
    if (r[0] != 0.0 || r[1] != 0.0 || r[2] != 0.0)
      apply_1q(psi, j, axis_rotation(r[0], r[1], r[2]));
  }

  // Diagonal phase exp(-i phi(z)), phi(z) = sum_{j!=k} B_jk z_j z_k.
  bool has_b = false;
  for (double v : params.B)
    if (v != 0.0) {
      has_b = true;
      break;
    }
  if (has_b) {
    for (std::size_t z = 0; z < psi.size(); ++z) {
      double phi = 0.0;
      for (int j = 0; j < n; ++j) {
        const double zj = ((z >> j) & 1) ? -1.0 : 1.0;
        for (int k = j + 1; k < n; ++k) {
          const double zk = ((z >> k) & 1) ? -1.0 : 1.0;
          phi += 2.0 * params.b(j, k) * zj * zk;
        }
      }
      psi[z] *= std::polar(1.0, -phi);
    }
  }

  for (int j = 0; j < n; ++j) {
    const auto& r = params.y[static_cast<std::size_t>(j)];
    if (r[0] != 0.0 || r[1] != 0.0 || r[2] != 0.0)
      apply_1q(psi, j, axis_rotation(r[0], r[1], r[2]));
  }
  return psi;
}

/// <Z_j> for every qubit from the basis probabilities.
inline std::vector<double> z_expectations(const Statevector& psi) {
  const int n = qubit_count(psi);
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    const double p = std::norm(psi[idx]);
    if (p == 0.0) continue;
    for (int j = 0; j < n; ++j)
      z[static_cast<std::size_t>(j)] += ((idx >> j) & 1) ? -p : p;
  }
  return z;
}

/// Steepest descent on <Psi| H(s) |Psi> along the annealing schedule s = j/M,
/// gradients by central finite differences (h = 1e-5). Parameters start at a
/// small random point so that spin-flip symmetric configurations, on which
/// every <Z_j> vanishes identically, do not pin the search. The final
/// bitstring takes b_j = 1 where <Z_j> < 0 (ties round to 0).
inline RunTrace run_gcs(const Graph& g, long steps, double step_size,
                        std::uint64_t seed) {
  const int n = g.n();
  if (n > 16) throw std::invalid_argument("run_gcs: n > 16");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("step size must be > 0");

  constexpr double kInitScale = 0.01;
  constexpr double kH = 1e-5;

  Rng rng(seed);
  GcsParams params = GcsParams::zeros(n);
  for (auto& r : params.x)
    for (auto& v : r) v = kInitScale * (2.0 * uniform_unit(rng) - 1.0);
  for (auto& r : params.y)
    for (auto& v : r) v = kInitScale * (2.0 * uniform_unit(rng) - 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      params.set_b(j, k, kInitScale * (2.0 * uniform_unit(rng) - 1.0));

  auto energy_at = [&](const GcsParams& p, double s) {
    return oracle::exact_expectation(g, s, gcs_state(p));
  };

  GcsParams grad = GcsParams::zeros(n);
  RunTrace trace;
  trace.best_energy = std::numeric_limits<double>::infinity();
  trace.best_cut = -std::numeric_limits<double>::infinity();
  trace.records.reserve(static_cast<std::size_t>(steps));

  using clock = std::chrono::steady_clock;
  for (long step = 1; step <= steps; ++step) {
    const auto t0 = clock::now();
    const double s = static_cast<double>(step) / static_cast<double>(steps);

    auto central_diff = [&](double& slot) {
      const double orig = slot;
      slot = orig + kH;
      const double ep = energy_at(params, s);
      slot = orig - kH;
      const double em = energy_at(params, s);
      slot = orig;
      return (ep - em) / (2.0 * kH);
    };

    for (int j = 0; j < n; ++j)
      for (int c = 0; c < 3; ++c)
        grad.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] =
            central_diff(
                params.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < 3; ++c)
        grad.y[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] =
            central_diff(
                params.y[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        // Symmetric probe: both B_jk and B_kj move together.
        const double orig = params.b(j, k);
        params.set_b(j, k, orig + kH);
        const double ep = energy_at(params, s);
        params.set_b(j, k, orig - kH);
        const double em = energy_at(params, s);
        params.set_b(j, k, orig);
        grad.set_b(j, k, (ep - em) / (2.0 * kH));
      }

    for (int j = 0; j < n; ++j)
      for (int c = 0; c < 3; ++c) {
        params.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] -=
            step_size *
            grad.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        params.y[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] -=
            step_size *
            grad.y[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
      }
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        params.set_b(j, k, params.b(j, k) - step_size * grad.b(j, k));

    const Statevector psi = gcs_state(params);
    const auto z = z_expectations(psi);
    Bitstring bits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      bits[static_cast<std::size_t>(j)] =
          z[static_cast<std::size_t>(j)] < 0.0 ? 1 : 0;
    const double energy = ising_energy(g, bits);
    if (energy < trace.best_energy) {
      trace.best_energy = energy;
      trace.best_cut = cut_from_energy(g, energy);
      trace.best_bits = bits;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    trace.records.push_back({step, trace.best_cut, trace.best_energy, 1, ms});
  }
  trace.total_sweeps = steps;
  return trace;
}

}  // namespace qils
