// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qils/graph.hpp"

namespace qils {

// Per-vertex angles theta_j in [0, pi/2] parameterize the product state
// |psi_j> = cos(theta_j)|0> + sin(theta_j)|1>, so <Z_j> = cos(2 theta_j) and
// <X_j> = sin(2 theta_j).
using AngleVector = std::vector<double>;

/// Full product-state energy of H(lambda):
///   E = lambda * sum_edges w cos(2θ_u) cos(2θ_v) - (1-lambda) * sum_j sin(2θ_j)
/// This is the exact expectation, including the terms that are constant in any
/// single angle, so traces are comparable across algorithms.
inline double ps_energy(const Graph& g, double lambda,
                        std::span<const double> theta) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lambda outside [0,1]");
  if (theta.size() != static_cast<std::size_t>(g.n()))
    throw std::invalid_argument("angle vector length mismatch");
  double coupling = 0.0;
  for (const auto& e : g.edges())
    coupling += e.w * std::cos(2.0 * theta[static_cast<std::size_t>(e.u)]) *
                std::cos(2.0 * theta[static_cast<std::size_t>(e.v)]);
  double transverse = 0.0;
  for (double t : theta) transverse += std::sin(2.0 * t);
  return lambda * coupling - (1.0 - lambda) * transverse;
}

/// Local field a_j = sum_k w_jk cos(2θ_k) over the neighbors of j,
/// recomputed from scratch.
inline double local_field(const Graph& g, std::span<const double> theta,
                          int j) {
  if (j < 0 || j >= g.n()) throw std::out_of_range("vertex out of range");
  double a = 0.0;
  for (const auto& nb : g.neighbors(j))
    a += nb.weight * std::cos(2.0 * theta[static_cast<std::size_t>(nb.vertex)]);
  return a;
}

/// Incrementally maintained local fields a_j and cached cos(2θ_j) values.
/// Single writer; each concurrent trial owns its cache. A full refresh runs
/// every 10^4 incremental updates to keep accumulated drift below the 1e-9
/// audit bound.
class FieldCache {
 public:
  FieldCache(const Graph& g, std::span<const double> theta) : g_(&g) {
    reset(theta);
  }

  void reset(std::span<const double> theta) {
    const std::size_t n = static_cast<std::size_t>(g_->n());
    if (theta.size() != n)
      throw std::invalid_argument("angle vector length mismatch");
    cos2_.resize(n);
    for (std::size_t j = 0; j < n; ++j) cos2_[j] = std::cos(2.0 * theta[j]);
    rebuild_fields();
    updates_ = 0;
  }

  double field(int j) const { return a_[static_cast<std::size_t>(j)]; }
  double cos2(int j) const { return cos2_[static_cast<std::size_t>(j)]; }

  /// Applies theta_j -> theta_new: neighbors pick up w_jk * (cos2_new - cos2_old).
  void update(int j, double theta_new) {
    const std::size_t sj = static_cast<std::size_t>(j);
    const double c_new = std::cos(2.0 * theta_new);
    const double dc = c_new - cos2_[sj];
    cos2_[sj] = c_new;
    if (dc != 0.0)
      for (const auto& nb : g_->neighbors(j))
        a_[static_cast<std::size_t>(nb.vertex)] += nb.weight * dc;
    if (++updates_ >= kRefreshInterval) {
      rebuild_fields();
      updates_ = 0;
    }
  }

  /// Max absolute drift of the cached fields against a compensated-summation
  /// recomputation from the given angles.
  double audit(std::span<const double> theta) const {
    double worst = 0.0;
    for (int j = 0; j < g_->n(); ++j) {
      double sum = 0.0, comp = 0.0;
      for (const auto& nb : g_->neighbors(j)) {
        const double term =
            nb.weight * std::cos(2.0 * theta[static_cast<std::size_t>(nb.vertex)]);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      }
      worst = std::max(worst, std::abs(sum - a_[static_cast<std::size_t>(j)]));
    }
    return worst;
  }

 private:
  void rebuild_fields() {
    const std::size_t n = cos2_.size();
    a_.assign(n, 0.0);
    for (const auto& e : g_->edges()) {
      a_[static_cast<std::size_t>(e.u)] +=
          e.w * cos2_[static_cast<std::size_t>(e.v)];
      a_[static_cast<std::size_t>(e.v)] +=
          e.w * cos2_[static_cast<std::size_t>(e.u)];
    }
  }

  static constexpr std::uint64_t kRefreshInterval = 10000;

  const Graph* g_;
  std::vector<double> a_;
  std::vector<double> cos2_;
  std::uint64_t updates_ = 0;
};

}  // namespace qils
