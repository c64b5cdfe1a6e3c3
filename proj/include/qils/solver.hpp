// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qils/energy.hpp"
#include "qils/graph.hpp"
#include "qils/parallel.hpp"
#include "qils/rng.hpp"

namespace qils {

enum class Algo { qiils, qiigs, ils, lqa, gcs };

inline const char* algo_name(Algo a) {
  switch (a) {
    case Algo::qiils: return "qiils";
    case Algo::qiigs: return "qiigs";
    case Algo::ils: return "ils";
    case Algo::lqa: return "lqa";
    case Algo::gcs: return "gcs";
  }
  return "?";
}

inline Algo algo_from_name(const std::string& s) {
  if (s == "qiils") return Algo::qiils;
  if (s == "qiigs") return Algo::qiigs;
  if (s == "ils") return Algo::ils;
  if (s == "lqa") return Algo::lqa;
  if (s == "gcs") return Algo::gcs;
  throw std::invalid_argument("unknown algorithm: " + s);
}

struct SolverConfig {
  Algo algo = Algo::qiils;
  double lambda = 0.5;     // interpolation weight in H(lambda)
  double p = 0.3;          // perturbation strength: fraction of spins flipped
  double epsilon = 1e-3;   // convergence tolerance of the sweep test
  int max_sweeps = 200;    // per-iteration cap on sweeps / gradient steps
  long iterations = 100;   // outer converge-round-perturb cycles
  double tau = 0.1;        // gradient step size (qiigs)
  std::uint64_t seed = 1;
  long max_total_sweeps = 0;  // optional cumulative sweep budget, 0 = none
  int threads = 1;            // data-parallel width inside qiigs

  void validate() const {
    if (lambda < 0.0 || lambda > 1.0)
      throw std::invalid_argument("lambda outside [0,1]");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p outside [0,1]");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (algo == Algo::qiigs && !(tau > 0.0))
      throw std::invalid_argument("tau must be > 0 for qiigs");
  }
};

struct IterRecord {
  long iota = 0;          // 1-based iteration index
  double best_cut = 0.0;  // best cut found up to this iteration
  double best_energy = 0.0;
  long sweeps = 0;        // sweeps (or gradient steps) used this iteration
  double ms = 0.0;        // wall time of this iteration
};

struct RunTrace {
  std::vector<IterRecord> records;
  Bitstring best_bits;
  double best_cut = 0.0;
  double best_energy = 0.0;
  long total_sweeps = 0;
};

/// Minimizer of the single-site energy A cos(2θ) - B sin(2θ):
///   θ* = π/4 + atan2(A, B) / 2.
/// For A = B = 0 the objective is flat; callers keep the current angle.
inline double update_angle(double A, double B) {
  return std::numbers::pi / 4.0 + 0.5 * std::atan2(A, B);
}

/// One Gauss-Seidel update of site j against the cached fields. Returns the
/// absolute angle change.
inline double update_site(double lambda, std::span<double> theta,
                          FieldCache& cache, int j) {
  const double A = lambda * cache.field(j);
  const double B = 1.0 - lambda;
  if (A == 0.0 && B == 0.0) return 0.0;
  const double fresh = update_angle(A, B);
  const std::size_t sj = static_cast<std::size_t>(j);
  const double delta = std::abs(fresh - theta[sj]);
  theta[sj] = fresh;
  cache.update(j, fresh);
  return delta;
}

struct SweepResult {
  double max_delta = 0.0;       // max_j |θ_j^new - θ_j|
  double basis_distance = 0.0;  // sum_j |θ_j^new - π/4|
};

/// Full sequential pass j = 0..n-1. Each update sees the latest angles via the
/// cache, so no intra-sweep parallelism is possible without changing results.
inline SweepResult sweep(const Graph& g, double lambda, std::span<double> theta,
                         FieldCache& cache) {
  SweepResult r;
  for (int j = 0; j < g.n(); ++j) {
    const double delta = update_site(lambda, theta, cache, j);
    if (delta > r.max_delta) r.max_delta = delta;
  }
  for (double t : theta) r.basis_distance += std::abs(t - std::numbers::pi / 4.0);
  return r;
}

/// Convergence test: max_j |Δθ_j| < (ε/n) Σ_j |θ_j^new - π/4|. An exact fixed
/// point (max_delta = 0) also counts, since the right side vanishes on the
/// all-π/4 state and the strict inequality could never fire there.
inline bool converged(double max_delta, double basis_distance, double epsilon,
                      int n) {
  if (max_delta == 0.0) return true;
  return max_delta < (epsilon / n) * basis_distance;
}

/// Projects onto the computational basis: b_j = 0 for θ_j <= π/4, else 1.
inline Bitstring round_to_bits(std::span<const double> theta) {
  Bitstring b(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j)
    b[j] = theta[j] <= std::numbers::pi / 4.0 ? 0 : 1;
  return b;
}

/// Applies σ^X to round(p*n) distinct vertices chosen uniformly without
/// replacement: θ_j -> π/2 - θ_j. Applying the same set twice restores the
/// original angles.
inline void perturb(std::span<double> theta, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p outside [0,1]");
  const std::size_t n = theta.size();
  const std::size_t k = static_cast<std::size_t>(
      std::llround(p * static_cast<double>(n)));
  if (k == 0) return;
  // Partial Fisher-Yates over an index table selects k distinct vertices.
  std::vector<std::uint32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(idx[i], idx[j]);
    theta[idx[i]] = std::numbers::pi / 2.0 - theta[idx[i]];
  }
}

/// Energy gradient of the product state, evaluated from the old angle vector
/// for all sites at once:
///   ∂E/∂θ_j = -2 λ a_j sin(2θ_j) - 2 (1-λ) cos(2θ_j)
inline void gradient(const Graph& g, double lambda,
                     std::span<const double> theta, const FieldCache& cache,
                     std::span<double> out, int threads = 1) {
  const std::size_t n = theta.size();
  parallel_chunks(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const double a = cache.field(static_cast<int>(j));
      out[j] = -2.0 * lambda * a * std::sin(2.0 * theta[j]) -
               2.0 * (1.0 - lambda) * std::cos(2.0 * theta[j]);
    }
  });
}

/// Jacobi update θ_j <- clamp(θ_j - τ grad_j, 0, π/2) for all j, all reads
/// from the old vector. Returns the sweep-style displacement statistics; the
/// per-chunk partials are combined in fixed chunk order so the numbers do not
/// depend on the thread count.
inline SweepResult global_step(std::span<double> theta,
                               std::span<const double> grad, double tau,
                               int threads = 1) {
  if (grad.size() != theta.size())
    throw std::invalid_argument("gradient length mismatch");
  const std::size_t n = theta.size();
  constexpr std::size_t kChunks = 64;
  std::array<double, kChunks> chunk_max{}, chunk_sum{};
  parallel_chunks(
      n, threads,
      [&](std::size_t c, std::size_t lo, std::size_t hi) {
        double mx = 0.0, sum = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
          double fresh = theta[j] - tau * grad[j];
          fresh = std::clamp(fresh, 0.0, std::numbers::pi / 2.0);
          const double delta = std::abs(fresh - theta[j]);
          if (delta > mx) mx = delta;
          sum += std::abs(fresh - std::numbers::pi / 4.0);
          theta[j] = fresh;
        }
        chunk_max[c] = mx;
        chunk_sum[c] = sum;
      },
      kChunks);
  SweepResult r;
  const std::size_t used = std::min(kChunks, n);
  for (std::size_t c = 0; c < used; ++c) {
    if (chunk_max[c] > r.max_delta) r.max_delta = chunk_max[c];
    r.basis_distance += chunk_sum[c];
  }
  return r;
}

/// Iterated search driver for qiils / ils / qiigs. Each iteration runs the
/// inner optimization to convergence (or the sweep cap), rounds, scores the
/// bitstring against H_f, keeps the best, then perturbs and repeats.
/// Deterministic given (graph, config, seed), independent of cfg.threads.
inline RunTrace run(const Graph& g, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.algo == Algo::lqa || cfg.algo == Algo::gcs)
    throw std::invalid_argument(
        "lqa/gcs are handled by the baselines module, not run()");
  // ils is qiils pinned at lambda = 1: a greedy single-flip descent between
  // perturbations.
  const double lambda = cfg.algo == Algo::ils ? 1.0 : cfg.lambda;
  const bool global_updates = cfg.algo == Algo::qiigs;

  Rng rng(cfg.seed);
  const std::size_t n = static_cast<std::size_t>(g.n());
  AngleVector theta(n);
  for (auto& t : theta) t = uniform_unit(rng) * (std::numbers::pi / 2.0);

  FieldCache cache(g, theta);
  std::vector<double> grad(global_updates ? n : 0);

  RunTrace trace;
  trace.best_energy = std::numeric_limits<double>::infinity();
  trace.best_cut = -std::numeric_limits<double>::infinity();

  using clock = std::chrono::steady_clock;
  for (long iota = 1; iota <= cfg.iterations; ++iota) {
    const auto t0 = clock::now();
    long sweeps_used = 0;
    while (sweeps_used < cfg.max_sweeps) {
      SweepResult sr;
      if (global_updates) {
        gradient(g, lambda, theta, cache, grad, cfg.threads);
        sr = global_step(theta, grad, cfg.tau, cfg.threads);
        cache.reset(theta);
      } else {
        sr = sweep(g, lambda, theta, cache);
      }
      ++sweeps_used;
      if (converged(sr.max_delta, sr.basis_distance, cfg.epsilon, g.n()))
        break;
    }
    trace.total_sweeps += sweeps_used;

    const Bitstring bits = round_to_bits(theta);
    const double energy = ising_energy(g, bits);
    if (energy < trace.best_energy) {
      trace.best_energy = energy;
      trace.best_cut = cut_from_energy(g, energy);
      trace.best_bits = bits;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    trace.records.push_back(
        {iota, trace.best_cut, trace.best_energy, sweeps_used, ms});

    if (cfg.max_total_sweeps > 0 && trace.total_sweeps >= cfg.max_total_sweeps)
      break;
    if (iota < cfg.iterations) {
      perturb(theta, cfg.p, rng);
      cache.reset(theta);
    }
  }
  return trace;
}

}  // namespace qils
