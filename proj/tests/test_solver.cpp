// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "qils/energy.hpp"
#include "qils/graph.hpp"
#include "qils/oracle.hpp"
#include "qils/solver.hpp"

using namespace qils;

namespace {

constexpr double kPi = std::numbers::pi;

AngleVector random_angles(int n, Rng& rng) {
  AngleVector theta(static_cast<std::size_t>(n));
  for (auto& t : theta) t = uniform_unit(rng) * (kPi / 2.0);
  return theta;
}

Graph unit_triangle() {
  return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

/// Reference greedy single-flip descent: repeatedly flips the first vertex
/// whose flip increases the cut, in ascending order, until 1-flip stable.
Bitstring greedy_descent(const Graph& g, Bitstring b) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = 0; j < g.n(); ++j) {
      double gain = 0.0;
      for (const auto& nb : g.neighbors(j)) {
        const bool crossed =
            b[static_cast<std::size_t>(j)] !=
            b[static_cast<std::size_t>(nb.vertex)];
        gain += crossed ? -nb.weight : nb.weight;
      }
      if (gain > 0.0) {
        b[static_cast<std::size_t>(j)] ^= 1;
        changed = true;
      }
    }
  }
  return b;
}

bool one_flip_stable(const Graph& g, const Bitstring& b) {
  const double cut = cut_value(g, b);
  for (int j = 0; j < g.n(); ++j) {
    Bitstring c = b;
    c[static_cast<std::size_t>(j)] ^= 1;
    if (cut_value(g, c) > cut + 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("update_angle closed-form minimizer") {
  CHECK(update_angle(0.0, 1.0) == Catch::Approx(kPi / 4.0));
  CHECK(update_angle(0.5, 0.0) == Catch::Approx(kPi / 2.0));
  CHECK(update_angle(0.5, 0.5) == Catch::Approx(3.0 * kPi / 8.0));
  // Matches a fine grid minimizer of 0.5 cos(2t) - 0.5 sin(2t).
  const double grid = oracle::grid_minimize_single_site(0.5, 0.5, 100001);
  CHECK(std::abs(update_angle(0.5, 0.5) - grid) < 2e-5);
}

TEST_CASE("update_angle is a global minimizer for random coefficients") {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const double A = 4.0 * uniform_unit(rng) - 2.0;
    const double B = 2.0 * uniform_unit(rng);
    if (A == 0.0 && B == 0.0) continue;
    const double t = update_angle(A, B);
    const double e = A * std::cos(2 * t) - B * std::sin(2 * t);
    CHECK(e == Catch::Approx(-std::sqrt(A * A + B * B)).margin(1e-12));
  }
}

TEST_CASE("sweep at lambda=0 reaches the uniform pi/4 state in one pass") {
  const Graph g = gen_regular(16, 3, false, 31);
  Rng rng(31);
  AngleVector theta = random_angles(16, rng);
  FieldCache cache(g, theta);
  sweep(g, 0.0, theta, cache);
  for (double t : theta) CHECK(t == Catch::Approx(kPi / 4.0).margin(1e-15));
  const auto second = sweep(g, 0.0, theta, cache);
  CHECK(second.max_delta == 0.0);
}

TEST_CASE("sweep at lambda=1 is greedy single-flip descent") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = trial == 0 ? unit_triangle()
                               : gen_regular(12, 3, trial % 2 == 0, 200 + trial);
    AngleVector theta = random_angles(g.n(), rng);
    const Bitstring start = round_to_bits(theta);
    // Angle domain: place angles exactly on basis points so both dynamics see
    // the same configuration.
    for (std::size_t j = 0; j < theta.size(); ++j)
      theta[j] = start[j] ? kPi / 2.0 : 0.0;
    FieldCache cache(g, theta);
    int sweeps = 0;
    while (sweeps < 50) {
      ++sweeps;
      if (sweep(g, 1.0, theta, cache).max_delta == 0.0) break;
    }
    for (double t : theta) {
      const bool basis = std::abs(t) < 1e-9 || std::abs(t - kPi / 2.0) < 1e-9;
      REQUIRE(basis);
    }
    const Bitstring mine = round_to_bits(theta);
    const Bitstring ref = greedy_descent(g, start);
    CHECK(cut_value(g, mine) == Catch::Approx(cut_value(g, ref)).margin(1e-12));
    CHECK(one_flip_stable(g, mine));
    if (trial == 0) CHECK(sweeps <= 3);  // triangle converges in <= 2 + check
  }
}

TEST_CASE("every single-site update is non-increasing in energy") {
  Rng rng(41);
  const Graph g = gen_regular(12, 3, true, 41);
  for (double lambda : {0.1, 0.5, 0.9}) {
    AngleVector theta = random_angles(12, rng);
    FieldCache cache(g, theta);
    double prev = ps_energy(g, lambda, theta);
    for (int s = 0; s < 10; ++s) {
      for (int j = 0; j < g.n(); ++j) {
        update_site(lambda, theta, cache, j);
        const double cur = ps_energy(g, lambda, theta);
        REQUIRE(cur <= prev + 1e-12 * std::abs(prev) + 1e-14);
        prev = cur;
      }
    }
  }
}

TEST_CASE("converged implements the relative sweep test") {
  CHECK(converged(0.0, 123.0, 1e-3, 10));
  CHECK(converged(0.0, 0.0, 1e-3, 10));
  // Basis angles: threshold is eps * pi/4 per site.
  const int n = 8;
  const double basis_distance = n * kPi / 4.0;
  CHECK(converged(1e-9, basis_distance, 1e-3, n));
  CHECK_FALSE(converged(0.1, n * kPi / 4.0, 1e-3, n));
}

TEST_CASE("round_to_bits boundary and formula") {
  CHECK(round_to_bits(AngleVector{kPi / 4.0})[0] == 0);  // tie rounds to 0
  const Bitstring b = round_to_bits(AngleVector{0.0, kPi / 2.0});
  CHECK(b[0] == 0);
  CHECK(b[1] == 1);
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = uniform_unit(rng) * (kPi / 2.0);
    const int direct = std::min(1L, std::lround(2.0 * t / kPi));
    if (std::abs(t - kPi / 4.0) < 1e-12) continue;  // tie handled above
    CHECK(round_to_bits(AngleVector{t})[0] == direct);
  }
}

TEST_CASE("perturb: p=0 is the identity") {
  Rng rng(47);
  AngleVector theta = random_angles(10, rng);
  const AngleVector before = theta;
  perturb(theta, 0.0, rng);
  CHECK(theta == before);
}

TEST_CASE("perturb flips exactly round(p*n) vertices and is an involution") {
  Rng rng(53);
  AngleVector theta = random_angles(20, rng);
  const AngleVector before = theta;
  {
    Rng r1(99);
    perturb(theta, 0.35, r1);  // round(0.35*20) = 7 flips
  }
  int flipped = 0;
  for (std::size_t j = 0; j < theta.size(); ++j)
    if (theta[j] != before[j]) {
      ++flipped;
      CHECK(theta[j] == Catch::Approx(kPi / 2.0 - before[j]).margin(1e-15));
    }
  CHECK(flipped <= 7);  // flips on theta == pi/4 are invisible
  {
    Rng r2(99);  // same seed selects the same vertex set
    perturb(theta, 0.35, r2);
  }
  for (std::size_t j = 0; j < theta.size(); ++j)
    CHECK(theta[j] == Catch::Approx(before[j]).margin(1e-15));
}

TEST_CASE("perturb: p=1 reflects every angle") {
  AngleVector theta(6, 0.0);
  Rng rng(59);
  perturb(theta, 1.0, rng);
  for (double t : theta) CHECK(t == Catch::Approx(kPi / 2.0));
}

TEST_CASE("gradient vanishes at the uniform pi/4 point") {
  const Graph g = gen_regular(10, 3, false, 61);
  AngleVector theta(10, kPi / 4.0);
  FieldCache cache(g, theta);
  std::vector<double> grad(10);
  gradient(g, 0.5, theta, cache, grad);
  for (double v : grad) CHECK(v == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("gradient at lambda=0, theta=0 is -2") {
  const Graph g(2, {{0, 1, 1.0}});
  AngleVector theta(2, 0.0);
  FieldCache cache(g, theta);
  std::vector<double> grad(2);
  gradient(g, 0.0, theta, cache, grad);
  CHECK(grad[0] == Catch::Approx(-2.0));
  CHECK(grad[1] == Catch::Approx(-2.0));
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng(67);
  const Graph g = gen_regular(10, 3, true, 67);
  const double lambda = 0.6;
  AngleVector theta = random_angles(10, rng);
  FieldCache cache(g, theta);
  std::vector<double> grad(10);
  gradient(g, lambda, theta, cache, grad);

  const double h = 1e-5;
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < 10; ++j) {
    AngleVector tp = theta, tm = theta;
    tp[j] += h;
    tm[j] -= h;
    const double fd =
        (ps_energy(g, lambda, tp) - ps_energy(g, lambda, tm)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[static_cast<std::size_t>(j)]));
    scale = std::max(scale, std::abs(fd));
  }
  CHECK(worst / scale < 1e-6);
}

TEST_CASE("global_step: zero gradient is the identity, small steps descend") {
  Rng rng(71);
  const Graph g = gen_regular(12, 3, true, 71);
  AngleVector theta = random_angles(12, rng);
  const AngleVector before = theta;
  std::vector<double> zero(12, 0.0);
  global_step(theta, zero, 0.5);
  CHECK(theta == before);

  FieldCache cache(g, theta);
  std::vector<double> grad(12);
  gradient(g, 0.5, theta, cache, grad);
  const double e0 = ps_energy(g, 0.5, theta);
  global_step(theta, grad, 1e-4);
  CHECK(ps_energy(g, 0.5, theta) <= e0 + 1e-12);
}

TEST_CASE("global_step: serial and parallel produce identical angles") {
  Rng rng(73);
  const Graph g = gen_regular(500, 3, true, 73);
  AngleVector theta = random_angles(500, rng);
  FieldCache cache(g, theta);
  std::vector<double> grad(500);
  gradient(g, 0.4, theta, cache, grad);

  AngleVector serial = theta, parallel = theta;
  const auto rs = global_step(serial, grad, 0.1, 1);
  const auto rp = global_step(parallel, grad, 0.1, 4);
  for (std::size_t j = 0; j < serial.size(); ++j)
    REQUIRE(serial[j] == parallel[j]);
  CHECK(rs.max_delta == rp.max_delta);
  CHECK(rs.basis_distance == rp.basis_distance);
}

TEST_CASE("run: single edge is solved in the first iteration") {
  const Graph g(2, {{0, 1, 1.0}});
  SolverConfig cfg;
  cfg.algo = Algo::qiils;
  cfg.lambda = 0.5;
  cfg.iterations = 1;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL}) {
    cfg.seed = seed;
    const RunTrace trace = run(g, cfg);
    CHECK(trace.best_cut == 1.0);
    CHECK(trace.records.size() == 1);
    CHECK(trace.records[0].iota == 1);
  }
}

TEST_CASE("run: small u3R ensemble reaches brute-force optimum") {
  int solved = 0;
  for (int i = 0; i < 10; ++i) {
    const Graph g = gen_regular(16, 3, false, 3000 + i);
    const double opt = oracle::brute_force_maxcut(g).value;
    SolverConfig cfg;
    cfg.lambda = 0.55;
    cfg.p = 0.5;
    cfg.max_sweeps = 80;
    cfg.iterations = 200;
    cfg.seed = 42 + i;
    const RunTrace trace = run(g, cfg);
    if (trace.best_cut == Catch::Approx(opt).margin(1e-9)) ++solved;
  }
  CHECK(solved == 10);
}

TEST_CASE("run traces are monotone and internally consistent") {
  const Graph g = gen_regular(30, 3, true, 79);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.p = 0.3;
  cfg.iterations = 40;
  cfg.seed = 11;
  const RunTrace trace = run(g, cfg);
  REQUIRE(trace.records.size() == 40);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (i > 0) {
      CHECK(r.best_cut >= trace.records[i - 1].best_cut);
      CHECK(r.best_energy <= trace.records[i - 1].best_energy);
    }
    CHECK(r.best_cut ==
          Catch::Approx((g.total_weight() - r.best_energy) / 2.0)
              .margin(1e-12));
    CHECK(r.sweeps >= 1);
    CHECK(r.sweeps <= cfg.max_sweeps);
  }
  CHECK(cut_value(g, trace.best_bits) == Catch::Approx(trace.best_cut));
}

TEST_CASE("run is deterministic given the seed, including across threads") {
  const Graph g = gen_regular(60, 3, true, 83);
  SolverConfig cfg;
  cfg.algo = Algo::qiigs;
  cfg.lambda = 0.4;
  cfg.tau = 0.1;
  cfg.p = 0.2;
  cfg.iterations = 15;
  cfg.seed = 5;

  cfg.threads = 1;
  const RunTrace a = run(g, cfg);
  cfg.threads = 4;
  const RunTrace b = run(g, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].best_cut == b.records[i].best_cut);
    CHECK(a.records[i].best_energy == b.records[i].best_energy);
    CHECK(a.records[i].sweeps == b.records[i].sweeps);
  }
  CHECK(a.best_bits == b.best_bits);

  const RunTrace c = run(g, cfg);  // same config twice
  CHECK(c.best_cut == b.best_cut);
}

TEST_CASE("run: ils is qiils at lambda 1") {
  const Graph g = gen_regular(24, 3, false, 89);
  SolverConfig ils;
  ils.algo = Algo::ils;
  ils.p = 0.1;
  ils.iterations = 30;
  ils.seed = 7;
  SolverConfig qiils = ils;
  qiils.algo = Algo::qiils;
  qiils.lambda = 1.0;
  const RunTrace a = run(g, ils);
  const RunTrace b = run(g, qiils);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].best_cut == b.records[i].best_cut);
    CHECK(a.records[i].sweeps == b.records[i].sweeps);
  }
  CHECK(a.best_bits == b.best_bits);
}

TEST_CASE("run rejects invalid configs and baseline algos") {
  const Graph g(2, {{0, 1, 1.0}});
  SolverConfig cfg;
  cfg.lambda = 1.5;
  CHECK_THROWS_AS(run(g, cfg), std::invalid_argument);
  cfg.lambda = 0.5;
  cfg.iterations = 0;
  CHECK_THROWS_AS(run(g, cfg), std::invalid_argument);
  cfg.iterations = 1;
  cfg.algo = Algo::lqa;
  CHECK_THROWS_AS(run(g, cfg), std::invalid_argument);
  cfg.algo = Algo::qiigs;
  cfg.tau = 0.0;
  CHECK_THROWS_AS(run(g, cfg), std::invalid_argument);
}

TEST_CASE("run honors the total sweep budget") {
  const Graph g = gen_regular(40, 3, true, 97);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.iterations = 100000;
  cfg.max_total_sweeps = 500;
  cfg.seed = 3;
  const RunTrace trace = run(g, cfg);
  CHECK(trace.total_sweeps >= 500);
  CHECK(trace.total_sweeps <= 500 + cfg.max_sweeps);
}
