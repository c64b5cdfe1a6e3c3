// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qils/baselines.hpp"
#include "qils/graph.hpp"
#include "qils/parallel.hpp"
#include "qils/solver.hpp"

namespace qils {

/// Parameters of the improvement model E(ι) = c0 * exp(-m ι) + c1.
struct DecayFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double m = 0.0;       // decay rate per iteration
  double residual = 0.0;  // RMS of the fit residuals
  bool converged = false;
};

namespace detail {

inline bool solve_3x3(double a[3][3], double b[3], double x[3]) {
  int piv[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[piv[r]][col]) > std::abs(a[piv[best]][col])) best = r;
    std::swap(piv[col], piv[best]);
    const double d = a[piv[col]][col];
    if (d == 0.0 || !std::isfinite(d)) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[piv[r]][col] / d;
      for (int c = col; c < 3; ++c) a[piv[r]][c] -= f * a[piv[col]][c];
      b[piv[r]] -= f * b[piv[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double s = b[piv[col]];
    for (int c = col + 1; c < 3; ++c) s -= a[piv[col]][c] * x[c];
    x[col] = s / a[piv[col]][col];
    if (!std::isfinite(x[col])) return false;
  }
  return true;
}

}  // namespace detail

/// Least-squares fit of E(ι) = c0 e^{-mι} + c1 by Gauss-Newton with step
/// halving, initialized from the curve endpoints and a log-linear slope.
/// Throws on fewer than 4 points or a constant curve; a fit that fails to
/// converge comes back flagged with m = 0 and the residual of the data.
inline DecayFit fit_decay(std::span<const std::pair<long, double>> curve) {
  if (curve.size() < 4)
    throw std::invalid_argument("fit_decay needs at least 4 points");
  double emin = curve[0].second, emax = curve[0].second;
  for (const auto& [iota, e] : curve) {
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  if (emax == emin)
    throw std::invalid_argument("fit_decay: constant curve is degenerate");

  const double scale = std::max(std::abs(emin), std::abs(emax));

  double c1 = curve.back().second;
  double c0 = curve.front().second - c1;
  double m = 0.1;
  {
    // Log-linear slope of |E - c1| against iteration seeds m.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& [iota, e] : curve) {
      const double d = std::abs(e - c1);
      if (d < 1e-12 * scale) continue;
      const double x = static_cast<double>(iota), y = std::log(d);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    if (cnt >= 2) {
      const double denom = cnt * sxx - sx * sx;
      if (denom != 0.0) {
        const double slope = (cnt * sxy - sx * sy) / denom;
        if (std::isfinite(slope) && -slope > 1e-6) m = -slope;
      }
    }
  }

  auto ssr_of = [&](double a0, double a1, double am) {
    double s = 0.0;
    for (const auto& [iota, e] : curve) {
      const double r = e - (a0 * std::exp(-am * iota) + a1);
      s += r * r;
    }
    return s;
  };

  double ssr = ssr_of(c0, c1, m);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    double jtj[3][3] = {};
    double jtr[3] = {};
    for (const auto& [iota, e] : curve) {
      const double ex = std::exp(-m * iota);
      const double f = c0 * ex + c1;
      const double r = e - f;
      const double j0 = ex;                 // d f / d c0
      const double j1 = 1.0;                // d f / d c1
      const double j2 = -c0 * iota * ex;    // d f / d m
      const double j[3] = {j0, j1, j2};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
        jtr[a] += j[a] * r;
      }
    }
    double step[3];
    if (!detail::solve_3x3(jtj, jtr, step)) break;

    double factor = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, factor *= 0.5) {
      const double n0 = c0 + factor * step[0];
      const double n1 = c1 + factor * step[1];
      const double nm = m + factor * step[2];
      const double ns = ssr_of(n0, n1, nm);
      if (std::isfinite(ns) && ns < ssr) {
        const double rel = (ssr - ns) / std::max(ssr, 1e-300);
        c0 = n0;
        c1 = n1;
        m = nm;
        ssr = ns;
        improved = true;
        if (rel < 1e-13) converged = true;
        break;
      }
    }
    if (!improved) {
      converged = true;
      break;
    }
    if (converged) break;
  }

  DecayFit fit;
  fit.residual = std::sqrt(ssr / static_cast<double>(curve.size()));
  if (!converged || !std::isfinite(m)) {
    fit.c0 = c0;
    fit.c1 = c1;
    fit.m = 0.0;
    fit.converged = false;
    return fit;
  }
  fit.c0 = c0;
  fit.c1 = c1;
  fit.m = m;
  fit.converged = true;
  return fit;
}

/// Golden-section search for the maximizer of a unimodal f on [lo, hi]. The
/// number of interval shrinks is fixed up front from the tolerance,
///   k = ceil(ln((hi-lo)/tol) / ln(1/rho)),  rho = (sqrt 5 - 1)/2,
/// so the evaluation count is exactly k + 1 (0 when the bracket already fits).
/// A non-unimodal objective yields a local maximizer.
inline double gss(const std::function<double(double)>& f, double lo, double hi,
                  double tol, long* eval_count = nullptr) {
  if (!(lo <= hi)) throw std::invalid_argument("gss requires lo <= hi");
  if (!(tol > 0.0)) throw std::invalid_argument("gss requires tol > 0");
  if (eval_count) *eval_count = 0;
  const double rho = (std::sqrt(5.0) - 1.0) / 2.0;
  const double width = hi - lo;
  if (width <= tol) return 0.5 * (lo + hi);

  const long shrinks = static_cast<long>(
      std::ceil(std::log(width / tol) / std::log(1.0 / rho)));
  double x1 = hi - rho * (hi - lo);
  double x2 = lo + rho * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  if (eval_count) *eval_count = 2;
  for (long i = 1; i < shrinks; ++i) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - rho * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + rho * (hi - lo);
      f2 = f(x2);
    }
    if (eval_count) ++*eval_count;
  }
  if (f1 > f2) hi = x2;
  else lo = x1;
  return 0.5 * (lo + hi);
}

struct ProbeResult {
  double lambda = 0.0;
  DecayFit fit;
  bool fit_ok = false;
  double mean_final_energy = 0.0;
};

struct TuneResult {
  double lambda_star = 0.0;
  bool used_fallback = false;
  std::vector<ProbeResult> probes;  // in evaluation order
};

namespace detail {

/// Pointwise mean of best-so-far energy across graphs x trials at one lambda.
inline std::vector<double> mean_energy_curve(std::span<const Graph> graphs,
                                             const SolverConfig& base,
                                             int trials, double lambda,
                                             int threads) {
  const std::size_t runs = graphs.size() * static_cast<std::size_t>(trials);
  const std::size_t iters = static_cast<std::size_t>(base.iterations);
  std::vector<std::vector<double>> curves(runs);
  parallel_for_each_index(runs, threads, [&](std::size_t r) {
    const std::size_t gi = r / static_cast<std::size_t>(trials);
    const std::size_t t = r % static_cast<std::size_t>(trials);
    SolverConfig cfg = base;
    cfg.lambda = lambda;
    cfg.seed = base.seed + gi * 1000003ULL + t;
    cfg.threads = 1;
    const RunTrace trace = run(graphs[gi], cfg);
    auto& c = curves[r];
    c.resize(iters);
    for (std::size_t i = 0; i < iters; ++i)
      c[i] = trace.records[i].best_energy;
  });
  std::vector<double> mean(iters, 0.0);
  for (const auto& c : curves)
    for (std::size_t i = 0; i < iters; ++i) mean[i] += c[i];
  for (auto& v : mean) v /= static_cast<double>(runs);
  return mean;
}

}  // namespace detail

/// Selects lambda by maximizing the fitted decay rate m of the averaged
/// best-energy-vs-iteration curve, via golden-section search on [lo, hi].
///
/// Probes with too little interpolation weight produce degenerate curves: the
/// uniform pi/4 state is the global sweep attractor for lambda below the
/// coupling threshold, every iteration rounds to the same configuration, and
/// the decay fit has nothing to work with. When any probe degenerates this
/// way (or a fit fails to converge), the search falls back to a uniform
/// lambda grid over [lo, hi] and returns the grid point with the lowest mean
/// final energy.
inline TuneResult tune_lambda(std::span<const Graph> graphs,
                              const SolverConfig& base, int trials, double lo,
                              double hi, double tol = 0.02, int threads = 1) {
  if (graphs.empty()) throw std::invalid_argument("tune_lambda needs graphs");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (base.iterations < 4)
    throw std::invalid_argument("tune_lambda needs iterations >= 4 to fit");
  if (!(lo <= hi)) throw std::invalid_argument("lo must be <= hi");

  TuneResult result;
  bool any_bad = false;
  std::map<double, std::size_t> probe_index;

  auto probe_at = [&](double lambda) -> const ProbeResult& {
    const auto it = probe_index.find(lambda);
    if (it != probe_index.end()) return result.probes[it->second];
    const auto mean =
        detail::mean_energy_curve(graphs, base, trials, lambda, threads);
    ProbeResult probe;
    probe.lambda = lambda;
    probe.mean_final_energy = mean.back();
    std::vector<std::pair<long, double>> curve(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i)
      curve[i] = {static_cast<long>(i + 1), mean[i]};
    try {
      probe.fit = fit_decay(curve);
      probe.fit_ok = probe.fit.converged;
    } catch (const std::invalid_argument&) {
      probe.fit_ok = false;
    }
    if (!probe.fit_ok) any_bad = true;
    probe_index[lambda] = result.probes.size();
    result.probes.push_back(probe);
    return result.probes.back();
  };

  auto objective = [&](double lambda) -> double {
    const ProbeResult& p = probe_at(lambda);
    return p.fit_ok ? p.fit.m : -std::numeric_limits<double>::infinity();
  };

  double star = lo;
  if (lo == hi) {
    probe_at(lo);
  } else {
    star = gss(objective, lo, hi, tol);
  }

  if (any_bad) {
    constexpr int kGridPoints = 13;
    double best_energy = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGridPoints; ++i) {
      const double lambda =
          lo + (hi - lo) * static_cast<double>(i) / (kGridPoints - 1);
      const ProbeResult& p = probe_at(lambda);
      if (p.mean_final_energy < best_energy) {
        best_energy = p.mean_final_energy;
        star = lambda;
      }
    }
    result.used_fallback = true;
  }
  result.lambda_star = star;
  return result;
}

inline TuneResult tune_lambda(const Graph& g, const SolverConfig& base,
                              int trials, double lo, double hi,
                              double tol = 0.02, int threads = 1) {
  return tune_lambda(std::span<const Graph>(&g, 1), base, trials, lo, hi, tol,
                     threads);
}

// ---------------------------------------------------------------------------
// Hyperparameter exploration: one averaged relative-error curve per value.
// ---------------------------------------------------------------------------

struct GridRow {
  double value = 0.0;
  long iota = 0;
  double mean_rel_err = 0.0;
  double stderr_ = 0.0;
};

/// Sweeps one hyperparameter over `values`, runs `trials` seeded runs per
/// value and instance, and reports mean and standard error of the relative
/// error 1 - best_cut/best_known per iteration. `best_known` holds one
/// reference cut per graph. Supported parameters: lambda, p, epsilon, tau
/// (iterated solvers) and gamma, eta (lqa).
inline std::vector<GridRow> explore_grid(std::span<const Graph> graphs,
                                         const std::string& param,
                                         std::span<const double> values,
                                         const SolverConfig& base,
                                         const LqaConfig& lqa_base, int trials,
                                         std::span<const double> best_known,
                                         int threads = 1) {
  if (values.empty()) throw std::invalid_argument("explore_grid needs values");
  if (graphs.size() != best_known.size())
    throw std::invalid_argument("one best_known value per graph required");
  const bool is_lqa = base.algo == Algo::lqa;
  const std::size_t iters = is_lqa ? static_cast<std::size_t>(lqa_base.steps)
                                   : static_cast<std::size_t>(base.iterations);
  const std::size_t runs_per_value =
      graphs.size() * static_cast<std::size_t>(trials);

  std::vector<GridRow> rows;
  rows.reserve(values.size() * iters);
  std::vector<std::vector<double>> curves(runs_per_value);

  for (double value : values) {
    parallel_for_each_index(runs_per_value, threads, [&](std::size_t r) {
      const std::size_t gi = r / static_cast<std::size_t>(trials);
      const std::size_t t = r % static_cast<std::size_t>(trials);
      RunTrace trace;
      if (is_lqa) {
        LqaConfig cfg = lqa_base;
        if (param == "gamma") cfg.gamma = value;
        else if (param == "eta") cfg.eta = value;
        else throw std::invalid_argument("unknown lqa parameter: " + param);
        cfg.seed = lqa_base.seed + gi * 1000003ULL + t;
        trace = run_lqa(graphs[gi], cfg);
      } else {
        SolverConfig cfg = base;
        if (param == "lambda") cfg.lambda = value;
        else if (param == "p") cfg.p = value;
        else if (param == "epsilon") cfg.epsilon = value;
        else if (param == "tau") cfg.tau = value;
        else throw std::invalid_argument("unknown parameter: " + param);
        cfg.seed = base.seed + gi * 1000003ULL + t;
        cfg.threads = 1;
        trace = run(graphs[gi], cfg);
      }
      auto& c = curves[r];
      c.resize(iters);
      for (std::size_t i = 0; i < iters; ++i)
        c[i] = 1.0 - trace.records[i].best_cut / best_known[gi];
    });
    for (std::size_t i = 0; i < iters; ++i) {
      double mean = 0.0;
      for (const auto& c : curves) mean += c[i];
      mean /= static_cast<double>(runs_per_value);
      double var = 0.0;
      for (const auto& c : curves) var += (c[i] - mean) * (c[i] - mean);
      const double sem =
          runs_per_value > 1
              ? std::sqrt(var / static_cast<double>(runs_per_value - 1) /
                          static_cast<double>(runs_per_value))
              : 0.0;
      rows.push_back({value, static_cast<long>(i + 1), mean, sem});
    }
  }
  return rows;
}

inline std::vector<GridRow> explore_grid(const Graph& g,
                                         const std::string& param,
                                         std::span<const double> values,
                                         const SolverConfig& base,
                                         const LqaConfig& lqa_base, int trials,
                                         double best_known, int threads = 1) {
  return explore_grid(std::span<const Graph>(&g, 1), param, values, base,
                      lqa_base, trials, std::span<const double>(&best_known, 1),
                      threads);
}

/// CSV with header: param_value,iteration,mean_relative_error,stderr
inline void write_grid_csv(std::ostream& out,
                           std::span<const GridRow> rows) {
  out << "param_value,iteration,mean_relative_error,stderr\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%ld,%.17g,%.17g\n", r.value, r.iota,
                  r.mean_rel_err, r.stderr_);
    out << buf;
  }
}

}  // namespace qils
