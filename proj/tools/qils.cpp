// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solve / tune / gen / bench.
// Exit codes: 0 ok, 1 usage error, 2 I/O error, 3 numeric failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qils/baselines.hpp"
#include "qils/graph.hpp"
#include "qils/oracle.hpp"
#include "qils/parallel.hpp"
#include "qils/presets.hpp"
#include "qils/solver.hpp"
#include "qils/trace_io.hpp"
#include "qils/tuning.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

qils::Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  try {
    return qils::parse_gset(in);
  } catch (const qils::ParseError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string instance_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

struct SolveOptions {
  std::string graph_path;
  std::string algo;  // empty: take the preset's algorithm, or qiils
  std::optional<double> lambda, p, eps, tau, gamma, eta;
  std::optional<int> sweeps;
  std::optional<long> iters;
  std::uint64_t seed = 1;
  int trials = 1;
  std::string preset;
  std::optional<double> best_known;
  std::string out_path;
  std::string format = "json";
  int threads = qils::default_thread_count();
};

int cmd_solve(const SolveOptions& opt) {
  qils::Graph g = load_graph(opt.graph_path);
  const std::string name = instance_name(opt.graph_path);

  qils::SolverConfig cfg;
  std::optional<double> gamma, eta;
  std::string algo = opt.algo;

  if (!opt.preset.empty()) {
    const qils::Preset* pre = qils::find_preset(opt.preset);
    if (!pre) throw UsageError("preset not found: " + opt.preset);
    if (algo.empty()) algo = qils::algo_name(pre->algo);
    if (auto v = pre->single_p()) cfg.p = *v;
    if (pre->sweeps) cfg.max_sweeps = *pre->sweeps;
    if (auto v = pre->single_iterations()) cfg.iterations = *v;
    if (auto v = pre->single_lambda()) cfg.lambda = *v;
    gamma = pre->gamma;
    eta = pre->eta;
  }
  if (algo.empty()) algo = "qiils";

  cfg.algo = qils::algo_from_name(algo);
  if (opt.lambda) cfg.lambda = *opt.lambda;
  if (opt.p) cfg.p = *opt.p;
  if (opt.eps) cfg.epsilon = *opt.eps;
  if (opt.sweeps) cfg.max_sweeps = *opt.sweeps;
  if (opt.iters) cfg.iterations = *opt.iters;
  if (opt.tau) cfg.tau = *opt.tau;
  if (opt.gamma) gamma = *opt.gamma;
  if (opt.eta) eta = *opt.eta;
  cfg.seed = opt.seed;

  qils::BestKnownRegistry registry;
  if (opt.best_known) registry.set(name, *opt.best_known);

  qils::SolveReport rep;
  rep.instance = name;
  rep.algo = cfg.algo;
  rep.best_known = registry.lookup(name);

  rep.trials.resize(static_cast<std::size_t>(opt.trials));
  if (cfg.algo == qils::Algo::lqa) {
    qils::LqaConfig lcfg;
    if (gamma) lcfg.gamma = *gamma;
    if (eta) lcfg.eta = *eta;
    lcfg.steps = cfg.max_sweeps;
    try {
      lcfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    qils::parallel_for_each_index(
        rep.trials.size(), opt.threads, [&](std::size_t t) {
          qils::LqaConfig c = lcfg;
          c.seed = opt.seed + t;
          rep.trials[t] = {c.seed, qils::run_lqa(g, c)};
        });
    rep.gamma = lcfg.gamma;
    rep.eta = lcfg.eta;
  } else if (cfg.algo == qils::Algo::gcs) {
    if (g.n() > 16)
      throw UsageError("gcs runs on n <= 16 (dense statevector)");
    qils::parallel_for_each_index(
        rep.trials.size(), opt.threads, [&](std::size_t t) {
          rep.trials[t] = {opt.seed + t,
                           qils::run_gcs(g, cfg.max_sweeps, cfg.tau,
                                         opt.seed + t)};
        });
  } else {
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    qils::parallel_for_each_index(
        rep.trials.size(), opt.threads, [&](std::size_t t) {
          qils::SolverConfig c = cfg;
          c.seed = opt.seed + t;
          c.threads = 1;
          rep.trials[t] = {c.seed, qils::run(g, c)};
        });
  }
  rep.config = cfg;

  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path);
    if (!out) throw IoError("cannot write: " + opt.out_path);
    if (opt.format == "json")
      out << qils::report_to_json(rep).dump(2) << '\n';
    else
      qils::report_to_csv(rep, out);
  }

  std::printf("instance %s  algo %s  trials %d\n", rep.instance.c_str(),
              qils::algo_name(rep.algo), opt.trials);
  for (const auto& t : rep.trials)
    std::printf("  seed %llu  best cut %.6f  best energy %.6f  sweeps %ld\n",
                static_cast<unsigned long long>(t.seed), t.trace.best_cut,
                t.trace.best_energy, t.trace.total_sweeps);
  if (rep.best_known) {
    std::printf("summary: best %.6f  avg %.6f  solved %d/%d (best known %.6f)\n",
                rep.best(), rep.average(), *rep.solved_count(), opt.trials,
                *rep.best_known);
  } else {
    std::printf("summary: best %.6f  avg %.6f (no best-known value)\n",
                rep.best(), rep.average());
  }
  return kExitOk;
}

struct TuneOptions {
  std::string graph_path;
  std::string family;
  int n = 50;
  int d = 3;
  int count = 20;
  int trials = 2;
  double lo = 0.05, hi = 0.95, tol = 0.02;
  std::optional<double> p;
  int sweeps = 80;
  long iters = 20;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string grid_param;
  std::vector<double> grid_values;
  std::optional<double> best_known;
  int threads = qils::default_thread_count();
};

int cmd_tune(const TuneOptions& opt) {
  std::vector<qils::Graph> graphs;
  std::string name;
  if (!opt.graph_path.empty()) {
    graphs.push_back(load_graph(opt.graph_path));
    name = instance_name(opt.graph_path);
  } else if (!opt.family.empty()) {
    const bool weighted = opt.family == "w3r";
    if (!weighted && opt.family != "u3r")
      throw UsageError("family must be u3r or w3r");
    for (int i = 0; i < opt.count; ++i)
      graphs.push_back(
          qils::gen_regular(opt.n, opt.d, weighted, opt.seed + 7919ULL * i));
    name = opt.family;
  } else {
    throw UsageError("tune needs --graph or --family");
  }

  qils::SolverConfig base;
  base.algo = qils::Algo::qiils;
  base.p = opt.p.value_or(opt.family == "w3r" ? 0.3 : 0.5);
  base.max_sweeps = opt.sweeps;
  base.iterations = opt.iters;
  base.seed = opt.seed;

  if (!opt.grid_param.empty()) {
    if (opt.grid_values.empty()) throw UsageError("--values required with --param");
    std::vector<double> refs;
    for (const auto& g : graphs) {
      if (opt.best_known)
        refs.push_back(*opt.best_known);
      else if (g.n() <= 24)
        refs.push_back(qils::oracle::brute_force_maxcut(g).value);
      else
        throw UsageError(
            "exploration on n > 24 instances needs --best-known");
    }
    const auto rows = qils::explore_grid(
        graphs, opt.grid_param, opt.grid_values, base, qils::LqaConfig{},
        opt.trials, refs, opt.threads);
    if (!opt.out_path.empty()) {
      std::ofstream out(opt.out_path);
      if (!out) throw IoError("cannot write: " + opt.out_path);
      qils::write_grid_csv(out, rows);
    } else {
      qils::write_grid_csv(std::cout, rows);
    }
    return kExitOk;
  }

  const qils::TuneResult res = qils::tune_lambda(
      graphs, base, opt.trials, opt.lo, opt.hi, opt.tol, opt.threads);

  std::printf("tune %s: lambda* = %.6f%s\n", name.c_str(), res.lambda_star,
              res.used_fallback ? " (fallback: lowest mean final energy)" : "");
  std::printf("%-10s %-12s %-12s %-14s\n", "lambda", "decay_m", "residual",
              "mean_final_E");
  for (const auto& p : res.probes)
    std::printf("%-10.6f %-12.6g %-12.6g %-14.6f\n", p.lambda,
                p.fit_ok ? p.fit.m : 0.0, p.fit.residual, p.mean_final_energy);

  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path);
    if (!out) throw IoError("cannot write: " + opt.out_path);
    out << "lambda,decay_m,residual,mean_final_energy\n";
    for (const auto& p : res.probes) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.lambda,
                    p.fit_ok ? p.fit.m : 0.0, p.fit.residual,
                    p.mean_final_energy);
      out << buf;
    }
  }
  return kExitOk;
}

struct GenOptions {
  int n = 0, d = 0;
  bool weighted = false;
  std::uint64_t seed = 1;
  std::string out_path;
};

int cmd_gen(const GenOptions& opt) {
  qils::Graph g = [&] {
    try {
      return qils::gen_regular(opt.n, opt.d, opt.weighted, opt.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  if (opt.out_path.empty()) {
    qils::serialize_gset(g, std::cout);
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw IoError("cannot write: " + opt.out_path);
    qils::serialize_gset(g, out);
  }
  return kExitOk;
}

struct BenchOptions {
  std::string graph_path;
  std::string algo = "qiils";
  int sweeps = 200;
  int repeats = 20;
  double lambda = 0.5, p = 0.3, tau = 0.1, gamma = 0.5, eta = 0.5;
  std::uint64_t seed = 1;
};

// Median wall time of one full pass over all variables, across `repeats`
// freshly seeded runs of `sweeps` passes each.
int cmd_bench(const BenchOptions& opt) {
  qils::Graph g = load_graph(opt.graph_path);
  const qils::Algo algo = qils::algo_from_name(opt.algo);
  const std::size_t n = static_cast<std::size_t>(g.n());

  std::vector<double> per_sweep_ms;
  per_sweep_ms.reserve(static_cast<std::size_t>(opt.repeats));
  using clock = std::chrono::steady_clock;

  for (int rep = 0; rep < opt.repeats; ++rep) {
    qils::Rng rng(opt.seed + static_cast<std::uint64_t>(rep));
    qils::AngleVector theta(n);
    for (auto& t : theta)
      t = qils::uniform_unit(rng) * (std::numbers::pi / 2.0);
    qils::FieldCache cache(g, theta);
    std::vector<double> grad(n);

    const auto t0 = clock::now();
    for (int s = 0; s < opt.sweeps; ++s) {
      switch (algo) {
        case qils::Algo::qiils:
        case qils::Algo::ils:
          qils::sweep(g, algo == qils::Algo::ils ? 1.0 : opt.lambda, theta,
                      cache);
          break;
        case qils::Algo::qiigs: {
          qils::gradient(g, opt.lambda, theta, cache, grad);
          qils::global_step(theta, grad, opt.tau);
          cache.reset(theta);
          break;
        }
        case qils::Algo::lqa: {
          const double sfrac =
              static_cast<double>(s + 1) / static_cast<double>(opt.sweeps);
          qils::lqa_gradient(g, sfrac, opt.gamma, theta, cache, grad);
          for (std::size_t j = 0; j < n; ++j)
            theta[j] = std::clamp(theta[j] - opt.eta * grad[j], 0.0,
                                  std::numbers::pi / 2.0);
          cache.reset(theta);
          break;
        }
        case qils::Algo::gcs:
          throw UsageError("bench does not cover gcs (desk-scale only)");
      }
    }
    const double total_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    per_sweep_ms.push_back(total_ms / opt.sweeps);
  }

  std::sort(per_sweep_ms.begin(), per_sweep_ms.end());
  auto quantile = [&](double q) {
    const double pos = q * (per_sweep_ms.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= per_sweep_ms.size()) return per_sweep_ms.back();
    return per_sweep_ms[i] * (1.0 - frac) + per_sweep_ms[i + 1] * frac;
  };
  const double median = quantile(0.5);
  const double iqr = opt.repeats > 1 ? quantile(0.75) - quantile(0.25) : 0.0;

  std::printf("algorithm %s  median (ms) %.6f  IQR (ms) %.6f  "
              "(n=%d, edges=%zu, sweeps=%d, repeats=%d)\n",
              opt.algo.c_str(), median, iqr, g.n(), g.edge_count(), opt.sweeps,
              opt.repeats);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product-state solvers for MaxCut / Ising instances"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  solve->add_option("--graph", so.graph_path, "Gset-format instance file")
      ->required();
  solve->add_option("--algo", so.algo, "qiils|qiigs|ils|lqa|gcs")
      ->check(CLI::IsMember({"qiils", "qiigs", "ils", "lqa", "gcs"}));
  solve->add_option("--lambda", so.lambda, "interpolation weight in [0,1]");
  solve->add_option("--p", so.p, "perturbation strength in [0,1]");
  solve->add_option("--eps", so.eps, "convergence tolerance");
  solve->add_option("--sweeps", so.sweeps, "sweep cap per iteration");
  solve->add_option("--iters", so.iters, "outer iterations");
  solve->add_option("--tau", so.tau, "gradient step size (qiigs/gcs)");
  solve->add_option("--gamma", so.gamma, "classical rescale (lqa)");
  solve->add_option("--eta", so.eta, "step size (lqa)");
  solve->add_option("--seed", so.seed, "base seed; trial t uses seed+t");
  solve->add_option("--trials", so.trials, "number of seeded trials")
      ->check(CLI::PositiveNumber);
  solve->add_option("--preset", so.preset, "preset name, e.g. G1");
  solve->add_option("--best-known", so.best_known,
                    "reference cut for ratio/solved reporting");
  solve->add_option("--out", so.out_path, "trace output file");
  solve->add_option("--format", so.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--threads", so.threads, "worker pool size");

  TuneOptions to;
  auto* tune = app.add_subcommand("tune", "select lambda by decay-rate fit");
  tune->add_option("--graph", to.graph_path, "Gset-format instance file");
  tune->add_option("--family", to.family, "u3r|w3r instance family");
  tune->add_option("--n", to.n, "family: vertices per instance");
  tune->add_option("--d", to.d, "family: regular degree");
  tune->add_option("--count", to.count, "family: number of instances");
  tune->add_option("--trials", to.trials, "runs per instance per probe");
  tune->add_option("--lo", to.lo, "lambda bracket low");
  tune->add_option("--hi", to.hi, "lambda bracket high");
  tune->add_option("--tol", to.tol, "bracket width tolerance");
  tune->add_option("--p", to.p, "perturbation strength");
  tune->add_option("--sweeps", to.sweeps, "sweep cap per iteration");
  tune->add_option("--iters", to.iters, "iterations per run (>= 4)");
  tune->add_option("--seed", to.seed, "base seed");
  tune->add_option("--out", to.out_path, "write probe/exploration CSV here");
  tune->add_option("--param", to.grid_param,
                   "explore this parameter instead of tuning lambda");
  tune->add_option("--values", to.grid_values, "exploration values");
  tune->add_option("--best-known", to.best_known,
                   "reference cut for exploration error curves");
  tune->add_option("--threads", to.threads, "worker pool size");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "generate a random d-regular instance");
  gen->add_option("--n", go.n, "vertex count")->required();
  gen->add_option("--d", go.d, "degree")->required();
  gen->add_flag("--weighted", go.weighted, "weights uniform on (0,1]");
  gen->add_option("--seed", go.seed, "generator seed");
  gen->add_option("--out", go.out_path, "output file (stdout if omitted)");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "per-sweep timing report");
  bench->add_option("--graph", bo.graph_path, "Gset-format instance file")
      ->required();
  bench->add_option("--algo", bo.algo, "qiils|qiigs|ils|lqa")
      ->check(CLI::IsMember({"qiils", "qiigs", "ils", "lqa"}));
  bench->add_option("--sweeps", bo.sweeps, "sweeps per repeat")
      ->check(CLI::PositiveNumber);
  bench->add_option("--repeats", bo.repeats, "independent timed runs")
      ->check(CLI::PositiveNumber);
  bench->add_option("--lambda", bo.lambda, "interpolation weight");
  bench->add_option("--p", bo.p, "perturbation strength");
  bench->add_option("--tau", bo.tau, "qiigs step size");
  bench->add_option("--gamma", bo.gamma, "lqa rescale");
  bench->add_option("--eta", bo.eta, "lqa step size");
  bench->add_option("--seed", bo.seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(so);
    if (tune->parsed()) return cmd_tune(to);
    if (gen->parsed()) return cmd_gen(go);
    if (bench->parsed()) return cmd_bench(bo);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
