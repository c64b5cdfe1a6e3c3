// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qils/solver.hpp"

namespace qils {

struct TrialResult {
  std::uint64_t seed = 0;
  RunTrace trace;
};

struct SolveReport {
  std::string instance;
  Algo algo = Algo::qiils;
  SolverConfig config;              // effective config (qiils/qiigs/ils)
  std::optional<double> gamma;     // lqa
  std::optional<double> eta;       // lqa
  std::vector<TrialResult> trials;
  std::optional<double> best_known;

  double best() const {
    double b = -std::numeric_limits<double>::infinity();
    for (const auto& t : trials) b = std::max(b, t.trace.best_cut);
    return b;
  }
  double average() const {
    double s = 0.0;
    for (const auto& t : trials) s += t.trace.best_cut;
    return trials.empty() ? 0.0 : s / static_cast<double>(trials.size());
  }
  /// Trials whose best cut equals the best-known value.
  std::optional<int> solved_count() const {
    if (!best_known) return std::nullopt;
    int k = 0;
    for (const auto& t : trials)
      if (std::abs(t.trace.best_cut - *best_known) < 1e-9) ++k;
    return k;
  }
};

inline std::string bits_to_string(const Bitstring& b) {
  std::string s(b.size(), '0');
  for (std::size_t i = 0; i < b.size(); ++i) s[i] = b[i] ? '1' : '0';
  return s;
}

inline nlohmann::json report_to_json(const SolveReport& rep) {
  nlohmann::json j;
  j["instance"] = rep.instance;
  j["algo"] = algo_name(rep.algo);
  nlohmann::json cfg;
  cfg["lambda"] = rep.config.lambda;
  cfg["p"] = rep.config.p;
  cfg["epsilon"] = rep.config.epsilon;
  cfg["sweeps"] = rep.config.max_sweeps;
  cfg["iterations"] = rep.config.iterations;
  cfg["tau"] = rep.config.tau;
  cfg["seed"] = rep.config.seed;
  if (rep.gamma) cfg["gamma"] = *rep.gamma;
  if (rep.eta) cfg["eta"] = *rep.eta;
  j["config"] = cfg;

  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : rep.trials) {
    nlohmann::json jt;
    jt["seed"] = t.seed;
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& r : t.trace.records) {
      iters.push_back({{"iota", r.iota},
                       {"best_cut", r.best_cut},
                       {"best_energy", r.best_energy},
                       {"sweeps", r.sweeps},
                       {"ms", r.ms}});
    }
    jt["iterations"] = std::move(iters);
    jt["final_bits"] = bits_to_string(t.trace.best_bits);
    trials.push_back(std::move(jt));
  }
  j["trials"] = std::move(trials);

  nlohmann::json summary;
  summary["best"] = rep.best();
  summary["avg"] = rep.average();
  if (rep.best_known) {
    summary["best_known"] = *rep.best_known;
    summary["solved"] = *rep.solved_count();
  } else {
    summary["best_known"] = nullptr;
    summary["solved"] = nullptr;
  }
  j["summary"] = std::move(summary);
  return j;
}

/// CSV mirror of the per-iteration numeric fields in the JSON trace.
inline void report_to_csv(const SolveReport& rep, std::ostream& out) {
  out << "seed,iota,best_cut,best_energy,sweeps,ms\n";
  char buf[200];
  for (const auto& t : rep.trials)
    for (const auto& r : t.trace.records) {
      std::snprintf(buf, sizeof buf, "%llu,%ld,%.17g,%.17g,%ld,%.17g\n",
                    static_cast<unsigned long long>(t.seed), r.iota, r.best_cut,
                    r.best_energy, r.sweeps, r.ms);
      out << buf;
    }
}

}  // namespace qils
