// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qils/solver.hpp"

namespace qils {

/// One row of the shipped hyperparameter table. Fields a row does not pin are
/// left empty; rows that sweep a parameter carry the whole value list.
struct Preset {
  std::string name;
  Algo algo = Algo::qiils;
  std::vector<double> p;        // perturbation strength(s)
  std::optional<int> sweeps;    // per-iteration sweep cap
  std::vector<long> iterations; // outer iteration budget(s)
  std::vector<double> lambda;   // interpolation weight(s)
  // Baseline-specific fields (lqa rows).
  std::optional<double> gamma;
  std::optional<double> eta;

  std::optional<double> single_p() const {
    return p.size() == 1 ? std::optional<double>(p[0]) : std::nullopt;
  }
  std::optional<long> single_iterations() const {
    return iterations.size() == 1 ? std::optional<long>(iterations[0])
                                  : std::nullopt;
  }
  std::optional<double> single_lambda() const {
    return lambda.size() == 1 ? std::optional<double>(lambda[0]) : std::nullopt;
  }
};

/// The full shipped preset table: benchmark-scenario rows first, then the
/// per-instance rows. Gset lqa runs use gamma = eta = 0.5.
inline const std::vector<Preset>& preset_table() {
  static const std::vector<Preset> table = {
      {"torus800-qiils", Algo::qiils, {0.2}, 200, {}, {}, {}, {}},
      {"torus800-ils", Algo::ils, {0.03}, 200, {}, {1.0}, {}, {}},
      {"u3r50-lambda-scan", Algo::qiils, {0.5}, 80, {1, 2, 4, 8}, {}, {}, {}},
      {"u3r-iters", Algo::qiils, {0.5}, 80, {}, {0.5}, {}, {}},
      {"u3r-single-iter", Algo::qiils, {}, 80, {1}, {0.5}, {}, {}},
      {"u3r200-p-scan", Algo::qiils, {0.1, 0.3, 0.5, 0.7}, 80, {}, {0.5}, {}, {}},
      {"w3r200-p-scan", Algo::qiils, {0.1, 0.3, 0.5, 0.7}, 80, {}, {0.6}, {}, {}},
      {"u3r-benchmark", Algo::qiils, {0.5}, 80, {}, {0.55}, {}, {}},
      {"u3r-benchmark-single", Algo::qiils, {}, 80, {1}, {0.55}, {}, {}},
      {"w3r-benchmark", Algo::qiils, {0.5}, 80, {}, {0.65}, {}, {}},
      {"w3r-benchmark-single", Algo::qiils, {}, 200, {1}, {0.65}, {}, {}},
      {"torus20k-qiigs", Algo::qiigs, {0.15}, 200, {10000}, {0.35}, {}, {}},
      {"torus20k-qiigs-single", Algo::qiigs, {}, 200, {1}, {0.35}, {}, {}},
      {"w3r50-lambda-scan", Algo::qiils, {0.3}, 80, {1, 2, 4, 8}, {}, {}, {}},
      {"w3r-iters", Algo::qiils, {0.3}, 80, {}, {0.6}, {}, {}},
      {"w3r50-single-iter", Algo::qiils, {0.3}, 80, {1}, {0.6}, {}, {}},
      {"g1-p-scan-qiils", Algo::qiils, {0.1, 0.2, 0.3, 0.4}, {}, {}, {0.3}, {}, {}},
      {"g1-p-scan-ils", Algo::ils, {0.1, 0.2, 0.3, 0.4}, {}, {}, {1.0}, {}, {}},
      {"g6-p-scan-qiils", Algo::qiils, {0.1, 0.2, 0.3, 0.4}, {}, {}, {0.4}, {}, {}},
      {"g6-p-scan-ils", Algo::ils, {0.1, 0.2, 0.3, 0.4}, {}, {}, {1.0}, {}, {}},
      {"g12-p-scan-qiils", Algo::qiils, {0.1, 0.2, 0.3, 0.4}, {}, {}, {0.3}, {}, {}},
      {"g12-p-scan-ils", Algo::ils, {0.01, 0.03, 0.05, 0.1}, {}, {}, {1.0}, {}, {}},
      {"u3r-lambda-select", Algo::qiils, {0.5}, 80, {1, 2, 4}, {}, {}, {}},
      {"w3r-lambda-select", Algo::qiils, {0.3}, 80, {1, 2, 4, 8}, {}, {}, {}},
      {"G1", Algo::qiils, {0.3}, 200, {1000}, {0.38}, {}, {}},
      {"G2", Algo::qiils, {0.3}, 200, {1000}, {0.41}, {}, {}},
      {"G3", Algo::qiils, {0.3}, 200, {1000}, {0.38}, {}, {}},
      {"G4", Algo::qiils, {0.3}, 200, {1000}, {0.38}, {}, {}},
      {"G5", Algo::qiils, {0.3}, 200, {1000}, {0.3}, {}, {}},
      {"G6", Algo::qiils, {0.2}, 200, {1000}, {0.42}, {}, {}},
      {"G7", Algo::qiils, {0.2}, 200, {1000}, {0.41}, {}, {}},
      {"G8", Algo::qiils, {0.2}, 200, {1000}, {0.38}, {}, {}},
      {"G9", Algo::qiils, {0.2}, 200, {1000}, {0.41}, {}, {}},
      {"G10", Algo::qiils, {0.2}, 200, {1000}, {0.38}, {}, {}},
      {"G12", Algo::qiils, {0.2}, 200, {}, {}, {}, {}},
      {"G81", Algo::qiigs, {0.15}, 200, {10000}, {0.35}, {}, {}},
      {"lqa-gset", Algo::lqa, {}, {}, {}, {}, 0.5, 0.5},
  };
  return table;
}

inline const Preset* find_preset(const std::string& name) {
  for (const auto& p : preset_table())
    if (p.name == name) return &p;
  return nullptr;
}

/// Best-known cut values; ships the G1-G10 reference solutions and accepts
/// user-supplied entries for anything else. Instances without an entry are
/// reported with raw cut values only.
class BestKnownRegistry {
 public:
  BestKnownRegistry() {
    values_ = {
        {"G1", 11624.0}, {"G2", 11620.0}, {"G3", 11622.0}, {"G4", 11646.0},
        {"G5", 11631.0}, {"G6", 2178.0},  {"G7", 2006.0},  {"G8", 2005.0},
        {"G9", 2054.0},  {"G10", 2000.0},
    };
  }

  std::optional<double> lookup(const std::string& instance) const {
    const auto it = values_.find(instance);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  void set(const std::string& instance, double best_known) {
    if (!(best_known > 0.0))
      throw std::invalid_argument("best-known value must be positive");
    values_[instance] = best_known;
  }

 private:
  std::map<std::string, double> values_;
};

}  // namespace qils
