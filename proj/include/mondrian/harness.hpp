/*
 * Copyright 2026 The Mondrian Forest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mondrian/box.hpp"
#include "mondrian/estimators.hpp"
#include "mondrian/tasks.hpp"

namespace mondrian::harness {

/// One PASS/FAIL decision with everything needed to re-derive it.
struct Verdict {
  std::string name;
  std::string rule;  // human-readable rule, e.g. "|mean - oracle| <= 4 SE"
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t sample_size = 0;
  bool pass = false;
};

/// One row of a risk grid. `oracle` is NaN when no closed form applies.
struct GridPoint {
  std::string label;
  std::size_t n = 0;
  double lifetime = 0.0;
  std::size_t trees = 0;
  double risk = 0.0;
  double se = 0.0;
  std::size_t replicates = 0;
  double oracle = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::vector<GridPoint> grid;
  std::map<std::string, double> metrics;
  std::vector<Verdict> verdicts;
  double wall_clock_seconds = 0.0;

  bool passed() const;
  /// Wall-clock time is only serialized on request, so that reports are
  /// byte-identical across runs with the same configuration.
  nlohmann::json to_json(bool include_timing = false) const;
  /// CSV columns: label,n,lifetime,trees,risk,se,replicates,oracle. Reports
  /// without a grid emit their verdicts instead, with columns
  /// name,statistic,threshold,sample_size,pass,rule.
  std::string to_csv() const;
};

struct RunOptions {
  unsigned threads = 1;
  std::size_t n_test = 2000;
};

struct RiskEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t replicates = 0;
};

/// Monte-Carlo quadratic risk E[(f_hat(X) - f(X))^2] of an M-tree forest.
/// Each replicate draws a fresh dataset, a fresh forest and n_test fresh test
/// points, and compares predictions with the true regression function.
RiskEstimate estimate_risk(const SyntheticTask& task, std::size_t n, double lifetime,
                           std::size_t trees, std::size_t replicates, std::uint64_t seed,
                           const RunOptions& options = {});

/// Risk of the forests made of the first m trees, for each m in `checkpoints`
/// (increasing). All checkpoints share data, test points and trees.
std::vector<RiskEstimate> estimate_risk_curve(const SyntheticTask& task, std::size_t n,
                                              double lifetime,
                                              const std::vector<std::size_t>& checkpoints,
                                              std::size_t replicates, std::uint64_t seed,
                                              const RunOptions& options = {});

/// Excess 0-1 risk L(g_hat) - L(g*) of the plug-in classifier, estimated as
/// the test mean of |2 eta(X) - 1| 1{g_hat(X) != g*(X)}.
RiskEstimate estimate_excess_risk(const SyntheticTask& task, std::size_t n, double lifetime,
                                  std::size_t trees, std::size_t replicates, std::uint64_t seed,
                                  const RunOptions& options = {});

ExperimentReport verify_leaf_count(std::size_t d, double lifetime, std::size_t samples,
                                   std::uint64_t seed);

ExperimentReport verify_cell_distribution(std::size_t d, double lifetime, const Vector& x,
                                          std::size_t samples, std::uint64_t seed);

ExperimentReport verify_diameter(std::size_t d, double lifetime, const Vector& x,
                                 std::size_t samples, std::uint64_t seed);

ExperimentReport verify_restriction(std::size_t d, double lifetime, const BoxRegion& sub,
                                    std::size_t samples, std::uint64_t seed);

/// Integrated squared bias of single trees on f(x) = 1 + x, computed exactly
/// per sampled partition (a cell [l, r] contributes (r - l)^3 / 12), against
/// the closed form; plus cell-average means at a few x against tilde_f_1d.
ExperimentReport verify_tree_bias_1d(double lifetime, std::size_t replicates, std::uint64_t seed,
                                     double relative_tolerance = 0.02);

/// Forest size rule: a fixed M, or the c2 schedule ceil(scale n^{2/(d+4)}).
struct ForestSizeRule {
  bool scheduled = false;
  std::size_t fixed = 1;
  double scale = 1.0;

  std::size_t trees_for(std::size_t n, std::size_t d) const;
  std::string describe() const;
};

struct SweepConfig {
  std::vector<std::size_t> n_grid;
  ScheduleKind schedule = ScheduleKind::lipschitz;
  double scale = 1.0;
  ForestSizeRule forest_size;
  std::size_t replicates = 20;
  double slope_tolerance = 0.15;
};

/// Risk at each n with lambda_n from the schedule, then the OLS slope of
/// log risk on log n compared with the schedule's theoretical exponent.
ExperimentReport rate_sweep(const SyntheticTask& task, const SweepConfig& config,
                            std::uint64_t seed, const RunOptions& options = {});

struct TreeVsForestConfig {
  std::size_t n = 3000;
  std::vector<double> lifetime_grid;  // empty: 12-point geometric grid on [1, n]
  std::size_t forest_trees = 100;
  std::size_t replicates = 20;
  double sigma = 1.0;
};

/// 12-point geometric grid on [1, n].
std::vector<double> default_lifetime_grid(std::size_t n);

/// Single trees on f(x) = 1 + x against the explicit lower bound, and
/// single trees vs forests on f(x) = sin(pi x), each minimized over the grid.
ExperimentReport tree_vs_forest(const TreeVsForestConfig& config, std::uint64_t seed,
                                const RunOptions& options = {});

/// Excess classification risk across n; PASS iff it decreases by more than
/// 2 SE (of the difference) between consecutive grid points.
ExperimentReport classification_sweep(const SyntheticTask& task, const SweepConfig& config,
                                       std::uint64_t seed, const RunOptions& options = {});

}  // namespace mondrian::harness
