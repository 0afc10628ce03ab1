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

#include "mondrian/harness.hpp"

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "mondrian/errors.hpp"
#include "mondrian/oracles.hpp"
#include "mondrian/stats.hpp"

namespace mondrian::harness {
namespace {

RunOptions small_run(unsigned threads = 1) {
  RunOptions options;
  options.threads = threads;
  options.n_test = 300;
  return options;
}

TEST(EstimateRisk, NoiselessConstantWithOneLeafIsExact) {
  const SyntheticTask task(TaskKind::constant, 2, 0.0, 0.75);
  const RiskEstimate r = estimate_risk(task, 10, 0.0, 3, 4, 1, small_run());
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.se, 0.0);
  EXPECT_EQ(r.replicates, 4u);
}

TEST(EstimateRisk, MatchesDirectForestComputation) {
  const SyntheticTask task(TaskKind::lipschitz_d, 2, 0.3);
  const RunOptions options = small_run();
  const std::size_t n = 200, trees = 4, replicates = 3;
  const double lifetime = 3.0;
  const RiskEstimate r = estimate_risk(task, n, lifetime, trees, replicates, 42, options);

  // Replicate r: data from child(0), forest seed child(1), test points child(2).
  std::vector<double> risks;
  for (std::size_t k = 0; k < replicates; ++k) {
    const RngStream rep = RngStream(42).child(k);
    RngStream data_rng = rep.child(0), test_rng = rep.child(2);
    const Dataset data = task.sample(n, data_rng);
    const MondrianForestModel forest =
        fit_forest(BoxRegion::unit(2), lifetime, trees, data, rep.child(1).seed());
    const PointMatrix test = task.sample_points(options.n_test, test_rng);
    double sse = 0.0;
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
      const double e = predict_forest(forest, test.row(i).transpose()) - task.target(test.row(i).transpose());
      sse += e * e;
    }
    risks.push_back(sse / static_cast<double>(test.rows()));
  }
  const auto ms = stats::mean_se(risks);
  EXPECT_NEAR(r.mean, ms.mean, 1e-15 * ms.mean);
  EXPECT_NEAR(r.se, ms.se, 1e-12 * ms.se);
}

TEST(EstimateRisk, DeterministicAcrossThreadCounts) {
  const SyntheticTask task(TaskKind::sine_1d, 1, 0.5);
  const RiskEstimate a = estimate_risk(task, 100, 4.0, 3, 6, 9, small_run(1));
  const RiskEstimate b = estimate_risk(task, 100, 4.0, 3, 6, 9, small_run(3));
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.se, b.se);
}

TEST(EstimateRisk, CurveCheckpointsMatchSeparateForests) {
  const SyntheticTask task(TaskKind::sine_1d, 1, 0.5);
  const auto curve = estimate_risk_curve(task, 150, 5.0, {1, 4}, 3, 8, small_run());
  EXPECT_EQ(curve[0].mean, estimate_risk(task, 150, 5.0, 1, 3, 8, small_run()).mean);
  EXPECT_EQ(curve[1].mean, estimate_risk(task, 150, 5.0, 4, 3, 8, small_run()).mean);
  EXPECT_THROW(estimate_risk_curve(task, 150, 5.0, {4, 1}, 3, 8, small_run()), ArgumentError);
  EXPECT_THROW(estimate_risk(task, 150, 5.0, 1, 1, 8, small_run()), ArgumentError);
}

TEST(EstimateExcessRisk, DegenerateEtaGivesZero) {
  const SyntheticTask sure(TaskKind::classification_constant, 1, 0.0, 1.0);
  EXPECT_EQ(estimate_excess_risk(sure, 5, 0.0, 2, 3, 1, small_run()).mean, 0.0);
  const SyntheticTask coin(TaskKind::classification_constant, 2, 0.0, 0.5);
  EXPECT_EQ(estimate_excess_risk(coin, 50, 2.0, 2, 3, 1, small_run()).mean, 0.0);
  EXPECT_THROW(estimate_excess_risk(SyntheticTask(TaskKind::sine_1d, 1), 5, 1.0, 1, 2, 1), ArgumentError);
}

TEST(VerifyLeafCount, ZeroLifetimeAndSmallRun) {
  const ExperimentReport zero = verify_leaf_count(2, 0.0, 100, 1);
  EXPECT_EQ(zero.metrics.at("mean"), 1.0);
  EXPECT_EQ(zero.metrics.at("se"), 0.0);
  EXPECT_TRUE(zero.passed());

  const ExperimentReport r = verify_leaf_count(1, 3.0, 3000, 2);
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(r.verdicts.size(), 2u);
  EXPECT_EQ(r.verdicts[1].name, "poisson_split_count");
  EXPECT_FALSE(r.to_json().contains("wall_clock_seconds"));
  EXPECT_TRUE(r.to_json(true).contains("wall_clock_seconds"));
  EXPECT_EQ(r.to_json().dump(), verify_leaf_count(1, 3.0, 3000, 2).to_json().dump());
}

TEST(VerifyCellDistribution, PassesAndValidatesPoint) {
  const ExperimentReport r = verify_cell_distribution(1, 10.0, Vector::Constant(1, 0.5), 2000, 3);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.metrics.at("atom_mass_lower_0"), std::exp(-5.0), 1e-15);
  EXPECT_THROW(verify_cell_distribution(1, 10.0, Vector::Constant(1, 0.0), 100, 3), ArgumentError);
  EXPECT_THROW(verify_cell_distribution(2, 10.0, Vector::Constant(1, 0.5), 100, 3), ArgumentError);
}

TEST(VerifyDiameter, Passes) {
  const ExperimentReport r = verify_diameter(2, 4.0, Vector::Constant(2, 0.5), 2000, 4);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.verdicts.size(), 11u);
}

TEST(VerifyRestriction, FullBoxAndZeroLifetime) {
  const ExperimentReport zero = verify_restriction(2, 0.0, BoxRegion::unit(2), 50, 5);
  EXPECT_EQ(zero.metrics.at("restricted_mean"), 1.0);
  EXPECT_TRUE(zero.passed());
  const ExperimentReport full = verify_restriction(2, 2.0, BoxRegion::unit(2), 2000, 5);
  EXPECT_TRUE(full.passed());
  EXPECT_EQ(full.metrics.at("oracle"), 9.0);
  Vector lo(2), hi(2);
  lo << 0.5, 0.5;
  hi << 1.5, 1.0;
  EXPECT_THROW(verify_restriction(2, 2.0, BoxRegion(lo, hi), 10, 5), ArgumentError);
}

TEST(VerifyTreeBias, SmallRunPasses) {
  const ExperimentReport r = verify_tree_bias_1d(2.0, 20000, 6, 0.05);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.metrics.at("bias_oracle"), std::exp(-2.0) / 4.0, 1e-16);
}

TEST(RateSweep, PreconditionsAndVerdicts) {
  const SyntheticTask task(TaskKind::lipschitz_1d, 1, 0.1);
  SweepConfig config;
  config.n_grid = {64, 128};
  EXPECT_THROW(rate_sweep(task, config, 1), ArgumentError);

  config.n_grid = {128, 256, 512, 1024};
  config.replicates = 5;
  const ExperimentReport r = rate_sweep(task, config, 1, small_run());
  ASSERT_EQ(r.grid.size(), 4u);
  EXPECT_EQ(r.grid[1].lifetime, std::cbrt(256.0));
  EXPECT_EQ(r.verdicts.front().name, "log_log_slope");
  EXPECT_NEAR(r.metrics.at("target_slope"), -2.0 / 3.0, 1e-15);
  EXPECT_TRUE(std::isfinite(r.grid[0].oracle));

  config.schedule = ScheduleKind::constant;
  config.scale = 2.0;
  const ExperimentReport flat = rate_sweep(task, config, 1, small_run());
  EXPECT_EQ(flat.verdicts.front().name, "bias_floor");
  EXPECT_EQ(flat.grid[3].lifetime, 2.0);

  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "label,n,lifetime,trees,risk,se,replicates,oracle");
}

TEST(ForestSizeRule, FixedAndScheduled) {
  ForestSizeRule rule;
  rule.fixed = 7;
  EXPECT_EQ(rule.trees_for(1000, 2), 7u);
  rule.scheduled = true;
  EXPECT_EQ(rule.trees_for(32, 4), 3u);
}

TEST(TreeVsForest, Preconditions) {
  TreeVsForestConfig config;
  config.n = 17;
  EXPECT_THROW(tree_vs_forest(config, 1), ArgumentError);
  const auto grid = default_lifetime_grid(3000);
  ASSERT_EQ(grid.size(), 12u);
  EXPECT_EQ(grid.front(), 1.0);
  EXPECT_EQ(grid.back(), 3000.0);
  for (std::size_t k = 1; k < grid.size(); ++k) EXPECT_GT(grid[k], grid[k - 1]);
}

TEST(TreeVsForest, SmallRunStructure) {
  TreeVsForestConfig config;
  config.n = 200;
  config.lifetime_grid = {2.0, 8.0};
  config.forest_trees = 5;
  config.replicates = 3;
  const ExperimentReport r = tree_vs_forest(config, 2, small_run());
  ASSERT_EQ(r.grid.size(), 6u);
  EXPECT_EQ(r.grid[0].label, "linear_tree");
  EXPECT_EQ(r.grid[0].oracle, oracles::tree_bias_exact_1d(2.0));
  EXPECT_EQ(r.verdicts.size(), 2u);
  EXPECT_NEAR(r.metrics.at("tree_lower_bound"), oracles::tree_lower_bound_1d(200, 1.0), 1e-18);
}

TEST(ClassificationSweep, ReportsBayesRiskAndPairwiseVerdicts) {
  const SyntheticTask task(TaskKind::classification_d, 1);
  SweepConfig config;
  config.n_grid = {64, 256, 1024};
  config.forest_size.fixed = 5;
  config.replicates = 4;
  const ExperimentReport r = classification_sweep(task, config, 3, small_run());
  EXPECT_NEAR(r.metrics.at("bayes_risk"), 0.5 - 1.0 / 3.14159265358979323846, 1e-12);
  EXPECT_EQ(r.verdicts.size(), 2u);
  EXPECT_THROW(classification_sweep(SyntheticTask(TaskKind::sine_1d, 1), config, 3), ArgumentError);
}

}  // namespace
}  // namespace mondrian::harness
