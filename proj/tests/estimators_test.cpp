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

#include "mondrian/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace mondrian {
namespace {

Dataset random_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  RngStream rng(seed);
  Dataset data;
  data.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  data.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) data.x(i, j) = rng.uniform();
    // Labels of wildly different magnitudes make naive sums order dependent.
    data.y(i) = rng.normal() * std::pow(10.0, static_cast<double>(i % 7) * 3.0 - 9.0);
  }
  return data;
}

MondrianPartition draw(std::size_t d, double lifetime, std::uint64_t seed) {
  RngStream rng(seed);
  return sample_mondrian(BoxRegion::unit(d), lifetime, rng);
}

TEST(LeafStatistics, EmptyLeafPredictsZero) {
  LeafStatistics s;
  EXPECT_EQ(s.prediction(), 0.0);
  s.add(1.0);
  s.add(0.0);
  s.add(1.0);
  EXPECT_DOUBLE_EQ(s.prediction(), 2.0 / 3.0);
  EXPECT_EQ(s.class_counts()[0], 1u);
  EXPECT_EQ(s.class_counts()[1], 2u);
}

TEST(FitTree, LeafMeansMatchBruteForce) {
  const MondrianPartition p = draw(2, 4.0, 3);
  Dataset data = random_data(500, 2, 8);
  data.y = data.y.cwiseAbs().cwiseMin(1.0);
  const MondrianTreeModel model = fit_tree(p, data);
  EXPECT_EQ(model.n_seen(), 500u);
  const auto ids = leaf_ids(p);
  const auto cells = leaf_cells(p);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    long double sum = 0.0L;
    std::uint64_t count = 0;
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
      if (cells[k].contains(data.x.row(i).transpose())) {
        sum += data.y(i);
        ++count;
      }
    }
    EXPECT_EQ(model.leaf_stats(ids[k]).count, count);
    const double expected = count == 0 ? 0.0 : static_cast<double>(sum / count);
    EXPECT_NEAR(model.leaf_stats(ids[k]).prediction(), expected, 1e-15);
  }
}

TEST(FitTree, RejectsOutsidePointsAndBadLabels) {
  const MondrianPartition p = draw(2, 2.0, 1);
  Dataset data = random_data(5, 2, 2);
  data.x(3, 1) = 1.5;
  try {
    fit_tree(p, data);
    FAIL() << "expected ArgumentError";
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("sample 3"), std::string::npos);
  }
  MondrianTreeModel model(p);
  EXPECT_THROW(model.update(Vector::Constant(2, 0.5), std::nan("")), ArgumentError);
  EXPECT_THROW(model.update(Vector::Constant(2, 2.0), 1.0), ArgumentError);
}

TEST(FitTree, FoldOfUpdatesEqualsFit) {
  const MondrianPartition p = draw(3, 3.0, 5);
  const Dataset data = random_data(400, 3, 6);
  MondrianTreeModel folded(p);
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    folded = update_tree(folded, data.x.row(i).transpose(), data.y(i));
  }
  EXPECT_TRUE(folded == fit_tree(p, data));
}

TEST(FitTree, PermutationInvariantBitExact) {
  const MondrianPartition p = draw(2, 3.0, 12);
  const Dataset data = random_data(1000, 2, 13);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.x.rows()));
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(14);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
  }
  Dataset shuffled = data;
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.x.row(static_cast<Eigen::Index>(i)) = data.x.row(order[i]);
    shuffled.y(static_cast<Eigen::Index>(i)) = data.y(order[i]);
  }
  const MondrianTreeModel a = fit_tree(p, data);
  const MondrianTreeModel b = fit_tree(p, shuffled);
  EXPECT_TRUE(a == b);
  for (const NodeId leaf : leaf_ids(p)) {
    EXPECT_EQ(a.leaf_stats(leaf).prediction(), b.leaf_stats(leaf).prediction());
  }
}

TEST(FitForest, PredictionIsMeanOfTrees) {
  const Dataset data = random_data(300, 2, 20);
  const MondrianForestModel forest = fit_forest(BoxRegion::unit(2), 3.0, 25, data, 99);
  ASSERT_EQ(forest.size(), 25u);
  RngStream rng(4);
  for (int k = 0; k < 200; ++k) {
    const Vector x = Vector::NullaryExpr(2, [&] { return rng.uniform(); });
    long double sum = 0.0L;
    for (const auto& tree : forest.trees()) sum += predict_tree(tree, x);
    const double mean = static_cast<double>(sum / 25.0L);
    EXPECT_NEAR(predict_forest(forest, x), mean, 1e-14 * std::max(1.0, std::abs(mean)));
  }
}

TEST(FitForest, TreesAreIndependentOfForestSizeAndThreads) {
  const Dataset data = random_data(200, 2, 30);
  const BoxRegion box = BoxRegion::unit(2);
  const MondrianForestModel small = fit_forest(box, 2.0, 4, data, 7);
  ForestOptions threaded;
  threaded.threads = 3;
  const MondrianForestModel large = fit_forest(box, 2.0, 9, data, 7, threaded);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_TRUE(small.trees()[m] == large.trees()[m]);
  EXPECT_TRUE(fit_forest(box, 2.0, 9, data, 7) == large);
  RngStream rng = tree_stream(7, 2);
  EXPECT_TRUE(sample_mondrian(box, 2.0, rng) == small.trees()[2].partition());
  EXPECT_THROW(fit_forest(box, 2.0, 0, data, 7), ArgumentError);
}

TEST(FitForest, ClassifierTieGoesToOne) {
  Dataset data;
  data.x.resize(2, 1);
  data.x << 0.2, 0.8;
  data.y.resize(2);
  data.y << 0.0, 1.0;
  const MondrianForestModel forest = fit_forest(BoxRegion::unit(1), 0.0, 3, data, 1);
  const Vector x = Vector::Constant(1, 0.5);
  EXPECT_EQ(predict_forest(forest, x), 0.5);
  EXPECT_EQ(predict_class(forest, x), 1);
}

TEST(FitForest, BatchPredictionMatchesPointwise) {
  const Dataset data = random_data(100, 3, 40);
  const MondrianForestModel forest = fit_forest(BoxRegion::unit(3), 2.0, 5, data, 3);
  const Vector batch = predict_forest_batch(forest, data.x);
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    EXPECT_EQ(batch(i), predict_forest(forest, data.x.row(i).transpose()));
  }
}

TEST(Schedules, ClosedFormValues) {
  EXPECT_EQ(lifetime_schedule(ScheduleKind::lipschitz, 4096, 1), 16.0);
  EXPECT_EQ(lifetime_schedule(ScheduleKind::c2, 256, 4), 2.0);
  EXPECT_DOUBLE_EQ(lifetime_schedule(ScheduleKind::c2, 16, 4), std::sqrt(2.0));
  EXPECT_EQ(lifetime_schedule(ScheduleKind::consistency, 16, 2), 2.0);
  EXPECT_EQ(lifetime_schedule(ScheduleKind::constant, 100, 3, 2.5), 2.5);
  EXPECT_EQ(lifetime_schedule(ScheduleKind::lipschitz, 1000, 1, 2.0), 20.0);
  EXPECT_EQ(forest_size_schedule(ForestSizeKind::c2, 32, 4), 3u);
  EXPECT_EQ(forest_size_schedule(ForestSizeKind::c2, 16, 4), 2u);
  EXPECT_EQ(forest_size_schedule(ForestSizeKind::c2, 1, 4), 1u);
  EXPECT_THROW(lifetime_schedule(ScheduleKind::c2, 0, 1), ArgumentError);
  EXPECT_THROW(parse_schedule("cubic"), ArgumentError);
  EXPECT_EQ(parse_schedule("c2"), ScheduleKind::c2);
  EXPECT_EQ(to_string(ScheduleKind::consistency), "consistency");
}

TEST(Schedules, ConsistencyRatioDecreases) {
  for (std::size_t d = 1; d <= 4; ++d) {
    double previous = kInfinity;
    for (std::size_t n = 2; n <= (1u << 20); n *= 2) {
      const double ratio = std::pow(lifetime_schedule(ScheduleKind::consistency, n, d), static_cast<double>(d)) /
                           static_cast<double>(n);
      EXPECT_LT(ratio, previous);
      previous = ratio;
    }
  }
}

TEST(Schedules, ForestSizeMonotoneInN) {
  std::size_t previous = 0;
  for (std::size_t n = 1; n <= 100000; n = n * 3 + 1) {
    const std::size_t m = forest_size_schedule(ForestSizeKind::c2, n, 2);
    EXPECT_GE(m, previous);
    EXPECT_GE(m, 1u);
    previous = m;
  }
}

}  // namespace
}  // namespace mondrian
