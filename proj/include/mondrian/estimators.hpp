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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mondrian/box.hpp"
#include "mondrian/exact_sum.hpp"
#include "mondrian/partition.hpp"

namespace mondrian {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Training sample: one point per row of `x`, labels in `y`.
struct Dataset {
  PointMatrix x;
  Vector y;

  std::size_t size() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
};

/// Per-leaf label aggregate. The sum is exact, so aggregates (and predictions)
/// do not depend on the order in which samples arrive.
struct LeafStatistics {
  std::uint64_t count = 0;
  ExactSum label_sum;

  void add(double y) {
    ++count;
    label_sum.add(y);
  }
  /// Leaf average; 0 for an empty leaf.
  double prediction() const {
    return count == 0 ? 0.0 : label_sum.value() / static_cast<double>(count);
  }
  /// {#zeros, #ones}, meaningful when labels are in {0, 1}.
  std::array<std::uint64_t, 2> class_counts() const;

  bool operator==(const LeafStatistics& other) const {
    return count == other.count && label_sum.value() == other.label_sum.value();
  }
};

/// A data-independent partition plus leaf aggregates (indexed by node id).
class MondrianTreeModel {
 public:
  explicit MondrianTreeModel(MondrianPartition partition);
  MondrianTreeModel(MondrianPartition partition, std::vector<LeafStatistics> stats);

  const MondrianPartition& partition() const { return partition_; }
  const std::vector<LeafStatistics>& stats() const { return stats_; }
  const LeafStatistics& leaf_stats(NodeId leaf) const { return stats_[leaf]; }
  std::uint64_t n_seen() const { return n_seen_; }

  /// Adds one labelled point (mutates; callers need exclusive access).
  template <typename Derived>
  void update(const Eigen::MatrixBase<Derived>& x, double y) {
    check_label(y);
    stats_[locate_leaf(partition_, x)].add(y);
    ++n_seen_;
  }

  /// Unchecked prediction for a point known to lie in the root box.
  template <typename Derived>
  double predict_unchecked(const Eigen::MatrixBase<Derived>& x) const {
    return stats_[partition_.descend(x)].prediction();
  }

  bool operator==(const MondrianTreeModel& other) const {
    return n_seen_ == other.n_seen_ && partition_ == other.partition_ && stats_ == other.stats_;
  }

 private:
  static void check_label(double y);

  MondrianPartition partition_;
  std::vector<LeafStatistics> stats_;
  std::uint64_t n_seen_ = 0;
};

/// Aggregates `data` into the leaves of `partition`. Throws ArgumentError
/// naming the first sample outside the root box.
MondrianTreeModel fit_tree(const MondrianPartition& partition, const Dataset& data);

/// Leaf average at x (0 in an empty leaf).
double predict_tree(const MondrianTreeModel& model, const Eigen::Ref<const Vector>& x);

/// Copy of `model` with (x, y) added; equivalent to refitting on data + (x, y).
MondrianTreeModel update_tree(const MondrianTreeModel& model, const Eigen::Ref<const Vector>& x,
                              double y);

struct ForestOptions {
  SampleOptions sample;
  unsigned threads = 1;
};

/// Ensemble of independently sampled Mondrian trees fitted on the same data.
/// Tree m is drawn from RngStream(master_seed).child(m), so the first M trees
/// of a larger forest are identical to an M-tree forest.
class MondrianForestModel {
 public:
  MondrianForestModel(std::vector<MondrianTreeModel> trees, double lifetime,
                      std::uint64_t master_seed);

  const std::vector<MondrianTreeModel>& trees() const { return trees_; }
  std::size_t size() const { return trees_.size(); }
  double lifetime() const { return lifetime_; }
  std::uint64_t master_seed() const { return master_seed_; }
  const BoxRegion& box() const { return trees_.front().partition().root_box(); }

  /// Sum of tree predictions in tree order, divided by M.
  template <typename Derived>
  double predict_unchecked(const Eigen::MatrixBase<Derived>& x) const {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict_unchecked(x);
    return sum / static_cast<double>(trees_.size());
  }

  bool operator==(const MondrianForestModel&) const = default;

 private:
  std::vector<MondrianTreeModel> trees_;
  double lifetime_;
  std::uint64_t master_seed_;
};

/// Stream for tree `index` of a forest with the given master seed.
RngStream tree_stream(std::uint64_t master_seed, std::size_t index);

MondrianForestModel fit_forest(const BoxRegion& box, double lifetime, std::size_t trees,
                               const Dataset& data, std::uint64_t master_seed,
                               const ForestOptions& options = {});

double predict_forest(const MondrianForestModel& model, const Eigen::Ref<const Vector>& x);

/// Row-wise forest predictions.
Vector predict_forest_batch(const MondrianForestModel& model, const PointMatrix& points);

/// Plug-in classifier 1{f_hat(x) >= 1/2}.
int predict_class(const MondrianForestModel& model, const Eigen::Ref<const Vector>& x);

enum class ScheduleKind { consistency, lipschitz, c2, constant };
enum class ForestSizeKind { c2 };

ScheduleKind parse_schedule(const std::string& name);
std::string to_string(ScheduleKind kind);
ForestSizeKind parse_forest_size(const std::string& name);

/// lipschitz: scale n^{1/(d+2)}; c2: scale n^{1/(d+4)};
/// consistency: scale n^{1/(2d)} (one admissible choice with lambda^d / n -> 0);
/// constant: scale.
double lifetime_schedule(ScheduleKind kind, std::size_t n, std::size_t d, double scale = 1.0);

/// ceil(scale n^{2/(d+4)}), at least 1.
std::size_t forest_size_schedule(ForestSizeKind kind, std::size_t n, std::size_t d,
                                 double scale = 1.0);

}  // namespace mondrian
