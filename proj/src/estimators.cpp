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

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "mondrian/parallel.hpp"

namespace mondrian {
namespace {

// n^{1/k} with one Newton step, so exact powers come out exact.
double integer_root(double n, int k) {
  double r = std::pow(n, 1.0 / k);
  if (r > 0.0) r -= (std::pow(r, k) - n) / (k * std::pow(r, k - 1));
  return r;
}

void check_point(const MondrianPartition& partition, const Eigen::Ref<const Vector>& x,
                 const char* where) {
  if (static_cast<std::size_t>(x.size()) != partition.dim() || !partition.root_box().contains(x)) {
    throw ArgumentError(std::string(where) + ": point outside the root box");
  }
}

}  // namespace

std::array<std::uint64_t, 2> LeafStatistics::class_counts() const {
  const auto ones = static_cast<std::uint64_t>(std::llround(label_sum.value()));
  return {count - ones, ones};
}

MondrianTreeModel::MondrianTreeModel(MondrianPartition partition)
    : partition_(std::move(partition)), stats_(partition_.node_count()) {}

MondrianTreeModel::MondrianTreeModel(MondrianPartition partition, std::vector<LeafStatistics> stats)
    : partition_(std::move(partition)), stats_(std::move(stats)) {
  if (stats_.size() != partition_.node_count()) {
    throw ArgumentError("MondrianTreeModel: one LeafStatistics per node expected");
  }
  for (NodeId i = 0; i < stats_.size(); ++i) {
    if (!partition_.node(i).is_leaf() && stats_[i].count != 0) {
      throw ArgumentError("MondrianTreeModel: internal node carries samples");
    }
    n_seen_ += stats_[i].count;
  }
}

void MondrianTreeModel::check_label(double y) {
  if (!std::isfinite(y)) throw ArgumentError("label must be finite");
}

MondrianTreeModel fit_tree(const MondrianPartition& partition, const Dataset& data) {
  if (data.size() > 0 && data.dim() != partition.dim()) {
    throw ArgumentError("fit_tree: data dimension does not match the partition");
  }
  if (static_cast<std::size_t>(data.y.size()) != data.size()) {
    throw ArgumentError("fit_tree: x and y have different lengths");
  }
  MondrianTreeModel model(partition);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.x.row(static_cast<Eigen::Index>(i));
    if (!partition.root_box().contains(row)) {
      throw ArgumentError("fit_tree: sample " + std::to_string(i) + " is outside the root box");
    }
    model.update(row, data.y(static_cast<Eigen::Index>(i)));
  }
  return model;
}

double predict_tree(const MondrianTreeModel& model, const Eigen::Ref<const Vector>& x) {
  check_point(model.partition(), x, "predict_tree");
  return model.predict_unchecked(x);
}

MondrianTreeModel update_tree(const MondrianTreeModel& model, const Eigen::Ref<const Vector>& x,
                              double y) {
  MondrianTreeModel next = model;
  next.update(x, y);
  return next;
}

MondrianForestModel::MondrianForestModel(std::vector<MondrianTreeModel> trees, double lifetime,
                                         std::uint64_t master_seed)
    : trees_(std::move(trees)), lifetime_(lifetime), master_seed_(master_seed) {
  if (trees_.empty()) throw ArgumentError("MondrianForestModel: at least one tree required");
}

RngStream tree_stream(std::uint64_t master_seed, std::size_t index) {
  return RngStream(master_seed).child(index);
}

MondrianForestModel fit_forest(const BoxRegion& box, double lifetime, std::size_t trees,
                               const Dataset& data, std::uint64_t master_seed,
                               const ForestOptions& options) {
  if (trees == 0) throw ArgumentError("fit_forest: M must be >= 1");
  std::vector<std::optional<MondrianTreeModel>> slots(trees);
  parallel_for(trees, options.threads, [&](std::size_t m) {
    RngStream rng = tree_stream(master_seed, m);
    slots[m].emplace(fit_tree(sample_mondrian(box, lifetime, rng, options.sample), data));
  });
  std::vector<MondrianTreeModel> fitted;
  fitted.reserve(trees);
  for (auto& slot : slots) fitted.push_back(std::move(*slot));
  return MondrianForestModel(std::move(fitted), lifetime, master_seed);
}

double predict_forest(const MondrianForestModel& model, const Eigen::Ref<const Vector>& x) {
  check_point(model.trees().front().partition(), x, "predict_forest");
  return model.predict_unchecked(x);
}

Vector predict_forest_batch(const MondrianForestModel& model, const PointMatrix& points) {
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out(i) = predict_forest(model, points.row(i).transpose());
  }
  return out;
}

int predict_class(const MondrianForestModel& model, const Eigen::Ref<const Vector>& x) {
  return predict_forest(model, x) >= 0.5 ? 1 : 0;
}

ScheduleKind parse_schedule(const std::string& name) {
  if (name == "consistency") return ScheduleKind::consistency;
  if (name == "lipschitz") return ScheduleKind::lipschitz;
  if (name == "c2") return ScheduleKind::c2;
  if (name == "constant") return ScheduleKind::constant;
  throw ArgumentError("unknown lifetime schedule '" + name + "'");
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::consistency: return "consistency";
    case ScheduleKind::lipschitz: return "lipschitz";
    case ScheduleKind::c2: return "c2";
    case ScheduleKind::constant: return "constant";
  }
  return "?";
}

ForestSizeKind parse_forest_size(const std::string& name) {
  if (name == "c2") return ForestSizeKind::c2;
  throw ArgumentError("unknown forest size schedule '" + name + "'");
}

double lifetime_schedule(ScheduleKind kind, std::size_t n, std::size_t d, double scale) {
  if (n < 1 || d < 1 || !(scale > 0.0)) {
    throw ArgumentError("lifetime_schedule: need n >= 1, d >= 1, scale > 0");
  }
  const auto nd = static_cast<double>(n);
  const auto di = static_cast<int>(d);
  switch (kind) {
    case ScheduleKind::lipschitz: return scale * integer_root(nd, di + 2);
    case ScheduleKind::c2: return scale * integer_root(nd, di + 4);
    case ScheduleKind::consistency: return scale * integer_root(nd, 2 * di);
    case ScheduleKind::constant: return scale;
  }
  throw ArgumentError("lifetime_schedule: invalid kind");
}

std::size_t forest_size_schedule(ForestSizeKind kind, std::size_t n, std::size_t d, double scale) {
  if (n < 1 || d < 1 || !(scale > 0.0)) {
    throw ArgumentError("forest_size_schedule: need n >= 1, d >= 1, scale > 0");
  }
  if (kind != ForestSizeKind::c2) throw ArgumentError("forest_size_schedule: invalid kind");
  const auto nd = static_cast<double>(n);
  const double m = std::ceil(scale * integer_root(nd * nd, static_cast<int>(d) + 4));
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

}  // namespace mondrian
