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

#include "mondrian/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace mondrian {
namespace {

constexpr std::uint64_t kRestrictStream = 0x7265737472696374ULL;
constexpr int kMaxThresholdDraws = 64;

void check_lifetime(double lifetime, const char* where) {
  if (!(lifetime >= 0.0) || !std::isfinite(lifetime)) {
    throw ArgumentError(std::string(where) + ": lifetime must be finite and >= 0");
  }
}

// Appends subtrees in preorder to `nodes`, running the recursive cell-splitting
// procedure with an explicit stack. Cell boxes live in a LIFO arena.
class Grower {
 public:
  Grower(std::vector<PartitionNode>& nodes, std::size_t d, double lifetime, RngStream& rng,
         const SampleOptions& options, std::size_t splits)
      : nodes_(nodes), d_(d), lifetime_(lifetime), rng_(rng), options_(options), splits_(splits) {}

  std::size_t splits() const { return splits_; }

  // `first_clock` (when set) is the already-drawn split time of the subtree root.
  void grow(const Vector& lo, const Vector& hi, NodeId parent, bool is_right, double birth,
            std::optional<double> first_clock) {
    push(lo.data(), hi.data(), Frame{parent, is_right, birth, first_clock});
    std::vector<double> cell_lo(d_), cell_hi(d_);
    while (!frames_.empty()) {
      const Frame frame = frames_.back();
      frames_.pop_back();
      const std::size_t off = lo_arena_.size() - d_;
      std::copy(lo_arena_.begin() + off, lo_arena_.end(), cell_lo.begin());
      std::copy(hi_arena_.begin() + off, hi_arena_.end(), cell_hi.begin());
      lo_arena_.resize(off);
      hi_arena_.resize(off);

      if (nodes_.size() >= kNoNode) throw ResourceError("partition node index overflow");
      const auto id = static_cast<NodeId>(nodes_.size());
      PartitionNode node;
      node.birth_time = frame.birth;
      node.parent = frame.parent;
      nodes_.push_back(node);
      if (frame.parent != kNoNode) {
        (frame.is_right ? nodes_[frame.parent].right : nodes_[frame.parent].left) = id;
      }

      double linear = 0.0;
      for (std::size_t j = 0; j < d_; ++j) linear += cell_hi[j] - cell_lo[j];
      const double clock = frame.clock ? *frame.clock : frame.birth + rng_.exponential(linear);
      if (!(clock <= lifetime_)) {
        nodes_[id].pending_clock = clock;
        continue;
      }
      if (++splits_ > options_.max_splits) {
        throw ResourceError("partition exceeds max_splits = " + std::to_string(options_.max_splits));
      }
      const std::size_t dim = draw_dimension(cell_lo, cell_hi, linear);
      const double threshold = draw_threshold(cell_lo[dim], cell_hi[dim]);
      nodes_[id].split = SplitRecord{dim, threshold, clock};

      // Right is pushed first so the left subtree is built (and drawn) first.
      const double lower = cell_lo[dim];
      cell_lo[dim] = threshold;
      push(cell_lo.data(), cell_hi.data(), Frame{id, true, clock, std::nullopt});
      cell_lo[dim] = lower;
      const double upper = cell_hi[dim];
      cell_hi[dim] = threshold;
      push(cell_lo.data(), cell_hi.data(), Frame{id, false, clock, std::nullopt});
      cell_hi[dim] = upper;
    }
  }

 private:
  struct Frame {
    NodeId parent;
    bool is_right;
    double birth;
    std::optional<double> clock;
  };

  void push(const double* lo, const double* hi, Frame frame) {
    lo_arena_.insert(lo_arena_.end(), lo, lo + d_);
    hi_arena_.insert(hi_arena_.end(), hi, hi + d_);
    frames_.push_back(frame);
  }

  // P(J = j) = side_j / |C|; zero-length sides are never chosen.
  std::size_t draw_dimension(const std::vector<double>& lo, const std::vector<double>& hi,
                             double linear) {
    const double u = rng_.uniform() * linear;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < d_; ++j) {
      const double side = hi[j] - lo[j];
      if (!(side > 0.0)) continue;
      last = j;
      acc += side;
      if (u < acc) return j;
    }
    return last;
  }

  // Uniform on the open interval (lo, hi); boundary draws are redrawn.
  double draw_threshold(double lo, double hi) {
    for (int attempt = 0; attempt < kMaxThresholdDraws; ++attempt) {
      const double s = lo + rng_.uniform() * (hi - lo);
      if (s > lo && s < hi) return s;
    }
    throw ResourceError("cell too narrow to hold an interior threshold");
  }

  std::vector<PartitionNode>& nodes_;
  std::size_t d_;
  double lifetime_;
  RngStream& rng_;
  const SampleOptions& options_;
  std::size_t splits_;
  std::vector<Frame> frames_;
  std::vector<double> lo_arena_;
  std::vector<double> hi_arena_;
};

void link(std::vector<PartitionNode>& nodes, NodeId parent, bool is_right, NodeId child) {
  if (parent != kNoNode) (is_right ? nodes[parent].right : nodes[parent].left) = child;
}

}  // namespace

MondrianPartition::MondrianPartition(BoxRegion root_box, double lifetime,
                                     std::vector<PartitionNode> nodes, SeedProvenance provenance)
    : root_box_(std::move(root_box)),
      lifetime_(lifetime),
      nodes_(std::move(nodes)),
      provenance_(provenance) {
  if (nodes_.empty()) throw ArgumentError("MondrianPartition: no nodes");
}

BoxRegion MondrianPartition::cell(NodeId id) const {
  std::vector<NodeId> path;
  for (NodeId v = id; v != kNoNode; v = nodes_[v].parent) path.push_back(v);
  BoxRegion box = root_box_;
  for (auto it = path.rbegin(); it + 1 != path.rend(); ++it) {
    const PartitionNode& parent = nodes_[*it];
    const SplitRecord& s = *parent.split;
    const auto j = static_cast<Eigen::Index>(s.dim);
    if (*(it + 1) == parent.left) {
      box.upper(j) = s.threshold;
    } else {
      box.lower(j) = s.threshold;
      box.left_closed(j) = false;
    }
  }
  return box;
}

bool MondrianPartition::operator==(const MondrianPartition& other) const {
  return lifetime_ == other.lifetime_ && root_box_ == other.root_box_ && nodes_ == other.nodes_;
}

MondrianPartition sample_mondrian(const BoxRegion& box, double lifetime, RngStream& rng,
                                  const SampleOptions& options) {
  check_lifetime(lifetime, "sample_mondrian");
  std::vector<PartitionNode> nodes;
  Grower grower(nodes, box.dim(), lifetime, rng, options, 0);
  grower.grow(box.lower, box.upper, kNoNode, false, 0.0, std::nullopt);
  return MondrianPartition(box, lifetime, std::move(nodes), {rng.seed(), rng.counter()});
}

MondrianPartition prune(const MondrianPartition& partition, double new_lifetime) {
  check_lifetime(new_lifetime, "prune");
  if (new_lifetime > partition.lifetime()) {
    throw ArgumentError("prune: new lifetime exceeds the partition lifetime (use extend)");
  }
  struct Item {
    NodeId old_id;
    NodeId parent;
    bool is_right;
  };
  std::vector<PartitionNode> nodes;
  std::vector<Item> stack{{MondrianPartition::kRoot, kNoNode, false}};
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const PartitionNode& old = partition.node(item.old_id);
    const auto id = static_cast<NodeId>(nodes.size());
    PartitionNode node;
    node.birth_time = old.birth_time;
    node.parent = item.parent;
    if (old.split && old.split->time <= new_lifetime) {
      node.split = old.split;
      nodes.push_back(node);
      link(nodes, item.parent, item.is_right, id);
      stack.push_back({old.right, id, true});
      stack.push_back({old.left, id, false});
    } else {
      node.pending_clock = old.split ? old.split->time : old.pending_clock;
      nodes.push_back(node);
      link(nodes, item.parent, item.is_right, id);
    }
  }
  return MondrianPartition(partition.root_box(), new_lifetime, std::move(nodes),
                           partition.seed_provenance());
}

MondrianPartition extend(const MondrianPartition& partition, double new_lifetime, RngStream& rng,
                         const SampleOptions& options) {
  check_lifetime(new_lifetime, "extend");
  if (new_lifetime < partition.lifetime()) {
    throw ArgumentError("extend: new lifetime is below the partition lifetime (use prune)");
  }
  struct Item {
    NodeId old_id;
    NodeId parent;
    bool is_right;
    Vector lo;
    Vector hi;
  };
  std::vector<PartitionNode> nodes;
  Grower grower(nodes, partition.dim(), new_lifetime, rng, options, leaf_count(partition) - 1);
  std::vector<Item> stack;
  stack.push_back({MondrianPartition::kRoot, kNoNode, false, partition.root_box().lower,
                   partition.root_box().upper});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const PartitionNode& old = partition.node(item.old_id);
    if (old.is_leaf() && old.pending_clock && *old.pending_clock <= new_lifetime) {
      grower.grow(item.lo, item.hi, item.parent, item.is_right, old.birth_time, old.pending_clock);
      continue;
    }
    const auto id = static_cast<NodeId>(nodes.size());
    PartitionNode node = old;
    node.parent = item.parent;
    node.left = node.right = kNoNode;
    nodes.push_back(node);
    link(nodes, item.parent, item.is_right, id);
    if (old.split) {
      const auto j = static_cast<Eigen::Index>(old.split->dim);
      Vector right_lo = item.lo;
      right_lo(j) = old.split->threshold;
      Vector left_hi = item.hi;
      left_hi(j) = old.split->threshold;
      stack.push_back({old.right, id, true, std::move(right_lo), item.hi});
      stack.push_back({old.left, id, false, std::move(item.lo), std::move(left_hi)});
    }
  }
  return MondrianPartition(partition.root_box(), new_lifetime, std::move(nodes),
                           {rng.seed(), rng.counter()});
}

MondrianPartition restrict_to(const MondrianPartition& partition, const BoxRegion& sub) {
  if (sub.dim() != partition.dim() || !partition.root_box().contains_box(sub)) {
    throw ArgumentError("restrict_to: sub-box is not contained in the root box");
  }
  RngStream rng = RngStream(partition.seed_provenance().seed).child(kRestrictStream);
  struct Item {
    NodeId old_id;
    NodeId parent;
    bool is_right;
    double birth;
    BoxRegion box;
  };
  std::vector<PartitionNode> nodes;
  std::vector<Item> stack;
  stack.push_back({MondrianPartition::kRoot, kNoNode, false, 0.0, sub});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    NodeId old_id = item.old_id;
    // Skip splits that leave the clipped cell on one side.
    while (const auto& split = partition.node(old_id).split) {
      const auto j = static_cast<Eigen::Index>(split->dim);
      if (split->threshold >= item.box.upper(j)) {
        old_id = partition.node(old_id).left;
      } else if (split->threshold <= item.box.lower(j)) {
        old_id = partition.node(old_id).right;
      } else {
        break;
      }
    }
    const PartitionNode& old = partition.node(old_id);
    const auto id = static_cast<NodeId>(nodes.size());
    PartitionNode node;
    node.birth_time = item.birth;
    node.parent = item.parent;
    if (old.split) {
      node.split = old.split;
      nodes.push_back(node);
      link(nodes, item.parent, item.is_right, id);
      const auto j = static_cast<Eigen::Index>(old.split->dim);
      BoxRegion right = item.box;
      right.lower(j) = old.split->threshold;
      right.left_closed(j) = false;
      BoxRegion left = std::move(item.box);
      left.upper(j) = old.split->threshold;
      stack.push_back({old.right, id, true, old.split->time, std::move(right)});
      stack.push_back({old.left, id, false, old.split->time, std::move(left)});
    } else {
      node.pending_clock = partition.lifetime() + rng.exponential(item.box.linear_dimension());
      nodes.push_back(node);
      link(nodes, item.parent, item.is_right, id);
    }
  }
  return MondrianPartition(sub, partition.lifetime(), std::move(nodes),
                           {rng.seed(), rng.counter()});
}

std::vector<NodeId> leaf_ids(const MondrianPartition& partition) {
  std::vector<NodeId> ids;
  for (NodeId i = 0; i < partition.node_count(); ++i) {
    if (partition.node(i).is_leaf()) ids.push_back(i);
  }
  return ids;
}

std::vector<BoxRegion> leaf_cells(const MondrianPartition& partition) {
  // Parents precede children in preorder, so one forward pass suffices.
  std::vector<BoxRegion> boxes(partition.node_count());
  boxes[MondrianPartition::kRoot] = partition.root_box();
  std::vector<BoxRegion> leaves;
  for (NodeId i = 0; i < partition.node_count(); ++i) {
    const PartitionNode& node = partition.node(i);
    if (!node.split) {
      leaves.push_back(std::move(boxes[i]));
      continue;
    }
    const auto j = static_cast<Eigen::Index>(node.split->dim);
    boxes[node.left] = boxes[i];
    boxes[node.left].upper(j) = node.split->threshold;
    boxes[node.right] = std::move(boxes[i]);
    boxes[node.right].lower(j) = node.split->threshold;
    boxes[node.right].left_closed(j) = false;
  }
  return leaves;
}

std::size_t leaf_count(const MondrianPartition& partition) {
  return (partition.node_count() + 1) / 2;
}

}  // namespace mondrian
