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
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mondrian/box.hpp"
#include "mondrian/errors.hpp"
#include "mondrian/rng.hpp"

namespace mondrian {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Split sigma_v = (dim, threshold) together with the time it occurred.
struct SplitRecord {
  std::size_t dim = 0;
  double threshold = 0.0;
  double time = 0.0;

  bool operator==(const SplitRecord&) const = default;
};

/// A node of a tree partition. Internal nodes carry a split and two children;
/// leaves carry the already-drawn time of their next split (which exceeded the
/// lifetime), so that extending the partition stays exact.
struct PartitionNode {
  double birth_time = 0.0;
  std::optional<SplitRecord> split;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  NodeId parent = kNoNode;
  std::optional<double> pending_clock;

  bool is_leaf() const { return !split.has_value(); }
  bool operator==(const PartitionNode&) const = default;
};

/// The seed of the stream a partition was drawn from and the draw count at the
/// end of construction.
struct SeedProvenance {
  std::uint64_t seed = 0;
  std::uint64_t draws = 0;
};

struct SampleOptions {
  /// Maximum number of splits in a single partition; exceeding it raises
  /// ResourceError instead of truncating.
  std::size_t max_splits = 1'000'000;
};

/// A Mondrian tree partition pruned at `lifetime`. Nodes are stored in
/// depth-first, left-first preorder; node 0 is the root. Immutable once built.
class MondrianPartition {
 public:
  static constexpr NodeId kRoot = 0;

  MondrianPartition(BoxRegion root_box, double lifetime, std::vector<PartitionNode> nodes,
                    SeedProvenance provenance = {});

  std::size_t dim() const { return root_box_.dim(); }
  double lifetime() const { return lifetime_; }
  const BoxRegion& root_box() const { return root_box_; }
  const SeedProvenance& seed_provenance() const { return provenance_; }

  const std::vector<PartitionNode>& nodes() const { return nodes_; }
  const PartitionNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Cell C_v of a node, reconstructed from the splits on its root path.
  BoxRegion cell(NodeId id) const;

  /// Leaf reached by descent (left iff x[dim] <= threshold). No bounds check;
  /// see locate_leaf for the checked version.
  template <typename Derived>
  NodeId descend(const Eigen::MatrixBase<Derived>& x) const {
    NodeId id = kRoot;
    while (nodes_[id].split) {
      const SplitRecord& s = *nodes_[id].split;
      id = x(static_cast<Eigen::Index>(s.dim)) <= s.threshold ? nodes_[id].left : nodes_[id].right;
    }
    return id;
  }

  /// Structural equality: box, lifetime and every node field. Seed provenance
  /// is deliberately not compared.
  bool operator==(const MondrianPartition& other) const;

 private:
  BoxRegion root_box_;
  double lifetime_;
  std::vector<PartitionNode> nodes_;
  SeedProvenance provenance_;
};

/// Sample M_lambda ~ MP(lifetime, box) by recursive cell splitting. Draw order
/// per cell is fixed: clock, dimension, threshold; left subtree before right.
MondrianPartition sample_mondrian(const BoxRegion& box, double lifetime, RngStream& rng,
                                  const SampleOptions& options = {});

/// Remove every split born after `new_lifetime`. The time of a removed split
/// becomes the pending clock of the leaf that replaces it.
MondrianPartition prune(const MondrianPartition& partition, double new_lifetime);

/// Continue the process up to `new_lifetime`. Existing splits are untouched;
/// leaves whose pending clock falls before `new_lifetime` split at that clock.
MondrianPartition extend(const MondrianPartition& partition, double new_lifetime, RngStream& rng,
                         const SampleOptions& options = {});

/// Partition of `sub` induced by `partition`. Splits that do not cut the
/// interior of the current clipped cell are dropped; retained splits keep their
/// times. Leaf clocks are redrawn as lifetime + Exp(|cell|) from a stream
/// derived from the partition's seed, so the result is a pure function of the
/// input and extendable.
MondrianPartition restrict_to(const MondrianPartition& partition, const BoxRegion& sub);

/// Checked descent. Throws ArgumentError if x is outside the root box.
template <typename Derived>
NodeId locate_leaf(const MondrianPartition& partition, const Eigen::MatrixBase<Derived>& x) {
  if (static_cast<std::size_t>(x.size()) != partition.dim() || !partition.root_box().contains(x)) {
    throw ArgumentError("locate_leaf: point outside the root box");
  }
  return partition.descend(x);
}

/// Leaf ids in depth-first, left-first order.
std::vector<NodeId> leaf_ids(const MondrianPartition& partition);

/// Leaf cells in depth-first, left-first order.
std::vector<BoxRegion> leaf_cells(const MondrianPartition& partition);

/// K_lambda, the number of leaves (= 1 + number of splits).
std::size_t leaf_count(const MondrianPartition& partition);

}  // namespace mondrian
