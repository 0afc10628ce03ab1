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

#include "mondrian/serialization.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace mondrian {
namespace {

using nlohmann::json;

void expect(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError("malformed JSON: " + what);
}

// Missing keys and type mismatches surface as ArgumentError too.
template <typename Parse>
auto guarded(Parse&& parse) {
  try {
    return parse();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed JSON: ") + e.what());
  }
}

json box_to_json(const BoxRegion& box) {
  std::vector<bool> closed(box.left_closed.begin(), box.left_closed.end());
  return {{"lower", std::vector<double>(box.lower.begin(), box.lower.end())},
          {"upper", std::vector<double>(box.upper.begin(), box.upper.end())},
          {"left_closed", closed}};
}

BoxRegion box_from_json(const json& doc) {
  const auto lo = doc.at("lower").get<std::vector<double>>();
  const auto hi = doc.at("upper").get<std::vector<double>>();
  const auto closed = doc.at("left_closed").get<std::vector<bool>>();
  expect(lo.size() == hi.size() && lo.size() == closed.size(), "root_box sizes differ");
  BoolArray flags(static_cast<Eigen::Index>(closed.size()));
  for (std::size_t j = 0; j < closed.size(); ++j) flags(static_cast<Eigen::Index>(j)) = closed[j];
  return BoxRegion(Eigen::Map<const Vector>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                   Eigen::Map<const Vector>(hi.data(), static_cast<Eigen::Index>(hi.size())),
                   flags);
}

}  // namespace

json partition_to_json(const MondrianPartition& partition) {
  json nodes = json::array();
  for (NodeId i = 0; i < partition.node_count(); ++i) {
    const PartitionNode& node = partition.node(i);
    json entry = {{"id", i}, {"birth", node.birth_time}};
    if (node.split) {
      entry["split"] = {{"dim", node.split->dim},
                        {"threshold", node.split->threshold},
                        {"time", node.split->time}};
      entry["left"] = node.left;
      entry["right"] = node.right;
    } else if (node.pending_clock && std::isfinite(*node.pending_clock)) {
      entry["pending_clock"] = *node.pending_clock;
    } else {
      entry["pending_clock"] = nullptr;
    }
    nodes.push_back(std::move(entry));
  }
  return {{"format", "mondrian-partition"},
          {"version", kPartitionSchemaVersion},
          {"dim", partition.dim()},
          {"lifetime", partition.lifetime()},
          {"seed", partition.seed_provenance().seed},
          {"draws", partition.seed_provenance().draws},
          {"root_box", box_to_json(partition.root_box())},
          {"nodes", std::move(nodes)}};
}

MondrianPartition partition_from_json(const json& doc) {
  return guarded([&] {
    expect(doc.value("format", "") == "mondrian-partition", "format tag");
    expect(doc.at("version").get<int>() == kPartitionSchemaVersion, "unsupported version");
    BoxRegion box = box_from_json(doc.at("root_box"));
    const auto d = doc.at("dim").get<std::size_t>();
    expect(d == box.dim(), "dim does not match root_box");
    const json& entries = doc.at("nodes");
    expect(entries.is_array() && !entries.empty(), "nodes must be a non-empty array");
    expect(entries.size() < kNoNode, "too many nodes");

    std::vector<PartitionNode> nodes(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const json& e = entries[i];
      expect(e.at("id").get<std::size_t>() == i, "node ids must be in preorder");
      nodes[i].birth_time = e.at("birth").get<double>();
      if (e.contains("split")) {
        const json& s = e.at("split");
        SplitRecord split{s.at("dim").get<std::size_t>(), s.at("threshold").get<double>(),
                          s.at("time").get<double>()};
        expect(split.dim < d, "split dim out of range");
        const auto left = e.at("left").get<std::size_t>();
        const auto right = e.at("right").get<std::size_t>();
        expect(left == i + 1 && right > left && right < entries.size(), "child links");
        expect(nodes[right].parent == kNoNode, "node claimed by two parents");
        nodes[i].split = split;
        nodes[i].left = static_cast<NodeId>(left);
        nodes[i].right = static_cast<NodeId>(right);
        nodes[left].parent = static_cast<NodeId>(i);
        nodes[right].parent = static_cast<NodeId>(i);
      } else {
        const json& clock = e.at("pending_clock");
        nodes[i].pending_clock = clock.is_null() ? kInfinity : clock.get<double>();
      }
    }
    // Every non-root node must have been claimed by exactly one parent.
    for (std::size_t i = 1; i < nodes.size(); ++i) expect(nodes[i].parent != kNoNode, "orphan node");
    MondrianPartition partition(std::move(box), doc.at("lifetime").get<double>(), std::move(nodes),
                                {doc.at("seed").get<std::uint64_t>(),
                                 doc.at("draws").get<std::uint64_t>()});
    expect(leaf_count(partition) * 2 - 1 == partition.node_count(), "not a binary tree");
    return partition;
  });
}

json tree_to_json(const MondrianTreeModel& model) {
  json stats = json::array();
  for (NodeId i = 0; i < model.stats().size(); ++i) {
    const LeafStatistics& s = model.stats()[i];
    if (s.count == 0) continue;
    stats.push_back({{"node", i},
                     {"count", s.count},
                     {"label_sum", s.label_sum.value()},
                     {"partials", s.label_sum.partials()}});
  }
  return {{"partition", partition_to_json(model.partition())}, {"leaf_stats", std::move(stats)}};
}

MondrianTreeModel tree_from_json(const json& doc) {
  return guarded([&] {
    MondrianPartition partition = partition_from_json(doc.at("partition"));
    std::vector<LeafStatistics> stats(partition.node_count());
    for (const json& e : doc.at("leaf_stats")) {
      const auto node = e.at("node").get<std::size_t>();
      expect(node < stats.size() && partition.node(static_cast<NodeId>(node)).is_leaf(),
             "leaf_stats node is not a leaf");
      LeafStatistics& s = stats[node];
      s.count = e.at("count").get<std::uint64_t>();
      for (double p : e.at("partials").get<std::vector<double>>()) s.label_sum.add(p);
    }
    return MondrianTreeModel(std::move(partition), std::move(stats));
  });
}

json forest_to_json(const MondrianForestModel& model) {
  json trees = json::array();
  for (const auto& tree : model.trees()) trees.push_back(tree_to_json(tree));
  return {{"format", "mondrian-forest"},
          {"version", kModelSchemaVersion},
          {"lifetime", model.lifetime()},
          {"master_seed", model.master_seed()},
          {"trees", std::move(trees)}};
}

MondrianForestModel forest_from_json(const json& doc) {
  return guarded([&] {
    expect(doc.value("format", "") == "mondrian-forest", "format tag");
    expect(doc.at("version").get<int>() == kModelSchemaVersion, "unsupported version");
    std::vector<MondrianTreeModel> trees;
    for (const json& t : doc.at("trees")) trees.push_back(tree_from_json(t));
    expect(!trees.empty(), "forest has no trees");
    return MondrianForestModel(std::move(trees), doc.at("lifetime").get<double>(),
                               doc.at("master_seed").get<std::uint64_t>());
  });
}

}  // namespace mondrian
