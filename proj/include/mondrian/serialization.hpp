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

#include <json.hpp>

#include "mondrian/estimators.hpp"
#include "mondrian/partition.hpp"

namespace mondrian {

inline constexpr int kPartitionSchemaVersion = 1;
inline constexpr int kModelSchemaVersion = 1;

/// Partition as JSON:
///
///   {"format": "mondrian-partition", "version": 1, "dim": d, "lifetime": l,
///    "seed": s, "draws": k,
///    "root_box": {"lower": [...], "upper": [...], "left_closed": [...]},
///    "nodes": [...]}
///
/// `nodes` is in depth-first, left-first preorder. Internal nodes are
/// {"id", "birth", "split": {"dim", "threshold", "time"}, "left", "right"};
/// leaves are {"id", "birth", "pending_clock"} with null meaning +inf.
/// Axes are 0-based. Cell boxes are implied by the root box and the splits.
nlohmann::json partition_to_json(const MondrianPartition& partition);
MondrianPartition partition_from_json(const nlohmann::json& doc);

/// Forest as JSON: {"format": "mondrian-forest", "version": 1, "lifetime",
/// "master_seed", "trees": [{"partition": {...}, "leaf_stats": [{"node",
/// "count", "label_sum", "partials"}]}]}. Only non-empty leaves are listed.
nlohmann::json forest_to_json(const MondrianForestModel& model);
MondrianForestModel forest_from_json(const nlohmann::json& doc);

nlohmann::json tree_to_json(const MondrianTreeModel& model);
MondrianTreeModel tree_from_json(const nlohmann::json& doc);

}  // namespace mondrian
