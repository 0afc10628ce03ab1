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

#include "mondrian/box.hpp"

#include <string>
#include <utility>

namespace mondrian {

BoxRegion::BoxRegion(Vector lo, Vector hi)
    : BoxRegion(std::move(lo), std::move(hi), BoolArray()) {
  left_closed = BoolArray::Constant(lower.size(), true);
}

BoxRegion::BoxRegion(Vector lo, Vector hi, BoolArray closed)
    : lower(std::move(lo)), upper(std::move(hi)), left_closed(std::move(closed)) {
  if (lower.size() != upper.size() || (left_closed.size() != 0 && left_closed.size() != lower.size())) {
    throw ArgumentError("BoxRegion: lower/upper/left_closed sizes differ");
  }
  if (left_closed.size() == 0) left_closed = BoolArray::Constant(lower.size(), true);
  for (Eigen::Index j = 0; j < lower.size(); ++j) {
    if (!(lower(j) <= upper(j))) {
      throw ArgumentError("BoxRegion: lower > upper on axis " + std::to_string(j));
    }
  }
}

BoxRegion BoxRegion::unit(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return BoxRegion(Vector::Zero(n), Vector::Ones(n));
}

bool BoxRegion::contains_box(const BoxRegion& other) const {
  if (other.dim() != dim()) return false;
  for (Eigen::Index j = 0; j < lower.size(); ++j) {
    if (other.upper(j) > upper(j)) return false;
    if (other.lower(j) < lower(j)) return false;
    if (other.lower(j) == lower(j) && !left_closed(j) && other.left_closed(j)) return false;
  }
  return true;
}

bool BoxRegion::operator==(const BoxRegion& other) const {
  return lower.size() == other.lower.size() && lower == other.lower && upper == other.upper &&
         (left_closed == other.left_closed).all();
}

double cell_l2_diameter(const BoxRegion& box) { return (box.upper - box.lower).norm(); }

}  // namespace mondrian
