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

#include <Eigen/Dense>

#include "mondrian/errors.hpp"

namespace mondrian {

using Vector = Eigen::VectorXd;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Axis-aligned box prod_j [lower_j, upper_j]. Upper edges are always closed;
/// the lower edge on axis j is closed iff left_closed(j). Right children of a
/// split are open at the threshold, which is how points on a threshold end up
/// in the left cell.
struct BoxRegion {
  Vector lower;
  Vector upper;
  BoolArray left_closed;

  BoxRegion() = default;
  BoxRegion(Vector lo, Vector hi);
  BoxRegion(Vector lo, Vector hi, BoolArray closed);

  /// The closed unit cube [0, 1]^d.
  static BoxRegion unit(std::size_t d);

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  Vector sides() const { return upper - lower; }

  /// |C| = sum_j (upper_j - lower_j).
  double linear_dimension() const { return (upper - lower).sum(); }
  double volume() const { return (upper - lower).prod(); }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x) const {
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
      const double v = x(j);
      if (v > upper(j)) return false;
      if (left_closed(j) ? v < lower(j) : v <= lower(j)) return false;
    }
    return true;
  }

  /// Set containment of the closures, with open lower edges respected:
  /// an open lower edge of `this` cannot hold a closed edge of `other`.
  bool contains_box(const BoxRegion& other) const;

  bool operator==(const BoxRegion& other) const;
};

/// l2 diameter of the box: the length of its main diagonal.
double cell_l2_diameter(const BoxRegion& box);

}  // namespace mondrian
