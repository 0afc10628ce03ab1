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

#include <cmath>

#include <gtest/gtest.h>

namespace mondrian {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(BoxRegion, UnitCubeMeasures) {
  const BoxRegion b = BoxRegion::unit(3);
  EXPECT_EQ(b.dim(), 3u);
  EXPECT_DOUBLE_EQ(b.linear_dimension(), 3.0);
  EXPECT_DOUBLE_EQ(b.volume(), 1.0);
  EXPECT_DOUBLE_EQ(cell_l2_diameter(b), std::sqrt(3.0));
  EXPECT_TRUE(b.left_closed.all());
}

TEST(BoxRegion, RejectsInvertedOrMismatchedBounds) {
  EXPECT_THROW(BoxRegion(vec({0.0, 1.0}), vec({1.0, 0.5})), ArgumentError);
  EXPECT_THROW(BoxRegion(vec({0.0}), vec({1.0, 1.0})), ArgumentError);
  EXPECT_NO_THROW(BoxRegion(vec({0.5}), vec({0.5})));
}

TEST(BoxRegion, EdgeFlagsDecideBoundaryMembership) {
  BoolArray closed(2);
  closed << false, true;
  const BoxRegion b(vec({0.2, 0.0}), vec({0.6, 1.0}), closed);
  EXPECT_FALSE(b.contains(vec({0.2, 0.5})));  // open lower edge on axis 0
  EXPECT_TRUE(b.contains(vec({0.6, 0.5})));   // upper edges are closed
  EXPECT_TRUE(b.contains(vec({0.3, 0.0})));   // closed lower edge on axis 1
  EXPECT_FALSE(b.contains(vec({0.7, 0.5})));
}

TEST(BoxRegion, ContainsBox) {
  const BoxRegion unit = BoxRegion::unit(2);
  const BoxRegion sub(vec({0.2, 0.1}), vec({0.6, 0.4}));
  EXPECT_TRUE(unit.contains_box(sub));
  EXPECT_FALSE(sub.contains_box(unit));
  BoolArray open(2);
  open << false, true;
  const BoxRegion open_box(vec({0.2, 0.1}), vec({0.6, 0.4}), open);
  EXPECT_FALSE(open_box.contains_box(sub));
  EXPECT_TRUE(sub.contains_box(open_box));
}

}  // namespace
}  // namespace mondrian
