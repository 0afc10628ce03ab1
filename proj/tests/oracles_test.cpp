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

#include "mondrian/oracles.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "mondrian/errors.hpp"

namespace mondrian::oracles {
namespace {

// Integrated squared bias for f(x) = 1 + x computed a second way: the cell of
// x is [x - L, x + R] with L = min(E1/lambda, x), R = min(E2/lambda, 1 - x)
// independent, and the cell-average error of a linear f integrates to
// (1/12) int_0^1 E[(L + R)^2] dx.
double bias_by_quadrature(double lam) {
  const auto m1 = [lam](double a) { return -std::expm1(-lam * a) / lam; };
  const auto m2 = [lam](double a) {
    return 2.0 / (lam * lam) * (1.0 - std::exp(-lam * a) * (1.0 + lam * a));
  };
  const auto integrand = [&](double x) {
    return m2(x) + 2.0 * m1(x) * m1(1.0 - x) + m2(1.0 - x);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14) /
         12.0;
}

TEST(LeafCount, ClosedForm) {
  EXPECT_EQ(expected_leaf_count(0.0, 4), 1.0);
  EXPECT_EQ(expected_leaf_count(3.0, 2), 16.0);
  EXPECT_EQ(expected_leaf_count(5.0, 2), 36.0);
  Eigen::VectorXd sides(2);
  sides << 0.4, 0.3;
  EXPECT_NEAR(expected_leaf_count_box(5.0, sides), 7.5, 1e-15);
  sides << 1.0, 0.0;
  EXPECT_EQ(expected_leaf_count_box(5.0, sides), 6.0);
  EXPECT_THROW(expected_leaf_count(-1.0, 2), ArgumentError);
}

TEST(Diameter, TailAndSecondMoment) {
  EXPECT_EQ(diameter_tail_bound(0.0, 4.0, 3), 3.0);
  EXPECT_NEAR(diameter_tail_bound(1.0, 1.0, 1), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(diameter_tail_bound(0.5, 4.0, 4), 4.0 * 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_EQ(diameter_second_moment_bound(2.0, 1), 1.0);
  EXPECT_EQ(diameter_second_moment_bound(4.0, 2), 0.5);
  EXPECT_THROW(diameter_second_moment_bound(0.0, 2), ArgumentError);
}

TEST(RiskBounds, LipschitzHandEvaluated) {
  RiskBoundParams p;
  p.d = 1;
  p.lipschitz = 1.0;
  p.lifetime = 2.0;
  p.n = 100.0;
  p.sigma2 = 1.0;
  p.sup_f = 2.0;
  EXPECT_NEAR(lipschitz_risk_bound(p), 2.14, 1e-14);
  double previous = 0.0;
  for (double lam = 50.0; lam < 1e4; lam *= 2.0) {
    p.lifetime = lam;
    EXPECT_GT(lipschitz_risk_bound(p), previous);
    previous = lipschitz_risk_bound(p);
  }
}

TEST(RiskBounds, C2ReducesToVarianceTerm) {
  RiskBoundParams p;
  p.d = 2;
  p.lifetime = 3.0;
  p.n = 500.0;
  p.sigma2 = 0.5;
  p.sup_f = 1.5;
  const double expected = 2.0 * 16.0 * (2.0 * 0.5 + 9.0 * 2.25) / 500.0;
  EXPECT_NEAR(c2_risk_bound(p), expected, 1e-15);
}

TEST(RiskBounds, C2TermsHandEvaluated) {
  RiskBoundParams p;
  p.d = 2;
  p.lifetime = 4.0;
  p.n = 1000.0;
  p.sigma2 = 0.25;
  p.sup_f = 1.0;
  p.grad_sup = 0.5;
  p.hess_sup = 2.0;
  p.p0 = 0.5;
  p.p1 = 2.0;
  p.density_lipschitz = 3.0;
  p.eps = 0.1;
  p.trees = 10.0;
  const auto t = c2_risk_bound_terms(p);
  const double margin = 0.5 * 0.8 * 0.8;
  EXPECT_NEAR(t[0], 8.0 * 2 * 0.25 / (10.0 * 16.0), 1e-15);
  EXPECT_NEAR(t[1], 2.0 * 25.0 / 1000.0 * (0.5 + 9.0) / margin, 1e-14);
  EXPECT_NEAR(t[2], 72.0 * 2 * 0.25 * 2.0 / margin * std::exp(-0.4) / 64.0, 1e-14);
  EXPECT_NEAR(t[3], 72.0 * 8 * 0.25 * 9.0 * 4.0 / 0.0625 / 256.0, 1e-12);
  EXPECT_NEAR(t[4], 4.0 * 4 * 4.0 * 4.0 / 0.25 / 256.0, 1e-14);

  RiskBoundParams doubled = p;
  doubled.trees = 20.0;
  const auto u = c2_risk_bound_terms(doubled);
  EXPECT_NEAR(u[0], t[0] / 2.0, 1e-17);
  for (int k = 1; k < 5; ++k) EXPECT_EQ(u[k], t[k]);

  p.eps = 0.5;
  EXPECT_THROW(c2_risk_bound(p), ArgumentError);
}

TEST(TreeBias, ClosedFormValues) {
  EXPECT_NEAR(tree_bias_exact_1d(2.0), std::exp(-2.0) / 4.0, 1e-16);
  EXPECT_NEAR(tree_bias_exact_1d(2.0), 0.0338338, 1e-7);
  EXPECT_EQ(tree_bias_exact_1d(0.0), 1.0 / 12.0);
  EXPECT_NEAR(tree_bias_exact_1d(1e-9), 1.0 / 12.0, 1e-10);
  const double lam = 1e3;
  EXPECT_NEAR(lam * lam * tree_bias_exact_1d(lam), 0.5, 0.005);
}

TEST(TreeBias, MatchesIndependentQuadrature) {
  for (double lam : {1e-4, 1e-3 * 0.999, 1e-3 * 1.001, 0.01, 0.5, 1.0, 2.0, 7.5, 30.0, 200.0}) {
    const double q = bias_by_quadrature(lam);
    EXPECT_NEAR(tree_bias_exact_1d(lam), q, 1e-10 * q) << "lambda " << lam;
  }
}

TEST(TildeF, ClosedFormValues) {
  for (double lam : {0.1, 1.0, 10.0, 100.0}) EXPECT_EQ(tilde_f_1d(lam, 0.5), 1.5);
  EXPECT_NEAR(tilde_f_1d(1.0, 0.0), 1.0 + (1.0 - std::exp(-1.0)) / 2.0, 1e-15);
  EXPECT_NEAR(tilde_f_1d(1.0, 0.0), 1.3161, 1e-4);
}

TEST(TreeLowerBound, ExplicitBranch) {
  EXPECT_NEAR(tree_lower_bound_1d(3000, 1.0), 0.0025, 1e-15);
  EXPECT_NEAR(tree_lower_bound_1d(6000, 1.0) / tree_lower_bound_1d(3000, 1.0), std::pow(2.0, -2.0 / 3.0),
              1e-14);
  EXPECT_THROW(tree_lower_bound_1d(17, 1.0), ArgumentError);
}

TEST(TruncatedExp, Cdf) {
  EXPECT_EQ(truncated_exp_cdf(0.0, 2.0, 0.5), 0.0);
  EXPECT_EQ(truncated_exp_cdf(0.5, 2.0, 0.5), 1.0);
  EXPECT_EQ(truncated_exp_cdf(3.0, 2.0, 0.5), 1.0);
  EXPECT_NEAR(truncated_exp_cdf(0.25, 2.0, 0.5), 1.0 - std::exp(-0.5), 1e-15);
  EXPECT_NEAR(truncated_exp_cdf(0.25, 2.0, 0.5), 0.3935, 1e-4);
}

}  // namespace
}  // namespace mondrian::oracles
