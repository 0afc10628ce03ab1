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

#include <Eigen/Dense>

namespace mondrian::oracles {

/// Constants entering the risk bounds. `grad_sup` is sup ||grad f||_2,
/// `hess_sup` is sup ||Hess f||_op; p0 <= p1 bound the design density and
/// `density_lipschitz` is its Lipschitz constant; `eps` is the boundary margin.
struct RiskBoundParams {
  std::size_t d = 1;
  double lifetime = 1.0;
  double n = 1.0;
  double sigma2 = 0.0;
  double lipschitz = 0.0;
  double sup_f = 0.0;
  double grad_sup = 0.0;
  double hess_sup = 0.0;
  double p0 = 1.0;
  double p1 = 1.0;
  double density_lipschitz = 0.0;
  double eps = 0.0;
  double trees = 1.0;

  void validate() const;
};

/// E[K_lambda] = (1 + lambda)^d on the unit cube.
double expected_leaf_count(double lifetime, std::size_t d);

/// E[K_lambda] = prod_j (1 + lambda len_j) on a box with the given sides.
double expected_leaf_count_box(double lifetime, const Eigen::Ref<const Eigen::VectorXd>& sides);

/// d (1 + lambda delta / sqrt d) exp(-lambda delta / sqrt d), unclamped.
double diameter_tail_bound(double delta, double lifetime, std::size_t d);

/// 4 d / lambda^2.
double diameter_second_moment_bound(double lifetime, std::size_t d);

/// 4 d L^2 / lambda^2 + (1 + lambda)^d / n (2 sigma^2 + 9 ||f||_inf^2).
double lipschitz_risk_bound(const RiskBoundParams& p);

/// The five summands of the C^2 forest bound, in order: forest-averaged bias,
/// variance, boundary term, density-variation term, curvature term.
std::array<double, 5> c2_risk_bound_terms(const RiskBoundParams& p);
double c2_risk_bound(const RiskBoundParams& p);

/// Integrated squared bias E[(fbar_lambda(X) - f(X))^2] of a single tree for
/// f(x) = 1 + x, X ~ U[0, 1]:
/// (1 / 2 lambda^2)(1 - 2/lambda + e^{-lambda} + (2/lambda) e^{-lambda}),
/// with limit 1/12 at lambda = 0.
double tree_bias_exact_1d(double lifetime);

/// Expected cell-average of f(x) = 1 + x at x:
/// 1 + x + (e^{-lambda x} - e^{-lambda (1 - x)}) / (2 lambda).
double tilde_f_1d(double lifetime, double x);

/// Explicit branch (1/4)(3 sigma^2 / n)^{2/3} of the single-tree lower bound.
/// The other branch involves an unspecified constant and is not exposed.
double tree_lower_bound_1d(std::size_t n, double sigma2);

/// CDF of min(E / rate, cap) with E ~ Exp(1).
double truncated_exp_cdf(double t, double rate, double cap);

}  // namespace mondrian::oracles
