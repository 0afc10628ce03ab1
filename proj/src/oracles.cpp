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

#include "mondrian/errors.hpp"

namespace mondrian::oracles {

void RiskBoundParams::validate() const {
  if (d < 1) throw ArgumentError("RiskBoundParams: d must be >= 1");
  if (!(lifetime > 0.0)) throw ArgumentError("RiskBoundParams: lifetime must be > 0");
  if (!(n >= 1.0)) throw ArgumentError("RiskBoundParams: n must be >= 1");
  if (sigma2 < 0 || lipschitz < 0 || sup_f < 0 || grad_sup < 0 || hess_sup < 0 ||
      density_lipschitz < 0) {
    throw ArgumentError("RiskBoundParams: constants must be nonnegative");
  }
  if (!(p0 > 0.0) || p1 < p0) throw ArgumentError("RiskBoundParams: need 0 < p0 <= p1");
  if (!(eps >= 0.0 && eps < 0.5)) throw ArgumentError("RiskBoundParams: eps must be in [0, 1/2)");
  if (!(trees >= 1.0)) throw ArgumentError("RiskBoundParams: M must be >= 1");
}

double expected_leaf_count(double lifetime, std::size_t d) {
  if (!(lifetime >= 0.0)) throw ArgumentError("expected_leaf_count: lifetime must be >= 0");
  return std::pow(1.0 + lifetime, static_cast<double>(d));
}

double expected_leaf_count_box(double lifetime, const Eigen::Ref<const Eigen::VectorXd>& sides) {
  if (!(lifetime >= 0.0)) throw ArgumentError("expected_leaf_count_box: lifetime must be >= 0");
  if ((sides.array() < 0.0).any()) throw ArgumentError("expected_leaf_count_box: negative side");
  return (1.0 + lifetime * sides.array()).prod();
}

double diameter_tail_bound(double delta, double lifetime, std::size_t d) {
  if (!(delta >= 0.0)) throw ArgumentError("diameter_tail_bound: delta must be >= 0");
  const double dd = static_cast<double>(d);
  const double u = lifetime * delta / std::sqrt(dd);
  return dd * (1.0 + u) * std::exp(-u);
}

double diameter_second_moment_bound(double lifetime, std::size_t d) {
  if (!(lifetime > 0.0)) throw ArgumentError("diameter_second_moment_bound: lifetime must be > 0");
  return 4.0 * static_cast<double>(d) / (lifetime * lifetime);
}

double lipschitz_risk_bound(const RiskBoundParams& p) {
  p.validate();
  const double d = static_cast<double>(p.d);
  const double lam = p.lifetime;
  return 4.0 * d * p.lipschitz * p.lipschitz / (lam * lam) +
         std::pow(1.0 + lam, d) / p.n * (2.0 * p.sigma2 + 9.0 * p.sup_f * p.sup_f);
}

std::array<double, 5> c2_risk_bound_terms(const RiskBoundParams& p) {
  p.validate();
  const double d = static_cast<double>(p.d);
  const double lam = p.lifetime;
  const double g2 = p.grad_sup * p.grad_sup;
  const double margin = p.p0 * std::pow(1.0 - 2.0 * p.eps, d);
  const double lam4 = std::pow(lam, 4);
  return {
      8.0 * d * g2 / (p.trees * lam * lam),
      2.0 * std::pow(1.0 + lam, d) / p.n * (2.0 * p.sigma2 + 9.0 * p.sup_f * p.sup_f) / margin,
      72.0 * d * g2 * p.p1 / margin * std::exp(-lam * p.eps) / std::pow(lam, 3),
      72.0 * d * d * d * g2 * p.density_lipschitz * p.density_lipschitz * p.p1 * p.p1 /
          std::pow(p.p0, 4) / lam4,
      4.0 * d * d * p.hess_sup * p.hess_sup * p.p1 * p.p1 / (p.p0 * p.p0) / lam4,
  };
}

double c2_risk_bound(const RiskBoundParams& p) {
  const auto t = c2_risk_bound_terms(p);
  return t[0] + t[1] + t[2] + t[3] + t[4];
}

double tree_bias_exact_1d(double lifetime) {
  if (!(lifetime >= 0.0)) throw ArgumentError("tree_bias_exact_1d: lifetime must be >= 0");
  const double lam = lifetime;
  if (lam < 1.0) {
    // Power series (1/2) sum_{m>=2} (-1)^m (m - 1) / (m + 1)! lam^{m-2}; the
    // closed form cancels badly for small lambda.
    double sum = 0.0;
    double scaled = 1.0 / 6.0;  // (-lam)^{m-2} / (m + 1)!
    for (int m = 2; m < 40; ++m) {
      const double term = 0.5 * (m - 1) * scaled;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      scaled *= -lam / (m + 2);
    }
    return sum;
  }
  const double e = std::exp(-lam);
  return (1.0 - 2.0 / lam + e + 2.0 / lam * e) / (2.0 * lam * lam);
}

double tilde_f_1d(double lifetime, double x) {
  if (!(lifetime > 0.0)) throw ArgumentError("tilde_f_1d: lifetime must be > 0");
  return 1.0 + x + (std::exp(-lifetime * x) - std::exp(-lifetime * (1.0 - x))) / (2.0 * lifetime);
}

double tree_lower_bound_1d(std::size_t n, double sigma2) {
  if (n < 18) throw ArgumentError("tree_lower_bound_1d: n must be >= 18");
  return 0.25 * std::cbrt(std::pow(3.0 * sigma2 / static_cast<double>(n), 2));
}

double truncated_exp_cdf(double t, double rate, double cap) {
  if (!(rate > 0.0) || !(cap >= 0.0)) throw ArgumentError("truncated_exp_cdf: bad rate or cap");
  if (t >= cap) return 1.0;
  if (t <= 0.0) return 0.0;
  return -std::expm1(-rate * t);
}

}  // namespace mondrian::oracles
