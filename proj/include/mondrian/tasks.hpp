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
#include <string>

#include <Eigen/Dense>

#include "mondrian/estimators.hpp"
#include "mondrian/rng.hpp"

namespace mondrian {

enum class TaskKind {
  lipschitz_1d,             // f(x) = |x - 1/2|
  lipschitz_d,              // f(x) = ||x - (1/2, ..., 1/2)||_2
  c2_d,                     // f(x) = (1/d) sum_j cos(pi x_j)
  linear_1d,                // f(x) = 1 + x
  sine_1d,                  // f(x) = sin(pi x)
  constant,                 // f(x) = c
  classification_d,         // eta(x) = (1 + sin(2 pi x_1)) / 2
  classification_constant,  // eta(x) = c
};

TaskKind parse_task(const std::string& name);
std::string to_string(TaskKind kind);

/// Smoothness constants of a target, as used by the risk bounds.
struct TargetConstants {
  double lipschitz = 0.0;
  double sup_f = 0.0;
  double grad_sup = 0.0;
  double hess_sup = 0.0;  // +inf when f is not C^2
};

/// Synthetic regression or classification problem with X ~ U([0, 1]^d).
/// Regression labels are f(X) + sigma N(0, 1); classification labels are
/// Bernoulli(eta(X)).
class SyntheticTask {
 public:
  SyntheticTask(TaskKind kind, std::size_t d, double sigma = 0.0, double constant = 0.0);

  TaskKind kind() const { return kind_; }
  std::size_t dim() const { return d_; }
  double sigma() const { return sigma_; }
  double constant() const { return constant_; }
  bool is_classification() const {
    return kind_ == TaskKind::classification_d || kind_ == TaskKind::classification_constant;
  }

  /// Regression function f, or eta for classification tasks.
  double target(const Eigen::Ref<const Vector>& x) const;
  TargetConstants constants() const;

  /// Bayes 0-1 risk E[min(eta, 1 - eta)] by adaptive quadrature (classification only).
  double bayes_risk() const;

  PointMatrix sample_points(std::size_t n, RngStream& rng) const;
  Dataset sample(std::size_t n, RngStream& rng) const;

 private:
  TaskKind kind_;
  std::size_t d_;
  double sigma_;
  double constant_;
};

}  // namespace mondrian
