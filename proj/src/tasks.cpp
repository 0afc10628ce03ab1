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

#include "mondrian/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mondrian/errors.hpp"

namespace mondrian {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_one_dimensional(TaskKind kind) {
  return kind == TaskKind::lipschitz_1d || kind == TaskKind::linear_1d ||
         kind == TaskKind::sine_1d;
}

double eta_sine(double x1) { return 0.5 * (1.0 + std::sin(2.0 * kPi * x1)); }

}  // namespace

TaskKind parse_task(const std::string& name) {
  if (name == "lipschitz_1d") return TaskKind::lipschitz_1d;
  if (name == "lipschitz_d") return TaskKind::lipschitz_d;
  if (name == "c2_d") return TaskKind::c2_d;
  if (name == "linear_1d") return TaskKind::linear_1d;
  if (name == "sine_1d") return TaskKind::sine_1d;
  if (name == "constant") return TaskKind::constant;
  if (name == "classification_d") return TaskKind::classification_d;
  if (name == "classification_constant") return TaskKind::classification_constant;
  throw ArgumentError("unknown task '" + name + "'");
}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::lipschitz_1d: return "lipschitz_1d";
    case TaskKind::lipschitz_d: return "lipschitz_d";
    case TaskKind::c2_d: return "c2_d";
    case TaskKind::linear_1d: return "linear_1d";
    case TaskKind::sine_1d: return "sine_1d";
    case TaskKind::constant: return "constant";
    case TaskKind::classification_d: return "classification_d";
    case TaskKind::classification_constant: return "classification_constant";
  }
  return "?";
}

SyntheticTask::SyntheticTask(TaskKind kind, std::size_t d, double sigma, double constant)
    : kind_(kind), d_(d), sigma_(sigma), constant_(constant) {
  if (d_ < 1) throw ArgumentError("SyntheticTask: d must be >= 1");
  if (is_one_dimensional(kind_) && d_ != 1) {
    throw ArgumentError("SyntheticTask: " + to_string(kind_) + " requires d = 1");
  }
  if (!(sigma_ >= 0.0)) throw ArgumentError("SyntheticTask: sigma must be >= 0");
  if (kind_ == TaskKind::classification_constant && !(constant_ >= 0.0 && constant_ <= 1.0)) {
    throw ArgumentError("SyntheticTask: eta must lie in [0, 1]");
  }
}

double SyntheticTask::target(const Eigen::Ref<const Vector>& x) const {
  switch (kind_) {
    case TaskKind::lipschitz_1d: return std::abs(x(0) - 0.5);
    case TaskKind::lipschitz_d: return (x.array() - 0.5).matrix().norm();
    case TaskKind::c2_d: return (kPi * x.array()).cos().mean();
    case TaskKind::linear_1d: return 1.0 + x(0);
    case TaskKind::sine_1d: return std::sin(kPi * x(0));
    case TaskKind::constant: return constant_;
    case TaskKind::classification_d: return eta_sine(x(0));
    case TaskKind::classification_constant: return constant_;
  }
  return 0.0;
}

TargetConstants SyntheticTask::constants() const {
  const double d = static_cast<double>(d_);
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case TaskKind::lipschitz_1d: return {1.0, 0.5, 1.0, inf};
    case TaskKind::lipschitz_d: return {1.0, 0.5 * std::sqrt(d), 1.0, inf};
    case TaskKind::c2_d: return {kPi / std::sqrt(d), 1.0, kPi / std::sqrt(d), kPi * kPi / d};
    case TaskKind::linear_1d: return {1.0, 2.0, 1.0, 0.0};
    case TaskKind::sine_1d: return {kPi, 1.0, kPi, kPi * kPi};
    case TaskKind::constant: return {0.0, std::abs(constant_), 0.0, 0.0};
    case TaskKind::classification_d: return {kPi, 1.0, kPi, 2.0 * kPi * kPi};
    case TaskKind::classification_constant: return {0.0, constant_, 0.0, 0.0};
  }
  return {};
}

double SyntheticTask::bayes_risk() const {
  if (!is_classification()) throw ArgumentError("bayes_risk: not a classification task");
  if (kind_ == TaskKind::classification_constant) return std::min(constant_, 1.0 - constant_);
  auto integrand = [](double u) {
    const double eta = eta_sine(u);
    return std::min(eta, 1.0 - eta);
  };
  // min(eta, 1 - eta) has kinks at 0, 1/2 and 1; integrate piecewise.
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.5 * k, 0.5 * (k + 1), 15, 1e-12);
  }
  return total;
}

PointMatrix SyntheticTask::sample_points(std::size_t n, RngStream& rng) const {
  PointMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d_));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform();
  }
  return x;
}

Dataset SyntheticTask::sample(std::size_t n, RngStream& rng) const {
  Dataset data;
  data.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d_));
  data.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) data.x(i, j) = rng.uniform();
    const double f = target(data.x.row(i).transpose());
    if (is_classification()) {
      data.y(i) = rng.uniform() < f ? 1.0 : 0.0;
    } else {
      data.y(i) = sigma_ > 0.0 ? f + sigma_ * rng.normal() : f;
    }
  }
  return data;
}

}  // namespace mondrian
