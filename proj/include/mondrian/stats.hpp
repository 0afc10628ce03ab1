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
#include <functional>
#include <span>
#include <vector>

namespace mondrian::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> values);

/// P(K > x) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double x);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;  // chi-square only
};

/// One-sample KS test against a continuous CDF, asymptotic p-value of sqrt(n) D.
TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS test; asymptotic p-value with effective size nm / (n + m).
/// Ties are handled by evaluating both ECDFs after each distinct value.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson chi-square goodness of fit of integer observations against a
/// discrete law on {0, 1, ...}. Bins are merged left to right until each holds
/// an expected count >= min_expected; the last bin absorbs the upper tail.
TestResult chi_square_gof(std::span<const long> observations,
                          const std::function<double(long)>& pmf, double min_expected = 5.0);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

}  // namespace mondrian::stats
