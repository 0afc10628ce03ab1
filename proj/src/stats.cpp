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

#include "mondrian/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "mondrian/errors.hpp"

namespace mondrian::stats {

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  out.n = values.size();
  if (values.empty()) return out;
  const Eigen::Map<const Eigen::ArrayXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  out.mean = v.mean();
  if (values.size() > 1) {
    const double var = (v - out.mean).square().sum() / static_cast<double>(values.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (x < 1.18) {
    // CDF series that converges fast for small x.
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(-m * m * pi * pi / (8.0 * x * x));
    }
    return 1.0 - std::sqrt(2.0 * pi) / x * cdf;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ArgumentError("ks_one_sample: no samples");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d), 0.0};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    const double v = (j == b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_survival(std::sqrt(ne) * d), 0.0};
}

TestResult chi_square_gof(std::span<const long> observations,
                          const std::function<double(long)>& pmf, double min_expected) {
  if (observations.empty()) throw ArgumentError("chi_square_gof: no observations");
  const auto n = static_cast<double>(observations.size());
  const long max_obs = *std::max_element(observations.begin(), observations.end());
  std::vector<double> counts(static_cast<std::size_t>(max_obs) + 1, 0.0);
  for (long v : observations) {
    if (v < 0) throw ArgumentError("chi_square_gof: negative observation");
    counts[static_cast<std::size_t>(v)] += 1.0;
  }

  // Bins [lo, hi) over the support; the final bin is [lo, inf).
  std::vector<double> obs_bins, exp_bins;
  double cum_p = 0.0, bin_obs = 0.0, bin_exp = 0.0;
  constexpr long kMaxSupport = 10'000'000;
  for (long k = 0; k < kMaxSupport; ++k) {
    const double p = pmf(k);
    bin_exp += n * p;
    bin_obs += k <= max_obs ? counts[static_cast<std::size_t>(k)] : 0.0;
    cum_p += p;
    const double tail_expected = n * (1.0 - cum_p);
    if (bin_exp >= min_expected) {
      obs_bins.push_back(bin_obs);
      exp_bins.push_back(bin_exp);
      bin_obs = bin_exp = 0.0;
    }
    if (k >= max_obs && tail_expected < min_expected) {
      // Remaining tail (plus any open bin) folds into the last bin.
      double rest_obs = bin_obs;
      for (long r = k + 1; r <= max_obs; ++r) rest_obs += counts[static_cast<std::size_t>(r)];
      const double rest_exp = bin_exp + std::max(0.0, tail_expected);
      if (obs_bins.empty()) {
        obs_bins.push_back(rest_obs);
        exp_bins.push_back(rest_exp);
      } else {
        obs_bins.back() += rest_obs;
        exp_bins.back() += rest_exp;
      }
      break;
    }
  }
  if (obs_bins.size() < 2) return {0.0, 1.0, 0.0};
  double stat = 0.0;
  for (std::size_t b = 0; b < obs_bins.size(); ++b) {
    const double diff = obs_bins[b] - exp_bins[b];
    stat += diff * diff / exp_bins[b];
  }
  const double df = static_cast<double>(obs_bins.size() - 1);
  const boost::math::chi_squared_distribution<double> dist(df);
  return {stat, boost::math::cdf(boost::math::complement(dist, stat)), df};
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw ArgumentError("pearson_correlation: sizes");
  const auto n = static_cast<Eigen::Index>(a.size());
  const Eigen::Map<const Eigen::ArrayXd> x(a.data(), n), y(b.data(), n);
  const Eigen::ArrayXd xc = x - x.mean();
  const Eigen::ArrayXd yc = y - y.mean();
  const double denom = std::sqrt(xc.square().sum() * yc.square().sum());
  return denom > 0.0 ? (xc * yc).sum() / denom : 0.0;
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("ols_fit: need >= 2 points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), n);
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(rhs);
  LinearFit fit{beta(1), beta(0), 0.0};
  if (n > 2) {
    const double rss = (rhs - design * beta).squaredNorm();
    const Eigen::Matrix2d cov = (design.transpose() * design).inverse() * (rss / static_cast<double>(n - 2));
    fit.slope_se = std::sqrt(cov(1, 1));
  }
  return fit;
}

}  // namespace mondrian::stats
