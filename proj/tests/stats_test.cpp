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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mondrian/errors.hpp"
#include "mondrian/rng.hpp"

namespace mondrian::stats {
namespace {

TEST(MeanSe, SmallSample) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanSe ms = mean_se(v);
  EXPECT_DOUBLE_EQ(ms.mean, 2.5);
  EXPECT_DOUBLE_EQ(ms.se, std::sqrt(5.0 / 3.0 / 4.0));
  EXPECT_EQ(ms.n, 4u);
}

TEST(Kolmogorov, SurvivalMatchesReferenceValues) {
  // Reference values of the limiting Kolmogorov survival function.
  EXPECT_NEAR(kolmogorov_survival(0.3), 0.9999906941986655, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639452436648751, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.049485876755377876, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(2.5), 7.453306344157342e-06, 1e-15);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  // Both series agree at the switch point.
  EXPECT_NEAR(kolmogorov_survival(1.18 - 1e-12), kolmogorov_survival(1.18 + 1e-12), 1e-10);
}

TEST(KsOneSample, StatisticAndPValue) {
  const TestResult r = ks_one_sample({0.8, 0.1, 0.95, 0.35, 0.4}, [](double u) { return u; });
  EXPECT_NEAR(r.statistic, 0.2, 1e-15);
  EXPECT_NEAR(r.p_value, 0.9882610776435244, 1e-9);
}

TEST(KsOneSample, DetectsWrongLaw) {
  RngStream rng(3);
  std::vector<double> good, bad;
  for (int i = 0; i < 5000; ++i) {
    const double u = rng.uniform();
    good.push_back(u);
    bad.push_back(u * u);
  }
  const auto uniform = [](double u) { return u; };
  EXPECT_GT(ks_one_sample(good, uniform).p_value, 1e-3);
  EXPECT_LT(ks_one_sample(bad, uniform).p_value, 1e-10);
}

TEST(KsTwoSample, StatisticWithTies) {
  const TestResult r = ks_two_sample({0.1, 0.2, 0.3, 0.4}, {0.25, 0.5, 0.6, 0.7, 0.9});
  EXPECT_NEAR(r.statistic, 0.8, 1e-15);
  EXPECT_NEAR(r.p_value, kolmogorov_survival(0.8 * std::sqrt(20.0 / 9.0)), 1e-15);
  const TestResult same = ks_two_sample({1, 2, 2, 3}, {1, 2, 2, 3});
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  // Discrete samples: ties across samples must not inflate D.
  EXPECT_NEAR(ks_two_sample({1, 1, 2, 2}, {1, 2, 2, 2}).statistic, 0.25, 1e-15);
}

TEST(ChiSquare, HandComputedTwoBins) {
  std::vector<long> obs(100, 1);
  for (int i = 0; i < 30; ++i) obs[static_cast<std::size_t>(i)] = 0;
  const TestResult r = chi_square_gof(obs, [](long k) { return k <= 1 ? 0.5 : 0.0; });
  EXPECT_NEAR(r.statistic, 16.0, 1e-12);
  EXPECT_EQ(r.df, 1.0);
  EXPECT_NEAR(r.p_value, 6.334248366623988e-05, 1e-12);
}

TEST(ChiSquare, PoissonSamplesFitAndShiftedDoNot) {
  RngStream rng(17);
  const double rate = 3.0;
  std::vector<long> obs, shifted;
  for (int i = 0; i < 10000; ++i) {
    // Count of Exp(rate) arrivals in [0, 1].
    long k = 0;
    for (double t = rng.exponential(rate); t <= 1.0; t += rng.exponential(rate)) ++k;
    obs.push_back(k);
    shifted.push_back(k + 1);
  }
  const auto pmf = [rate](long k) {
    return std::exp(-rate + static_cast<double>(k) * std::log(rate) - std::lgamma(k + 1.0));
  };
  EXPECT_GT(chi_square_gof(obs, pmf).p_value, 1e-3);
  EXPECT_LT(chi_square_gof(shifted, pmf).p_value, 1e-10);
}

TEST(Correlation, PerfectAndIndependent) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 10};
  const std::vector<double> c{5, 4, 3, 2, 1};
  EXPECT_NEAR(pearson_correlation(a, b), 1.0, 1e-15);
  EXPECT_NEAR(pearson_correlation(a, c), -1.0, 1e-15);
}

TEST(OlsFit, HandComputed) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1, 3, 2, 5};
  const LinearFit fit = ols_fit(x, y);
  EXPECT_NEAR(fit.slope, 1.1, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_NEAR(fit.slope_se, std::sqrt(1.35 / 5.0), 1e-12);
}

}  // namespace
}  // namespace mondrian::stats
