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

#include "mondrian/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "mondrian/errors.hpp"
#include "mondrian/oracles.hpp"
#include "mondrian/parallel.hpp"
#include "mondrian/partition.hpp"
#include "mondrian/stats.hpp"

namespace mondrian::harness {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFamilyAlpha = 1e-3;
constexpr double kBand = 4.0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> to_vector(const Vector& v) { return {v.begin(), v.end()}; }

Verdict band_verdict(std::string name, double mean, double oracle, double se, std::size_t n) {
  const double dev = std::abs(mean - oracle);
  return {std::move(name), "|mean - oracle| <= 4 SE", dev, kBand * se, n, dev <= kBand * se};
}

// Everything one replicate of a risk experiment needs, drawn from its own
// stream: data from child 0, forest seed from child 1, test points from child 2.
struct Replicate {
  Dataset data;
  PointMatrix test;
  Vector truth;
  std::uint64_t forest_seed = 0;
};

Replicate draw_replicate(const SyntheticTask& task, std::size_t n, std::size_t n_test,
                         const RngStream& stream) {
  Replicate rep;
  RngStream data_rng = stream.child(0);
  rep.data = task.sample(n, data_rng);
  rep.forest_seed = stream.child(1).seed();
  RngStream test_rng = stream.child(2);
  rep.test = task.sample_points(n_test, test_rng);
  rep.truth.resize(rep.test.rows());
  for (Eigen::Index i = 0; i < rep.test.rows(); ++i) {
    rep.truth(i) = task.target(rep.test.row(i).transpose());
  }
  return rep;
}

// Grows trees one at a time (without keeping them) and hands the running
// forest prediction on the test points to `visit` at every checkpoint.
template <typename Visit>
void forest_predictions(const Replicate& rep, std::size_t d, double lifetime,
                        const std::vector<std::size_t>& checkpoints, Visit&& visit) {
  const BoxRegion unit = BoxRegion::unit(d);
  Vector sum = Vector::Zero(rep.test.rows());
  std::size_t next = 0;
  for (std::size_t m = 0; m < checkpoints.back(); ++m) {
    RngStream rng = tree_stream(rep.forest_seed, m);
    const MondrianTreeModel tree = fit_tree(sample_mondrian(unit, lifetime, rng), rep.data);
    for (Eigen::Index i = 0; i < rep.test.rows(); ++i) sum(i) += tree.predict_unchecked(rep.test.row(i));
    if (m + 1 == checkpoints[next]) {
      visit(next, Vector(sum / static_cast<double>(m + 1)));
      ++next;
    }
  }
}

void check_checkpoints(const std::vector<std::size_t>& checkpoints) {
  if (checkpoints.empty() || checkpoints.front() == 0 ||
      !std::is_sorted(checkpoints.begin(), checkpoints.end(), std::less_equal<>())) {
    throw ArgumentError("tree-count checkpoints must be increasing and >= 1");
  }
}

template <typename Metric>
std::vector<RiskEstimate> replicate_curve(const SyntheticTask& task, std::size_t n, double lifetime,
                                          const std::vector<std::size_t>& checkpoints,
                                          std::size_t replicates, std::uint64_t seed,
                                          const RunOptions& options, Metric&& metric) {
  if (replicates < 2) throw ArgumentError("estimate_risk: replicates must be >= 2");
  if (options.n_test < 1) throw ArgumentError("estimate_risk: n_test must be >= 1");
  if (!(lifetime >= 0.0)) throw ArgumentError("estimate_risk: lifetime must be >= 0");
  check_checkpoints(checkpoints);
  std::vector<std::vector<double>> per_rep(replicates, std::vector<double>(checkpoints.size()));
  const RngStream master(seed);
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    const Replicate rep = draw_replicate(task, n, options.n_test, master.child(r));
    forest_predictions(rep, task.dim(), lifetime, checkpoints, [&](std::size_t k, const Vector& pred) {
      per_rep[r][k] = metric(rep, pred);
    });
  });
  std::vector<RiskEstimate> out;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    std::vector<double> column(replicates);
    for (std::size_t r = 0; r < replicates; ++r) column[r] = per_rep[r][k];
    const auto ms = stats::mean_se(column);
    out.push_back({ms.mean, ms.se, replicates});
  }
  return out;
}

double squared_error(const Replicate& rep, const Vector& pred) {
  return (pred - rep.truth).squaredNorm() / static_cast<double>(pred.size());
}

double excess_classification_loss(const Replicate& rep, const Vector& pred) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const int predicted = pred(i) >= 0.5 ? 1 : 0;
    const int bayes = rep.truth(i) >= 0.5 ? 1 : 0;
    if (predicted != bayes) total += std::abs(2.0 * rep.truth(i) - 1.0);
  }
  return total / static_cast<double>(pred.size());
}

void check_interior(const Vector& x, std::size_t d, const char* where) {
  if (static_cast<std::size_t>(x.size()) != d || !((x.array() > 0.0).all() && (x.array() < 1.0).all())) {
    throw ArgumentError(std::string(where) + ": x must be strictly inside (0, 1)^d");
  }
}

void check_samples(std::size_t samples, const char* where) {
  if (samples < 2) throw ArgumentError(std::string(where) + ": need at least 2 samples");
}

double theoretical_slope(ScheduleKind kind, std::size_t d) {
  const double dd = static_cast<double>(d);
  switch (kind) {
    case ScheduleKind::lipschitz: return -2.0 / (dd + 2.0);
    case ScheduleKind::c2: return -4.0 / (dd + 4.0);
    default: return kNaN;
  }
}

double grid_oracle(const SyntheticTask& task, ScheduleKind kind, std::size_t n, double lifetime,
                   std::size_t trees) {
  if (!(lifetime > 0.0) || task.is_classification()) return kNaN;
  const TargetConstants c = task.constants();
  oracles::RiskBoundParams p;
  p.d = task.dim();
  p.lifetime = lifetime;
  p.n = static_cast<double>(n);
  p.sigma2 = task.sigma() * task.sigma();
  p.lipschitz = c.lipschitz;
  p.sup_f = c.sup_f;
  p.grad_sup = c.grad_sup;
  p.hess_sup = c.hess_sup;
  p.trees = static_cast<double>(trees);
  if (kind == ScheduleKind::c2 && std::isfinite(c.hess_sup)) return oracles::c2_risk_bound(p);
  return oracles::lipschitz_risk_bound(p);
}

json sweep_config_json(const SyntheticTask& task, const SweepConfig& config, std::uint64_t seed,
                       const RunOptions& options) {
  return {{"task", to_string(task.kind())},
          {"d", task.dim()},
          {"sigma", task.sigma()},
          {"n_grid", config.n_grid},
          {"schedule", to_string(config.schedule)},
          {"scale", config.scale},
          {"forest_size", config.forest_size.describe()},
          {"replicates", config.replicates},
          {"slope_tolerance", config.slope_tolerance},
          {"n_test", options.n_test},
          {"seed", seed}};
}

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

json ExperimentReport::to_json(bool include_timing) const {
  auto number = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  json rows = json::array();
  for (const GridPoint& g : grid) {
    rows.push_back({{"label", g.label},
                    {"n", g.n},
                    {"lifetime", number(g.lifetime)},
                    {"trees", g.trees},
                    {"risk", number(g.risk)},
                    {"se", number(g.se)},
                    {"replicates", g.replicates},
                    {"oracle", number(g.oracle)}});
  }
  json metric_obj = json::object();
  for (const auto& [k, v] : metrics) metric_obj[k] = number(v);
  json verdict_rows = json::array();
  for (const Verdict& v : verdicts) {
    verdict_rows.push_back({{"name", v.name},
                            {"rule", v.rule},
                            {"statistic", number(v.statistic)},
                            {"threshold", number(v.threshold)},
                            {"sample_size", v.sample_size},
                            {"pass", v.pass}});
  }
  json doc = {{"experiment", experiment}, {"config", config},       {"grid", std::move(rows)},
              {"metrics", std::move(metric_obj)}, {"verdicts", std::move(verdict_rows)},
              {"passed", passed()}};
  if (include_timing) doc["wall_clock_seconds"] = wall_clock_seconds;
  return doc;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  if (!grid.empty()) {
    out << "label,n,lifetime,trees,risk,se,replicates,oracle\n";
    for (const GridPoint& g : grid) {
      out << g.label << ',' << g.n << ',' << g.lifetime << ',' << g.trees << ',' << g.risk << ','
          << g.se << ',' << g.replicates << ',';
      if (std::isfinite(g.oracle)) out << g.oracle;
      out << '\n';
    }
  } else {
    out << "name,statistic,threshold,sample_size,pass,rule\n";
    for (const Verdict& v : verdicts) {
      out << v.name << ',' << v.statistic << ',' << v.threshold << ',' << v.sample_size << ','
          << (v.pass ? "PASS" : "FAIL") << ",\"" << v.rule << "\"\n";
    }
  }
  return out.str();
}

RiskEstimate estimate_risk(const SyntheticTask& task, std::size_t n, double lifetime,
                           std::size_t trees, std::size_t replicates, std::uint64_t seed,
                           const RunOptions& options) {
  if (task.is_classification()) throw ArgumentError("estimate_risk: regression task expected");
  return estimate_risk_curve(task, n, lifetime, {trees}, replicates, seed, options).front();
}

std::vector<RiskEstimate> estimate_risk_curve(const SyntheticTask& task, std::size_t n,
                                              double lifetime,
                                              const std::vector<std::size_t>& checkpoints,
                                              std::size_t replicates, std::uint64_t seed,
                                              const RunOptions& options) {
  return replicate_curve(task, n, lifetime, checkpoints, replicates, seed, options, squared_error);
}

RiskEstimate estimate_excess_risk(const SyntheticTask& task, std::size_t n, double lifetime,
                                  std::size_t trees, std::size_t replicates, std::uint64_t seed,
                                  const RunOptions& options) {
  if (!task.is_classification()) {
    throw ArgumentError("estimate_excess_risk: classification task expected");
  }
  return replicate_curve(task, n, lifetime, {trees}, replicates, seed, options,
                         excess_classification_loss)
      .front();
}

ExperimentReport verify_leaf_count(std::size_t d, double lifetime, std::size_t samples,
                                   std::uint64_t seed) {
  check_samples(samples, "verify_leaf_count");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "verify-leaf-count";
  report.config = {{"d", d}, {"lifetime", lifetime}, {"samples", samples}, {"seed", seed}};

  const BoxRegion unit = BoxRegion::unit(d);
  const RngStream master(seed);
  std::vector<double> counts(samples);
  std::vector<long> splits(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    RngStream rng = master.child(s);
    const std::size_t k = leaf_count(sample_mondrian(unit, lifetime, rng));
    counts[s] = static_cast<double>(k);
    splits[s] = static_cast<long>(k) - 1;
  }
  const auto ms = stats::mean_se(counts);
  const double oracle = oracles::expected_leaf_count(lifetime, d);
  report.metrics = {{"mean", ms.mean}, {"se", ms.se}, {"oracle", oracle}};
  report.verdicts.push_back(band_verdict("leaf_count_mean", ms.mean, oracle, ms.se, samples));

  if (d == 1 && lifetime > 0.0) {
    // Splits of the 1-d process form a Poisson process of intensity lambda.
    const auto chi = stats::chi_square_gof(splits, [lifetime](long k) {
      return std::exp(-lifetime + static_cast<double>(k) * std::log(lifetime) -
                      std::lgamma(static_cast<double>(k) + 1.0));
    });
    report.metrics["chi2_statistic"] = chi.statistic;
    report.metrics["chi2_df"] = chi.df;
    report.metrics["chi2_p_value"] = chi.p_value;
    report.verdicts.push_back({"poisson_split_count", "chi-square p-value >= 1e-3", chi.p_value,
                               kFamilyAlpha, samples, chi.p_value >= kFamilyAlpha});
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

ExperimentReport verify_cell_distribution(std::size_t d, double lifetime, const Vector& x,
                                          std::size_t samples, std::uint64_t seed) {
  check_interior(x, d, "verify_cell_distribution");
  check_samples(samples, "verify_cell_distribution");
  if (!(lifetime > 0.0)) throw ArgumentError("verify_cell_distribution: lifetime must be > 0");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "verify-cell-dist";
  report.config = {{"d", d},
                   {"lifetime", lifetime},
                   {"x", to_vector(x)},
                   {"samples", samples},
                   {"seed", seed}};

  // Column 2j: distance from x_j to the lower edge; column 2j+1: to the upper edge.
  const std::size_t edges = 2 * d;
  std::vector<std::vector<double>> dist(edges, std::vector<double>(samples));
  std::vector<std::vector<bool>> atom(edges, std::vector<bool>(samples));
  const BoxRegion unit = BoxRegion::unit(d);
  const RngStream master(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    RngStream rng = master.child(s);
    const MondrianPartition p = sample_mondrian(unit, lifetime, rng);
    const BoxRegion cell = p.cell(p.descend(x));
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      dist[2 * j][s] = x(jj) - cell.lower(jj);
      atom[2 * j][s] = cell.lower(jj) == 0.0;
      dist[2 * j + 1][s] = cell.upper(jj) - x(jj);
      atom[2 * j + 1][s] = cell.upper(jj) == 1.0;
    }
  }

  const double ks_alpha = kFamilyAlpha / static_cast<double>(edges);
  const double n = static_cast<double>(samples);
  for (std::size_t e = 0; e < edges; ++e) {
    const auto j = static_cast<Eigen::Index>(e / 2);
    const std::string side = (e % 2 == 0 ? "lower" : "upper");
    const std::string tag = side + "_" + std::to_string(j);
    const double margin = e % 2 == 0 ? x(j) : 1.0 - x(j);

    const double atom_mass = std::exp(-lifetime * margin);
    const double freq =
        static_cast<double>(std::count(atom[e].begin(), atom[e].end(), true)) / n;
    const double se = std::sqrt(atom_mass * (1.0 - atom_mass) / n);
    report.metrics["atom_freq_" + tag] = freq;
    report.metrics["atom_mass_" + tag] = atom_mass;
    report.verdicts.push_back(band_verdict("atom_" + tag, freq, atom_mass, se, samples));

    std::vector<double> interior;
    for (std::size_t s = 0; s < samples; ++s) {
      if (!atom[e][s]) interior.push_back(dist[e][s]);
    }
    if (interior.size() < 2) continue;
    const double norm = -std::expm1(-lifetime * margin);
    const auto ks = stats::ks_one_sample(interior, [&](double t) {
      return t >= margin ? 1.0 : oracles::truncated_exp_cdf(t, lifetime, margin) / norm;
    });
    report.metrics["ks_p_" + tag] = ks.p_value;
    std::ostringstream rule;
    rule << "KS p-value >= " << ks_alpha << " (1e-3 Bonferroni over " << edges << ")";
    report.verdicts.push_back({"ks_interior_" + tag, rule.str(), ks.p_value, ks_alpha,
                               interior.size(), ks.p_value >= ks_alpha});
  }

  const double rho_limit = 4.0 / std::sqrt(n);
  for (std::size_t a = 0; a < edges; ++a) {
    for (std::size_t b = a + 1; b < edges; ++b) {
      const double rho = stats::pearson_correlation(dist[a], dist[b]);
      report.verdicts.push_back({"independence_" + std::to_string(a) + "_" + std::to_string(b),
                                 "|rho| < 4 / sqrt(N)", std::abs(rho), rho_limit, samples,
                                 std::abs(rho) < rho_limit});
    }
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

ExperimentReport verify_diameter(std::size_t d, double lifetime, const Vector& x,
                                 std::size_t samples, std::uint64_t seed) {
  if (static_cast<std::size_t>(x.size()) != d || !BoxRegion::unit(d).contains(x)) {
    throw ArgumentError("verify_diameter: x must lie in [0, 1]^d");
  }
  check_samples(samples, "verify_diameter");
  if (!(lifetime > 0.0)) throw ArgumentError("verify_diameter: lifetime must be > 0");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "verify-diameter";
  report.config = {{"d", d},
                   {"lifetime", lifetime},
                   {"x", to_vector(x)},
                   {"samples", samples},
                   {"seed", seed}};

  const BoxRegion unit = BoxRegion::unit(d);
  const RngStream master(seed);
  std::vector<double> diam(samples), diam2(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    RngStream rng = master.child(s);
    const MondrianPartition p = sample_mondrian(unit, lifetime, rng);
    diam[s] = cell_l2_diameter(p.cell(p.descend(x)));
    diam2[s] = diam[s] * diam[s];
  }
  const double n = static_cast<double>(samples);
  const double root_d = std::sqrt(static_cast<double>(d));
  for (int k = 1; k <= 10; ++k) {
    const double delta = root_d * k / 10.0;
    const auto exceed = std::count_if(diam.begin(), diam.end(), [&](double v) { return v >= delta; });
    const double freq = static_cast<double>(exceed) / n;
    const double se = std::sqrt(freq * (1.0 - freq) / n);
    const double bound = oracles::diameter_tail_bound(delta, lifetime, d);
    std::ostringstream name;
    name << "tail_delta_" << delta;
    report.metrics["tail_freq_" + std::to_string(k)] = freq;
    report.metrics["tail_bound_" + std::to_string(k)] = bound;
    report.verdicts.push_back({name.str(), "P(D >= delta) <= bound + 4 SE", freq, bound + kBand * se,
                               samples, freq <= bound + kBand * se});
  }
  const auto m2 = stats::mean_se(diam2);
  const double bound2 = oracles::diameter_second_moment_bound(lifetime, d);
  report.metrics["mean_d2"] = m2.mean;
  report.metrics["mean_d2_se"] = m2.se;
  report.metrics["mean_d2_bound"] = bound2;
  report.verdicts.push_back({"second_moment", "E[D^2] <= 4d/lambda^2 + 4 SE", m2.mean,
                             bound2 + kBand * m2.se, samples, m2.mean <= bound2 + kBand * m2.se});
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

ExperimentReport verify_restriction(std::size_t d, double lifetime, const BoxRegion& sub,
                                    std::size_t samples, std::uint64_t seed) {
  const BoxRegion unit = BoxRegion::unit(d);
  if (sub.dim() != d || !unit.contains_box(sub)) {
    throw ArgumentError("verify_restriction: sub-box not contained in [0, 1]^d");
  }
  check_samples(samples, "verify_restriction");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "verify-restriction";
  report.config = {{"d", d},
                   {"lifetime", lifetime},
                   {"sub_lower", to_vector(sub.lower)},
                   {"sub_upper", to_vector(sub.upper)},
                   {"samples", samples},
                   {"seed", seed}};

  const RngStream master(seed);
  std::vector<double> restricted(samples), direct(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    RngStream full_rng = master.child(s).child(0);
    RngStream direct_rng = master.child(s).child(1);
    const MondrianPartition full = sample_mondrian(unit, lifetime, full_rng);
    restricted[s] = static_cast<double>(leaf_count(restrict_to(full, sub)));
    direct[s] = static_cast<double>(leaf_count(sample_mondrian(sub, lifetime, direct_rng)));
  }
  const auto ms = stats::mean_se(restricted);
  const auto md = stats::mean_se(direct);
  const double oracle = oracles::expected_leaf_count_box(lifetime, sub.sides());
  report.metrics = {{"restricted_mean", ms.mean}, {"restricted_se", ms.se},
                    {"direct_mean", md.mean},     {"direct_se", md.se},
                    {"oracle", oracle}};
  report.verdicts.push_back(band_verdict("restricted_leaf_count_mean", ms.mean, oracle, ms.se, samples));
  if (ms.se > 0.0 || md.se > 0.0) {
    const auto ks = stats::ks_two_sample(restricted, direct);
    report.metrics["ks_two_sample_p"] = ks.p_value;
    report.verdicts.push_back({"restricted_vs_direct_ks", "two-sample KS p-value >= 1e-3",
                               ks.p_value, kFamilyAlpha, samples, ks.p_value >= kFamilyAlpha});
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

ExperimentReport verify_tree_bias_1d(double lifetime, std::size_t replicates, std::uint64_t seed,
                                     double relative_tolerance) {
  check_samples(replicates, "verify_tree_bias_1d");
  if (!(lifetime > 0.0)) throw ArgumentError("verify_tree_bias_1d: lifetime must be > 0");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "verify-tree-bias-1d";
  report.config = {{"lifetime", lifetime},
                   {"replicates", replicates},
                   {"seed", seed},
                   {"relative_tolerance", relative_tolerance}};

  const std::vector<double> probes{0.0, 0.1, 0.5, 0.9};
  const BoxRegion unit = BoxRegion::unit(1);
  const RngStream master(seed);
  std::vector<double> bias(replicates);
  std::vector<std::vector<double>> fbar(probes.size(), std::vector<double>(replicates));
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng = master.child(r);
    const MondrianPartition p = sample_mondrian(unit, lifetime, rng);
    double total = 0.0;
    for (const BoxRegion& c : leaf_cells(p)) total += std::pow(c.upper(0) - c.lower(0), 3) / 12.0;
    bias[r] = total;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const BoxRegion c = p.cell(p.descend(Vector::Constant(1, probes[k])));
      fbar[k][r] = 1.0 + 0.5 * (c.lower(0) + c.upper(0));
    }
  }
  const auto mb = stats::mean_se(bias);
  const double oracle = oracles::tree_bias_exact_1d(lifetime);
  const double rel = std::abs(mb.mean - oracle) / oracle;
  report.metrics = {{"bias_mean", mb.mean}, {"bias_se", mb.se}, {"bias_oracle", oracle}};
  report.verdicts.push_back({"integrated_bias", "|mean - oracle| / oracle <= tolerance", rel,
                             relative_tolerance, replicates, rel <= relative_tolerance});
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const auto mf = stats::mean_se(fbar[k]);
    const double tilde = oracles::tilde_f_1d(lifetime, probes[k]);
    std::ostringstream name;
    name << "tilde_f_at_" << probes[k];
    report.metrics[name.str() + "_mean"] = mf.mean;
    report.metrics[name.str() + "_oracle"] = tilde;
    report.verdicts.push_back(band_verdict(name.str(), mf.mean, tilde, mf.se, replicates));
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

std::size_t ForestSizeRule::trees_for(std::size_t n, std::size_t d) const {
  return scheduled ? forest_size_schedule(ForestSizeKind::c2, n, d, scale) : fixed;
}

std::string ForestSizeRule::describe() const {
  std::ostringstream out;
  if (scheduled) {
    out << "c2(scale=" << scale << ")";
  } else {
    out << "fixed(" << fixed << ")";
  }
  return out.str();
}

ExperimentReport rate_sweep(const SyntheticTask& task, const SweepConfig& config,
                            std::uint64_t seed, const RunOptions& options) {
  if (config.n_grid.size() < 3) throw ArgumentError("rate_sweep: need at least 3 grid points");
  if (task.is_classification()) throw ArgumentError("rate_sweep: regression task expected");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "rate-sweep";
  report.config = sweep_config_json(task, config, seed, options);

  const RngStream master(seed);
  std::vector<double> log_n, log_risk;
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    const std::size_t n = config.n_grid[i];
    const double lifetime = lifetime_schedule(config.schedule, n, task.dim(), config.scale);
    const std::size_t trees = config.forest_size.trees_for(n, task.dim());
    const RiskEstimate est =
        estimate_risk(task, n, lifetime, trees, config.replicates, master.child(i).seed(), options);
    report.grid.push_back({"forest", n, lifetime, trees, est.mean, est.se, est.replicates,
                           grid_oracle(task, config.schedule, n, lifetime, trees)});
    log_n.push_back(std::log(static_cast<double>(n)));
    log_risk.push_back(std::log(est.mean));
  }
  const auto fit = stats::ols_fit(log_n, log_risk);
  report.metrics = {{"slope", fit.slope}, {"slope_se", fit.slope_se}, {"intercept", fit.intercept}};
  const double target = theoretical_slope(config.schedule, task.dim());
  const std::size_t points = config.n_grid.size();
  if (std::isfinite(target)) {
    const double dev = std::abs(fit.slope - target);
    report.metrics["target_slope"] = target;
    report.verdicts.push_back({"log_log_slope", "|slope - target| <= tolerance", dev,
                               config.slope_tolerance, points, dev <= config.slope_tolerance});
  } else if (config.schedule == ScheduleKind::consistency) {
    report.verdicts.push_back({"risk_decreasing", "slope < 0", fit.slope, 0.0, points, fit.slope < 0.0});
  } else {
    report.verdicts.push_back({"bias_floor", "|slope| <= tolerance", std::abs(fit.slope),
                               config.slope_tolerance, points,
                               std::abs(fit.slope) <= config.slope_tolerance});
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

std::vector<double> default_lifetime_grid(std::size_t n) {
  constexpr int kPoints = 12;
  std::vector<double> grid(kPoints);
  const double top = std::log(static_cast<double>(n));
  for (int k = 0; k < kPoints; ++k) grid[k] = std::exp(top * k / (kPoints - 1));
  grid.back() = static_cast<double>(n);
  return grid;
}

ExperimentReport tree_vs_forest(const TreeVsForestConfig& config, std::uint64_t seed,
                                const RunOptions& options) {
  if (config.n < 18) throw ArgumentError("tree_vs_forest: n must be >= 18");
  if (config.forest_trees < 1) throw ArgumentError("tree_vs_forest: M must be >= 1");
  const std::vector<double> grid =
      config.lifetime_grid.empty() ? default_lifetime_grid(config.n) : config.lifetime_grid;
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "tree-vs-forest";
  report.config = {{"n", config.n},
                   {"lifetime_grid", grid},
                   {"forest_trees", config.forest_trees},
                   {"replicates", config.replicates},
                   {"sigma", config.sigma},
                   {"n_test", options.n_test},
                   {"seed", seed}};

  const SyntheticTask linear(TaskKind::linear_1d, 1, config.sigma);
  const SyntheticTask sine(TaskKind::sine_1d, 1, config.sigma);
  const double sigma2 = config.sigma * config.sigma;
  const RngStream master(seed);
  double min_linear_tree = kInfinity, min_sine_tree = kInfinity, min_sine_forest = kInfinity;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lam = grid[k];
    const RiskEstimate lin = estimate_risk(linear, config.n, lam, 1, config.replicates,
                                           master.child(k).child(0).seed(), options);
    const auto curve = estimate_risk_curve(sine, config.n, lam, {1, config.forest_trees},
                                           config.replicates, master.child(k).child(1).seed(), options);
    report.grid.push_back({"linear_tree", config.n, lam, 1, lin.mean, lin.se, lin.replicates,
                           oracles::tree_bias_exact_1d(lam)});
    report.grid.push_back({"sine_tree", config.n, lam, 1, curve[0].mean, curve[0].se,
                           curve[0].replicates, kNaN});
    report.grid.push_back({"sine_forest", config.n, lam, config.forest_trees, curve[1].mean,
                           curve[1].se, curve[1].replicates, kNaN});
    min_linear_tree = std::min(min_linear_tree, lin.mean);
    min_sine_tree = std::min(min_sine_tree, curve[0].mean);
    min_sine_forest = std::min(min_sine_forest, curve[1].mean);
  }
  const double lower = oracles::tree_lower_bound_1d(config.n, sigma2);
  report.metrics = {{"min_linear_tree_risk", min_linear_tree},
                    {"tree_lower_bound", lower},
                    {"min_sine_tree_risk", min_sine_tree},
                    {"min_sine_forest_risk", min_sine_forest}};
  report.verdicts.push_back({"tree_lower_bound", "min_lambda tree risk >= 0.9 * lower bound",
                             min_linear_tree, 0.9 * lower, config.replicates,
                             min_linear_tree >= 0.9 * lower});
  report.verdicts.push_back({"forest_beats_tree", "min forest risk <= 0.95 * min tree risk",
                             min_sine_forest, 0.95 * min_sine_tree, config.replicates,
                             min_sine_forest <= 0.95 * min_sine_tree});
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

ExperimentReport classification_sweep(const SyntheticTask& task, const SweepConfig& config,
                                       std::uint64_t seed, const RunOptions& options) {
  if (!task.is_classification()) {
    throw ArgumentError("classification_sweep: classification task expected");
  }
  if (config.n_grid.size() < 2) throw ArgumentError("classification_sweep: need >= 2 grid points");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "classify-sweep";
  report.config = sweep_config_json(task, config, seed, options);
  report.metrics["bayes_risk"] = task.bayes_risk();

  const RngStream master(seed);
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    const std::size_t n = config.n_grid[i];
    const double lifetime = lifetime_schedule(config.schedule, n, task.dim(), config.scale);
    const std::size_t trees = config.forest_size.trees_for(n, task.dim());
    const RiskEstimate est = estimate_excess_risk(task, n, lifetime, trees, config.replicates,
                                                  master.child(i).seed(), options);
    report.grid.push_back({"excess_risk", n, lifetime, trees, est.mean, est.se, est.replicates, kNaN});
  }
  for (std::size_t i = 0; i + 1 < report.grid.size(); ++i) {
    const GridPoint& a = report.grid[i];
    const GridPoint& b = report.grid[i + 1];
    const double drop = a.risk - b.risk;
    const double margin = 2.0 * std::hypot(a.se, b.se);
    report.verdicts.push_back({"decrease_" + std::to_string(a.n) + "_" + std::to_string(b.n),
                               "risk(n_i) - risk(n_{i+1}) > 2 SE", drop, margin, config.replicates,
                               drop > margin});
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

}  // namespace mondrian::harness
