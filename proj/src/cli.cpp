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

#include "mondrian/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mondrian/errors.hpp"
#include "mondrian/estimators.hpp"
#include "mondrian/harness.hpp"
#include "mondrian/oracles.hpp"
#include "mondrian/partition.hpp"
#include "mondrian/serialization.hpp"
#include "mondrian/tasks.hpp"

namespace mondrian::cli {
namespace {

using nlohmann::json;
using Settings = std::map<std::string, std::string>;

struct Field {
  std::string key;
  std::string help;
  std::string fallback;
  bool is_flag = false;
  std::set<std::string> commands;  // empty: every subcommand
  std::map<std::string, std::string> overrides = {};
};

const std::set<std::string> kRegressionRisk{"risk", "rate-sweep", "fit"};

const std::vector<Field>& field_table() {
  static const std::vector<Field> table = {
      {"d", "dimension of the unit cube", "1", false,
       {"sample", "verify-leaf-count", "verify-cell-dist", "verify-diameter", "verify-restriction",
        "risk", "rate-sweep", "classify-sweep", "fit"}},
      {"lifetime", "lifetime lambda; for risk/fit, derived from --schedule when absent", "", false,
       {"sample", "verify-leaf-count", "verify-cell-dist", "verify-diameter", "verify-restriction",
        "risk", "fit"}},
      {"max_splits", "split budget per partition before failing", "1000000", false, {"sample", "fit"}},
      {"samples", "number of independent partitions", "10000", false,
       {"verify-leaf-count", "verify-cell-dist", "verify-diameter", "verify-restriction"}},
      {"x", "query point, comma separated (one value is broadcast)", "0.5", false,
       {"verify-cell-dist", "verify-diameter"}},
      {"sub_lower", "lower corner of the sub-box", "0.25", false, {"verify-restriction"}},
      {"sub_upper", "upper corner of the sub-box", "0.75", false, {"verify-restriction"}},
      {"task",
       "synthetic task: lipschitz_1d, lipschitz_d, c2_d, linear_1d, sine_1d, constant, "
       "classification_d, classification_constant",
       "lipschitz_d", false,
       {"risk", "rate-sweep", "classify-sweep", "fit"},
       {{"classify-sweep", "classification_d"}}},
      {"sigma", "noise standard deviation", "1", false,
       {"risk", "rate-sweep", "tree-vs-forest", "fit"}},
      {"constant", "value of the constant task (or eta of classification_constant)", "0.5", false,
       {"risk", "rate-sweep", "classify-sweep", "fit"}},
      {"n", "training sample size", "1000", false,
       {"risk", "tree-vs-forest", "fit"},
       {{"tree-vs-forest", "3000"}}},
      {"n_grid", "comma separated training sizes", "256,512,1024,2048,4096,8192,16384", false,
       {"rate-sweep", "classify-sweep"},
       {{"classify-sweep", "512,2048,8192"}}},
      {"lifetime_grid", "comma separated lifetimes (default: 12 geometric points on [1, n])", "",
       false, {"tree-vs-forest"}},
      {"schedule", "lifetime schedule: lipschitz, c2, consistency, constant", "lipschitz", false,
       {"risk", "rate-sweep", "classify-sweep", "fit"}},
      {"scale", "multiplier of the lifetime schedule", "1", false,
       {"risk", "rate-sweep", "classify-sweep", "fit"}},
      {"trees", "forest size M (used when --forest-size is fixed)", "1", false,
       {"risk", "rate-sweep", "tree-vs-forest", "classify-sweep", "fit"},
       {{"tree-vs-forest", "100"}, {"classify-sweep", "50"}}},
      {"forest_size", "forest size rule: fixed or c2", "fixed", false,
       {"rate-sweep", "classify-sweep"}},
      {"forest_scale", "multiplier of the c2 forest size rule", "1", false,
       {"rate-sweep", "classify-sweep"}},
      {"replicates", "Monte-Carlo replicates per grid point", "20", false,
       {"risk", "rate-sweep", "tree-vs-forest", "classify-sweep"}},
      {"slope_tolerance", "allowed deviation of the log-log slope", "0.15", false, {"rate-sweep"}},
      {"n_test", "test points per replicate", "2000", false,
       {"risk", "rate-sweep", "tree-vs-forest", "classify-sweep"}},
      {"data", "training CSV (x_1..x_d,y); generated from --task when absent", "", false, {"fit"}},
      {"model", "forest model JSON written by fit", "", false, {"predict"}},
      {"points", "CSV of query points", "", false, {"predict"}},
      {"classify", "also emit the plug-in class 1{f >= 1/2}", "false", true, {"predict"}},
      {"seed", "64-bit master seed (falls back to MF_SEED, then 0)", "", false, {}},
      {"output", "output path, - for stdout", "-", false, {}},
      {"format", "output format: json or csv", "json", false, {}},
      {"threads", "worker threads", "1", false, {}},
      {"timing", "include wall-clock seconds in the report", "false", true, {}},
  };
  return table;
}

std::string flag_name(const std::string& key) {
  std::string out = key;
  std::replace(out.begin(), out.end(), '_', '-');
  return "--" + out;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool applies(const Field& f, const std::string& command) {
  return f.commands.empty() || f.commands.count(command) > 0;
}

std::string default_for(const Field& f, const std::string& command) {
  const auto it = f.overrides.find(command);
  return it == f.overrides.end() ? f.fallback : it->second;
}

// Typed access to the merged settings of one invocation.
class Values {
 public:
  Values(std::string command, Settings settings)
      : command_(std::move(command)), settings_(std::move(settings)) {}

  const std::string& command() const { return command_; }
  const Settings& all() const { return settings_; }
  const std::string& str(const std::string& key) const { return settings_.at(key); }
  bool has(const std::string& key) const { return !str(key).empty(); }

  double real(const std::string& key) const { return parse_real(key, str(key)); }

  std::size_t count(const std::string& key) const { return parse_count(key, str(key)); }

  std::uint64_t u64(const std::string& key) const {
    std::uint64_t v = 0;
    const std::string& s = str(key);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad(key, s);
    return v;
  }

  bool flag(const std::string& key) const {
    const std::string& s = str(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    bad(key, s);
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split(str(key))) out.push_back(parse_real(key, item));
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const std::string& item : split(str(key))) out.push_back(parse_count(key, item));
    return out;
  }

  Vector point(const std::string& key, std::size_t d) const {
    const std::vector<double> v = reals(key);
    if (v.size() == 1) return Vector::Constant(static_cast<Eigen::Index>(d), v[0]);
    if (v.size() != d) throw ArgumentError(flag_name(key) + " needs 1 or " + std::to_string(d) + " values");
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  [[noreturn]] static void bad(const std::string& key, const std::string& value) {
    throw ArgumentError("invalid value '" + value + "' for " + flag_name(key));
  }

 private:
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) bad(key, s);
    return v;
  }

  static std::size_t parse_count(const std::string& key, const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) bad(key, s);
    return v;
  }

  std::string command_;
  Settings settings_;
};

json echo(const Values& v) {
  json out = json::object();
  out["subcommand"] = v.command();
  for (const auto& [k, value] : v.all()) out[k] = value;
  return out;
}

void write_output(const Values& v, const std::string& text, std::ostream& out) {
  const std::string& path = v.str("output");
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ResourceError("cannot open output file " + path);
  file << text;
  if (!file) throw ResourceError("failed writing output file " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ResourceError("cannot open " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

// Numeric CSV; a first line that does not parse is treated as a header.
std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    bool numeric = true;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      cell = trim(cell);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        numeric = false;
        break;
      }
      row.push_back(value);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ArgumentError(path + ": non-numeric row '" + line + "'");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ArgumentError(path + ": ragged row '" + line + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_echo(const Values& v) {
  std::string out = "# subcommand=" + v.command() + "\n";
  for (const auto& [k, value] : v.all()) out += "# " + k + "=" + value + "\n";
  return out;
}

std::string render_report(const Values& v, harness::ExperimentReport report) {
  report.config["cli"] = echo(v);
  if (v.str("format") == "csv") return csv_echo(v) + report.to_csv();
  return report.to_json(v.flag("timing")).dump(2) + "\n";
}

SyntheticTask make_task(const Values& v) {
  return SyntheticTask(parse_task(v.str("task")), v.count("d"), v.real("sigma"), v.real("constant"));
}

harness::RunOptions run_options(const Values& v) {
  harness::RunOptions options;
  options.threads = static_cast<unsigned>(v.count("threads"));
  if (v.all().count("n_test")) options.n_test = v.count("n_test");
  return options;
}

double resolve_lifetime(const Values& v, std::size_t n, std::size_t d) {
  if (v.has("lifetime")) return v.real("lifetime");
  return lifetime_schedule(parse_schedule(v.str("schedule")), n, d, v.real("scale"));
}

double required_lifetime(const Values& v) {
  if (!v.has("lifetime")) throw ArgumentError("--lifetime is required");
  return v.real("lifetime");
}

harness::SweepConfig sweep_config(const Values& v) {
  harness::SweepConfig config;
  config.n_grid = v.counts("n_grid");
  config.schedule = parse_schedule(v.str("schedule"));
  config.scale = v.real("scale");
  const std::string rule = v.str("forest_size");
  if (rule == "fixed") {
    config.forest_size.fixed = v.count("trees");
  } else {
    parse_forest_size(rule);
    config.forest_size.scheduled = true;
    config.forest_size.scale = v.real("forest_scale");
  }
  config.replicates = v.count("replicates");
  if (v.all().count("slope_tolerance")) config.slope_tolerance = v.real("slope_tolerance");
  return config;
}

std::string sample_csv(const MondrianPartition& p) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t d = p.dim();
  for (std::size_t j = 0; j < d; ++j) out << "lower_" << j << ',';
  for (std::size_t j = 0; j < d; ++j) out << "upper_" << j << ',';
  out << "birth_time\n";
  for (const NodeId id : leaf_ids(p)) {
    const BoxRegion cell = p.cell(id);
    for (std::size_t j = 0; j < d; ++j) out << cell.lower(static_cast<Eigen::Index>(j)) << ',';
    for (std::size_t j = 0; j < d; ++j) out << cell.upper(static_cast<Eigen::Index>(j)) << ',';
    out << p.node(id).birth_time << '\n';
  }
  return out.str();
}

int cmd_sample(const Values& v, std::ostream& out) {
  RngStream rng(v.u64("seed"));
  SampleOptions options;
  options.max_splits = v.count("max_splits");
  const MondrianPartition p =
      sample_mondrian(BoxRegion::unit(v.count("d")), required_lifetime(v), rng, options);
  if (v.str("format") == "csv") {
    write_output(v, csv_echo(v) + sample_csv(p), out);
  } else {
    json doc = partition_to_json(p);
    doc["cli"] = echo(v);
    write_output(v, doc.dump(2) + "\n", out);
  }
  return kExitSuccess;
}

int emit_report(const Values& v, const harness::ExperimentReport& report, std::ostream& out) {
  write_output(v, render_report(v, report), out);
  return report.passed() ? kExitSuccess : kExitFail;
}

int cmd_risk(const Values& v, std::ostream& out) {
  const SyntheticTask task = make_task(v);
  const std::size_t n = v.count("n");
  const double lifetime = resolve_lifetime(v, n, task.dim());
  const std::size_t trees = v.count("trees");
  const std::size_t replicates = v.count("replicates");
  const harness::RunOptions options = run_options(v);
  const bool classify = task.is_classification();
  const harness::RiskEstimate est =
      classify ? harness::estimate_excess_risk(task, n, lifetime, trees, replicates, v.u64("seed"), options)
               : harness::estimate_risk(task, n, lifetime, trees, replicates, v.u64("seed"), options);
  double oracle = std::numeric_limits<double>::quiet_NaN();
  if (!classify && lifetime > 0.0) {
    const TargetConstants c = task.constants();
    oracles::RiskBoundParams p;
    p.d = task.dim();
    p.lifetime = lifetime;
    p.n = static_cast<double>(n);
    p.sigma2 = task.sigma() * task.sigma();
    p.lipschitz = c.lipschitz;
    p.sup_f = c.sup_f;
    p.trees = static_cast<double>(trees);
    oracle = oracles::lipschitz_risk_bound(p);
  }
  harness::ExperimentReport report;
  report.experiment = "risk";
  report.grid.push_back({classify ? "excess_risk" : "risk", n, lifetime, trees, est.mean, est.se,
                         est.replicates, oracle});
  return emit_report(v, report, out);
}

int cmd_fit(const Values& v, std::ostream& out) {
  if (v.str("format") != "json") throw ArgumentError("fit writes a JSON model; use --format json");
  const RngStream master(v.u64("seed"));
  Dataset data;
  std::size_t d = v.count("d");
  if (v.has("data")) {
    const auto rows = read_csv(v.str("data"));
    if (rows.empty() || rows.front().size() < 2) {
      throw ArgumentError(v.str("data") + ": need at least one row of x_1..x_d,y");
    }
    d = rows.front().size() - 1;
    data.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    data.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
      data.y(static_cast<Eigen::Index>(i)) = rows[i][d];
    }
  } else {
    RngStream data_rng = master.child(0);
    data = make_task(v).sample(v.count("n"), data_rng);
  }
  ForestOptions options;
  options.sample.max_splits = v.count("max_splits");
  options.threads = static_cast<unsigned>(v.count("threads"));
  const double lifetime = resolve_lifetime(v, data.size(), d);
  const MondrianForestModel model = fit_forest(BoxRegion::unit(d), lifetime, v.count("trees"), data,
                                               master.child(1).seed(), options);
  write_output(v, forest_to_json(model).dump() + "\n", out);
  return kExitSuccess;
}

int cmd_predict(const Values& v, std::ostream& out) {
  if (!v.has("model")) throw ArgumentError("--model is required");
  if (!v.has("points")) throw ArgumentError("--points is required");
  const MondrianForestModel model = forest_from_json(json::parse(read_file(v.str("model"))));
  const auto rows = read_csv(v.str("points"));
  const std::size_t d = model.box().dim();
  PointMatrix points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw ArgumentError(v.str("points") + ": expected " + std::to_string(d) + " columns");
    }
    for (std::size_t j = 0; j < d; ++j) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  const Vector pred = predict_forest_batch(model, points);
  const bool classify = v.flag("classify");
  if (v.str("format") == "csv") {
    std::ostringstream text;
    text.precision(17);
    text << (classify ? "prediction,class\n" : "prediction\n");
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
      text << pred(i);
      if (classify) text << ',' << (pred(i) >= 0.5 ? 1 : 0);
      text << '\n';
    }
    write_output(v, csv_echo(v) + text.str(), out);
  } else {
    json doc = {{"cli", echo(v)}, {"predictions", std::vector<double>(pred.begin(), pred.end())}};
    if (classify) {
      std::vector<int> classes;
      for (const double p : pred) classes.push_back(p >= 0.5 ? 1 : 0);
      doc["classes"] = classes;
    }
    write_output(v, doc.dump(2) + "\n", out);
  }
  return kExitSuccess;
}

int dispatch(const Values& v, std::ostream& out) {
  const std::string& c = v.command();
  const std::string& format = v.str("format");
  if (format != "json" && format != "csv") Values::bad("format", format);
  if (v.count("threads") < 1) throw ArgumentError("--threads must be >= 1");
  const std::uint64_t seed = v.u64("seed");
  if (c == "sample") return cmd_sample(v, out);
  if (c == "verify-leaf-count") {
    const auto report =
        harness::verify_leaf_count(v.count("d"), required_lifetime(v), v.count("samples"), seed);
    return emit_report(v, report, out);
  }
  if (c == "verify-cell-dist") {
    const std::size_t d = v.count("d");
    const auto report = harness::verify_cell_distribution(d, required_lifetime(v), v.point("x", d),
                                                          v.count("samples"), seed);
    return emit_report(v, report, out);
  }
  if (c == "verify-diameter") {
    const std::size_t d = v.count("d");
    const auto report =
        harness::verify_diameter(d, required_lifetime(v), v.point("x", d), v.count("samples"), seed);
    return emit_report(v, report, out);
  }
  if (c == "verify-restriction") {
    const std::size_t d = v.count("d");
    const BoxRegion sub(v.point("sub_lower", d), v.point("sub_upper", d));
    const auto report =
        harness::verify_restriction(d, required_lifetime(v), sub, v.count("samples"), seed);
    return emit_report(v, report, out);
  }
  if (c == "risk") return cmd_risk(v, out);
  if (c == "rate-sweep") {
    return emit_report(v, harness::rate_sweep(make_task(v), sweep_config(v), seed, run_options(v)), out);
  }
  if (c == "classify-sweep") {
    const SyntheticTask task(parse_task(v.str("task")), v.count("d"), 0.0, v.real("constant"));
    return emit_report(v, harness::classification_sweep(task, sweep_config(v), seed, run_options(v)), out);
  }
  if (c == "tree-vs-forest") {
    harness::TreeVsForestConfig config;
    config.n = v.count("n");
    config.lifetime_grid = v.reals("lifetime_grid");
    config.forest_trees = v.count("trees");
    config.replicates = v.count("replicates");
    config.sigma = v.real("sigma");
    return emit_report(v, harness::tree_vs_forest(config, seed, run_options(v)), out);
  }
  if (c == "fit") return cmd_fit(v, out);
  return cmd_predict(v, out);
}

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"sample", "sample one Mondrian partition of the unit cube"},
      {"verify-leaf-count", "check the mean leaf count against (1+lambda)^d"},
      {"verify-cell-dist", "check the law of the cell containing x"},
      {"verify-diameter", "check the cell diameter tail and second moment bounds"},
      {"verify-restriction", "check the law of a partition restricted to a sub-box"},
      {"risk", "Monte-Carlo risk of a Mondrian forest on a synthetic task"},
      {"rate-sweep", "risk over a grid of n and its log-log slope"},
      {"tree-vs-forest", "single tree against forest over a lifetime grid"},
      {"classify-sweep", "excess 0-1 risk of the plug-in classifier over a grid of n"},
      {"fit", "fit a forest and write the model as JSON"},
      {"predict", "predict with a saved forest model"},
  };
  return d;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "sample", "verify-leaf-count", "verify-cell-dist", "verify-diameter", "verify-restriction",
      "risk", "rate-sweep", "tree-vs-forest", "classify-sweep", "fit", "predict"};
  return names;
}

std::vector<std::string> fields_for(const std::string& subcommand) {
  std::vector<std::string> out;
  for (const Field& f : field_table()) {
    if (applies(f, subcommand)) out.push_back(f.key);
  }
  return out;
}

Settings parse_config_text(const std::string& text) {
  Settings out;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json doc;
    std::string duplicate;
    std::set<std::string> seen;
    const json::parser_callback_t watch = [&](int depth, json::parse_event_t event, json& parsed) {
      if (event == json::parse_event_t::key && depth == 1) {
        const std::string key = parsed.get<std::string>();
        if (!seen.insert(normalize_key(key)).second) duplicate = key;
      }
      return true;
    };
    try {
      doc = json::parse(body, watch);
    } catch (const json::parse_error& e) {
      throw ArgumentError(std::string("config: ") + e.what());
    }
    if (!duplicate.empty()) throw ArgumentError("config: duplicate key '" + duplicate + "'");
    if (!doc.is_object()) throw ArgumentError("config: expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
      std::string rendered;
      if (value.is_string()) {
        rendered = value.get<std::string>();
      } else if (value.is_number() || value.is_boolean()) {
        rendered = value.dump();
      } else if (value.is_array()) {
        for (const auto& item : value) {
          if (!(item.is_number() || item.is_string())) {
            throw ArgumentError("config: nested value for '" + key + "'");
          }
          if (!rendered.empty()) rendered += ",";
          rendered += item.is_string() ? item.get<std::string>() : item.dump();
        }
      } else {
        throw ArgumentError("config: nested value for '" + key + "'");
      }
      out[normalize_key(key)] = rendered;
    }
    return out;
  }
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (key.empty()) throw ArgumentError("config line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ArgumentError("config: duplicate key '" + key + "'");
    }
  }
  return out;
}

Settings load_config(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ArgumentError("cannot read config file " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config_text(buf.str());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mondrian process partitions, Mondrian forests and their verification harness",
               "mondrian"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_path;
  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
    sub->add_option("--config", config_path[name], "flat key=value or JSON config file");
    for (const Field& f : field_table()) {
      if (!applies(f, name)) continue;
      std::string help = f.help;
      const std::string def = default_for(f, name);
      if (!def.empty() && !f.is_flag) help += " [default: " + def + "]";
      if (f.is_flag) {
        sub->add_flag_callback(
            flag_name(f.key), [&raw, name, key = f.key] { raw[name][key] = "true"; }, help);
      } else {
        sub->add_option(flag_name(f.key), raw[name][f.key], help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Settings merged;
    for (const Field& f : field_table()) {
      if (applies(f, name)) merged[f.key] = default_for(f, name);
    }
    if (!config_path[name].empty()) {
      for (const auto& [key, value] : load_config(config_path[name])) {
        if (key == "subcommand") {
          if (value != name) throw ArgumentError("config is for subcommand '" + value + "'");
          continue;
        }
        if (!merged.count(key)) throw ArgumentError("config: unknown key '" + key + "' for " + name);
        merged[key] = value;
      }
    }
    for (const Field& f : field_table()) {
      if (!applies(f, name)) continue;
      if (sub->get_option(flag_name(f.key))->count() > 0) merged[f.key] = raw[name][f.key];
    }
    if (merged["seed"].empty()) {
      const char* env = std::getenv("MF_SEED");
      merged["seed"] = env != nullptr && *env != '\0' ? env : "0";
    }
    return dispatch(Values(name, std::move(merged)), out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace mondrian::cli
