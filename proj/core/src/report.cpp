// Copyright 2026 The sagdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sagdiv/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sagdiv/csv.hpp"
#include "sagdiv/error.hpp"
#include "sagdiv/persistence.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {
namespace {

using ojson = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  return out;
}

ojson summary_json(const std::vector<double>& values) {
  if (values.empty()) return nullptr;
  const Summary s = summarize(values);
  return ojson{{"median", s.median}, {"q1", s.q1}, {"q3", s.q3},
               {"mean", s.mean},     {"sd", s.sd}, {"count", s.count}};
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const RunReport> reports) {
  write_csv_row(out, {"scenario", "method", "seed", "mse", "log10_mse", "fit_seconds", "budget"});
  for (const auto& report : reports) {
    for (const auto& c : report.cells) {
      write_csv_row(out, {c.scenario, std::string(to_string(c.method)), std::to_string(c.seed),
                          format_double(c.mse), format_double(c.log10_mse),
                          c.fit_seconds ? format_double(*c.fit_seconds) : "NA",
                          std::to_string(c.budget)});
    }
  }
}

void write_curves_csv(std::ostream& out, std::span<const RunReport> reports) {
  write_csv_row(out, {"scenario", "method", "x", "h_hat", "h_true"});
  for (const auto& report : reports) {
    for (const auto& curve : report.curves) {
      const std::string method(to_string(curve.method));
      for (Index i = 0; i < curve.grid.size(); ++i) {
        write_csv_row(out, {curve.scenario, method, format_double(curve.grid(i)),
                            format_double(curve.values(i)), format_double(curve.truth(i))});
      }
    }
  }
}

void write_summary_json(std::ostream& out, const RunConfig& config,
                        std::span<const RunReport> reports) {
  ojson doc;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash));
  doc["config_hash"] = hash;
  doc["seed"] = config.seed;
  doc["repetitions"] = config.repetitions;
  doc["budget"] = {{"name", config.budget_name}, {"total", config.budget}};
  ojson scenarios = ojson::array();
  for (const auto& report : reports) {
    if (report.cells.empty()) continue;
    ojson entry;
    entry["scenario"] = report.cells.front().scenario;
    ojson methods = ojson::array();
    std::vector<Method> order;
    for (const auto& c : report.cells) {
      if (std::find(order.begin(), order.end(), c.method) == order.end()) order.push_back(c.method);
    }
    for (Method m : order) {
      std::vector<double> mse;
      std::vector<double> log_mse;
      ojson per_seed = ojson::array();
      std::size_t failures = 0;
      Index budget = 0;
      for (const auto& c : report.cells) {
        if (c.method != m) continue;
        budget = c.budget;
        ojson row{{"seed", c.seed}, {"repetition", c.repetition}};
        if (c.ok()) {
          mse.push_back(c.mse);
          log_mse.push_back(c.log10_mse);
          row["mse"] = c.mse;
          row["log10_mse"] = c.log10_mse;
        } else {
          ++failures;
          row["error"] = *c.error;
        }
        per_seed.push_back(std::move(row));
      }
      methods.push_back(ojson{{"method", std::string(to_string(m))},
                              {"budget", budget},
                              {"failures", failures},
                              {"mse", summary_json(mse)},
                              {"log10_mse", summary_json(log_mse)},
                              {"per_seed", std::move(per_seed)}});
    }
    entry["methods"] = std::move(methods);
    scenarios.push_back(std::move(entry));
  }
  doc["scenarios"] = std::move(scenarios);
  out << doc.dump(2) << '\n';
}

namespace cli {

int cmd_bench(const RunConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const RunOptions options = config.run_options();
  std::vector<RunReport> reports;
  reports.reserve(config.scenarios.size());
  for (const auto& spec : config.scenarios) {
    reports.push_back(run_scenario(spec, config.methods, options));
  }
  {
    auto out = open_output(out_dir / "results.csv");
    write_results_csv(out, reports);
  }
  {
    auto out = open_output(out_dir / "summary.json");
    write_summary_json(out, config, reports);
  }
  {
    auto out = open_output(out_dir / "curves.csv");
    write_curves_csv(out, reports);
  }
  const auto log_path = out_dir / "failures.log";
  std::size_t failures = 0;
  std::ostringstream log;
  for (const auto& report : reports) {
    for (const auto& c : report.cells) {
      if (c.ok()) continue;
      ++failures;
      log << c.scenario << ' ' << to_string(c.method) << " seed=" << c.seed << ": " << *c.error
          << '\n';
    }
  }
  if (failures == 0) {
    std::filesystem::remove(log_path);
    return 0;
  }
  auto out = open_output(log_path);
  out << log.str();
  return 1;
}

int cmd_fit(const std::filesystem::path& config_path, const std::filesystem::path& data_path,
            const std::filesystem::path& model_path, std::optional<std::uint64_t> seed_override) {
  const FitConfig config = load_fit_config(config_path);
  const Dataset data = read_dataset_csv(data_path);
  const std::uint64_t seed = seed_override.value_or(config.seed);
  const FitSeeds seeds{derive_seed(seed, "estimators", 0)};
  PersistedModel persisted;
  persisted.method = config.method;
  persisted.model = fit_on_dataset(config.method, data, config.settings, config.loss, seeds);
  persisted.provenance = Provenance{config.hash, seed};
  save_model(persisted, model_path);
  return 0;
}

int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& data_path,
                const std::filesystem::path& out_path, int threads) {
  const PersistedModel persisted = load_model(model_path);
  const Index dim = input_dim(persisted.model);
  const Matrix x = read_covariates_csv(data_path, dim);
  const Vector h = x.rows() > 0 ? predict(persisted.model, x, threads) : Vector(0);
  std::vector<std::string> header;
  for (Index j = 0; j < dim; ++j) header.push_back("x_" + std::to_string(j));
  header.push_back("h_hat");
  Matrix table(x.rows(), dim + 1);
  table.leftCols(dim) = x;
  table.col(dim) = h;
  write_matrix_csv(out_path, header, table);
  return 0;
}

}  // namespace cli
}  // namespace sagdiv
