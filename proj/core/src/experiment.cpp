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

#include "sagdiv/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "sagdiv/error.hpp"
#include "sagdiv/parallel.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {
namespace {

struct RepetitionResult {
  std::vector<Cell> cells;
  std::vector<Curve> curves;
};

Index budget_for(Method method, const SampleSizes& sizes) {
  switch (method) {
    case Method::SagdKernel: return sizes.sagd_budget();
    case Method::SagdRawY: return sizes.raw_y_budget();
    default: return sizes.baseline_budget();
  }
}

FittedModel fit_cell(Method method, const GeneratedData& data, const SampleSizes& sizes,
                     const MethodSettings& settings, const LossSpec& loss, const FitSeeds& seeds) {
  if (method == Method::SagdRawY) {
    return fit_method(method, data.estimator_data.slice(0, sizes.raw_estimator),
                      data.z_stream.topRows(sizes.raw_stream), data.y_stream.head(sizes.raw_stream),
                      data.baseline_data, settings, loss, seeds);
  }
  return fit_method(method, data.estimator_data, data.z_stream, data.y_stream, data.baseline_data,
                    settings, loss, seeds);
}

RepetitionResult run_repetition(const ScenarioSpec& base, std::span<const Method> methods,
                                const RunOptions& options, int rep) {
  ScenarioSpec spec = base;
  spec.seed = dgp_seed(options.master_seed, rep);
  const GeneratedData data = generate(spec);
  const LossSpec loss = spec.outcome == OutcomeKind::Binary ? LossSpec::logistic_bce(spec.beta)
                                                            : LossSpec::quadratic();
  const FitSeeds seeds = fit_seeds(options.master_seed, rep);
  const bool curves = options.emit_curves && rep == options.curve_repetition;
  Vector grid;
  Vector truth;
  if (curves) {
    grid = Vector::LinSpaced(options.curve_points, -4.0, 4.0);
    truth = grid.unaryExpr([&](double x) { return structural(spec.response, x); });
  }

  RepetitionResult out;
  for (Method method : methods) {
    Cell cell;
    cell.scenario = spec.name();
    cell.method = method;
    cell.repetition = rep;
    cell.seed = spec.seed;
    cell.budget = budget_for(method, spec.sizes);
    try {
      const auto start = std::chrono::steady_clock::now();
      const FittedModel model =
          fit_cell(method, data, spec.sizes, options.settings_for(method), loss, seeds);
      const auto stop = std::chrono::steady_clock::now();
      const Vector pred = predict(model, data.test_x);
      if (!all_finite(pred)) throw NumericalError("non-finite predictions");
      const MSE m = mse_vs_truth(pred, data.test_truth);
      cell.mse = m.mse;
      cell.log10_mse = m.log10_mse;
      if (options.record_timing) cell.fit_seconds = std::chrono::duration<double>(stop - start).count();
      if (curves) {
        const Matrix gx = grid;
        out.curves.push_back(Curve{cell.scenario, method, grid, predict(model, gx), truth});
      }
    } catch (const std::exception& e) {
      cell.mse = std::numeric_limits<double>::quiet_NaN();
      cell.log10_mse = std::numeric_limits<double>::quiet_NaN();
      cell.error = e.what();
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

}  // namespace

std::vector<double> RunReport::mses(std::string_view scenario, Method method) const {
  std::vector<double> out;
  for (const auto& c : cells) {
    if (c.ok() && c.scenario == scenario && c.method == method) out.push_back(c.mse);
  }
  return out;
}

const MethodSettings& RunOptions::settings_for(Method method) const {
  const auto it = overrides.find(method);
  return it == overrides.end() ? defaults : it->second;
}

std::uint64_t dgp_seed(std::uint64_t master, int rep) { return derive_seed(master, "dgp", rep); }

FitSeeds fit_seeds(std::uint64_t master, int rep) {
  return FitSeeds{derive_seed(master, "estimators", rep)};
}

RunReport run_scenario(const ScenarioSpec& spec, std::span<const Method> methods,
                       const RunOptions& options) {
  if (options.repetitions < 1) throw InvalidInput("at least one repetition is required");
  if (options.curve_points < 2) throw InvalidInput("curves need at least two grid points");
  std::vector<RepetitionResult> results(static_cast<std::size_t>(options.repetitions));
  parallel_for(results.size(), options.threads, [&](std::size_t rep) {
    results[rep] = run_repetition(spec, methods, options, static_cast<int>(rep));
  });
  RunReport report;
  for (auto& r : results) {
    std::move(r.cells.begin(), r.cells.end(), std::back_inserter(report.cells));
    std::move(r.curves.begin(), r.curves.end(), std::back_inserter(report.curves));
  }
  return report;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("summary of an empty sample");
  Summary s;
  s.count = values.size();
  s.median = quantile(values, 0.5);
  s.q1 = quantile(values, 0.25);
  s.q3 = quantile(values, 0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

}  // namespace sagdiv
