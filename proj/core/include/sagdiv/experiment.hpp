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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sagdiv/models.hpp"
#include "sagdiv/scenarios.hpp"

namespace sagdiv {

/// One (repetition, method) result.
struct Cell {
  std::string scenario;
  Method method = Method::Zero;
  int repetition = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double log10_mse = 0.0;
  std::optional<double> fit_seconds;
  /// Random-variable samples consumed by the fit.
  Index budget = 0;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

/// Estimate evaluated on a regular grid, for plotting.
struct Curve {
  std::string scenario;
  Method method = Method::Zero;
  Vector grid;
  Vector values;
  Vector truth;
};

struct RunReport {
  std::vector<Cell> cells;
  std::vector<Curve> curves;

  std::vector<double> mses(std::string_view scenario, Method method) const;
};

struct RunOptions {
  int repetitions = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  bool record_timing = false;
  MethodSettings defaults{};
  std::map<Method, MethodSettings> overrides;
  /// Curves are taken from this repetition, on `curve_points` points over [-4, 4].
  int curve_repetition = 0;
  Index curve_points = 200;
  bool emit_curves = true;

  const MethodSettings& settings_for(Method method) const;
};

/// Seeds for repetition `rep`: substreams "dgp" (data, instrument stream
/// included) and "estimators".
std::uint64_t dgp_seed(std::uint64_t master, int rep);
FitSeeds fit_seeds(std::uint64_t master, int rep);

/// Runs every method on `repetitions` independent draws of the scenario. All
/// methods in a repetition share the test set. A failing method is recorded in
/// its cell and the run continues. Cells are ordered by repetition, then by
/// the order of `methods`, regardless of `threads`.
RunReport run_scenario(const ScenarioSpec& spec, std::span<const Method> methods,
                       const RunOptions& options);

/// Quartiles with linear interpolation between order statistics.
struct Summary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};
Summary summarize(std::vector<double> values);
double quantile(std::vector<double> values, double q);

}  // namespace sagdiv
