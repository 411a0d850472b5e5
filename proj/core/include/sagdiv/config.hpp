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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sagdiv/experiment.hpp"
#include "sagdiv/loss.hpp"
#include "sagdiv/scenarios.hpp"

namespace sagdiv {

/// Benchmark configuration, read from a JSON document:
///
///   {
///     "scenarios":    [{"outcome": "continuous", "response": "sin"}, ...],
///     "methods":      ["sagdiv-kernel", {"name": "kiv"}, ...],
///     "repetitions":  20,
///     "seed":         0,
///     "budget":       "paper" | "half" | <total samples>,
///     "stream_ratio": 2,
///     "test_size":    1000,
///     "output_dir":   "out",
///     "record_timing": false,
///     "threads":      1,
///     "curves":       true
///   }
///
/// Method objects accept "name" plus any of "warmup", "bound",
/// "learning_rate", "ratio_cap", "ratio_basis", "folds". Scenario objects
/// accept "outcome", "response" and "beta". Unknown keys are schema errors.
struct RunConfig {
  std::vector<ScenarioSpec> scenarios;
  std::vector<Method> methods;
  std::map<Method, MethodSettings> overrides;
  int repetitions = 1;
  std::uint64_t seed = 0;
  std::string budget_name = "paper";
  Index budget = kPaperBudget;
  Index stream_ratio = 2;
  Index test_size = 1000;
  std::optional<std::filesystem::path> output_dir;
  bool record_timing = false;
  int threads = 1;
  bool curves = true;
  /// FNV-1a hash of the canonical JSON text.
  std::uint64_t hash = 0;

  RunOptions run_options() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Configuration for fitting one method on user data:
///
///   {"method": "sagdiv-kernel" | {"name": ..., <method keys>, "stream_ratio": 2},
///    "loss": {"kind": "quadratic" | "logistic", "beta": 0.316},
///    "seed": 0}
struct FitConfig {
  Method method = Method::SagdKernel;
  MethodSettings settings{};
  LossSpec loss = LossSpec::quadratic();
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
};

FitConfig parse_fit_config(const std::string& text);
FitConfig load_fit_config(const std::filesystem::path& path);

}  // namespace sagdiv
