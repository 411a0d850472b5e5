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

#include <filesystem>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "sagdiv/config.hpp"
#include "sagdiv/experiment.hpp"

namespace sagdiv {

/// Columns: scenario, method, seed, mse, log10_mse, fit_seconds. fit_seconds is
/// "NA" unless timing was recorded.
void write_results_csv(std::ostream& out, std::span<const RunReport> reports);
/// Columns: scenario, method, x, h_hat, h_true.
void write_curves_csv(std::ostream& out, std::span<const RunReport> reports);
/// Medians, quartiles and the full per-seed values for each scenario and method.
void write_summary_json(std::ostream& out, const RunConfig& config,
                        std::span<const RunReport> reports);

namespace cli {

/// `bench`: runs every scenario and writes results.csv, summary.json and
/// curves.csv (plus failures.log when a cell failed) into `out_dir`.
/// Returns 0 when every cell succeeded.
int cmd_bench(const RunConfig& config, const std::filesystem::path& out_dir);

/// `fit`: fits the configured method on a data CSV and writes the model file.
int cmd_fit(const std::filesystem::path& config_path, const std::filesystem::path& data_path,
            const std::filesystem::path& model_path, std::optional<std::uint64_t> seed_override);

/// `predict`: writes x_*, h_hat for each covariate row.
int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& data_path,
                const std::filesystem::path& out_path, int threads = 1);

}  // namespace cli
}  // namespace sagdiv
