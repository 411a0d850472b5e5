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


// sagdiv command-line entry point: bench, fit and predict.
//
// Exit codes: 0 success, 1 some benchmark cells failed or an internal error,
// 2 invalid configuration, input data or arguments.
//
// SAGDIV_LOG_LEVEL selects the log level (trace, debug, info, warn, error, off).

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sagdiv/config.hpp"
#include "sagdiv/error.hpp"
#include "sagdiv/report.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sagdiv");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("SAGDIV_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Kernel SAGD-IV: nonparametric instrumental variable regression"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int threads = 1;

  std::string config_path;
  std::string out_path;
  std::string data_path;
  std::string model_path;

  auto* bench = app.add_subcommand("bench", "Run the synthetic benchmark described by a config file");
  bench->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out_path, "Output directory; defaults to output_dir from the config");

  auto* fit = app.add_subcommand("fit", "Fit one method on a data CSV and save the model");
  fit->add_option("--config", config_path, "Fit configuration (JSON)")->required()->check(CLI::ExistingFile);
  fit->add_option("--data", data_path, "CSV with x_*, z_* and y columns")->required()->check(CLI::ExistingFile);
  fit->add_option("--out", out_path, "Model file to write")->required();

  auto* pred = app.add_subcommand("predict", "Evaluate a saved model at covariate rows");
  pred->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  pred->add_option("--data", data_path, "CSV with x_* columns")->required()->check(CLI::ExistingFile);
  pred->add_option("--out", out_path, "Prediction CSV to write")->required();

  for (auto* sub : {bench, fit, pred}) {
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bench->parsed()) {
      sagdiv::RunConfig config = sagdiv::load_run_config(config_path);
      if (seed) config.seed = *seed;
      if (threads > 1) config.threads = threads;
      const std::filesystem::path dir =
          out_path.empty() ? config.output_dir.value_or(std::filesystem::path{}) : std::filesystem::path(out_path);
      if (dir.empty()) {
        spdlog::error("no output directory: pass --out or set output_dir");
        return 2;
      }
      spdlog::info("bench: {} scenario(s), {} method(s), {} repetition(s), budget {}",
                   config.scenarios.size(), config.methods.size(), config.repetitions, config.budget);
      const int rc = sagdiv::cli::cmd_bench(config, dir);
      if (rc != 0) spdlog::warn("some cells failed; see {}", (dir / "failures.log").string());
      spdlog::info("wrote results to {}", dir.string());
      return rc;
    }
    if (fit->parsed()) {
      const int rc = sagdiv::cli::cmd_fit(config_path, data_path, out_path, seed);
      spdlog::info("wrote model to {}", out_path);
      return rc;
    }
    const int rc = sagdiv::cli::cmd_predict(model_path, data_path, out_path, threads);
    spdlog::info("wrote predictions to {}", out_path);
    return rc;
  } catch (const sagdiv::IngestionError& e) {
    spdlog::error("ingestion error (row {}): {}", e.row(), e.what());
    return 2;
  } catch (const sagdiv::SchemaError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const sagdiv::InvalidInput& e) {
    spdlog::error("invalid input: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
