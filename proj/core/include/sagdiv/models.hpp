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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sagdiv/baselines.hpp"
#include "sagdiv/loss.hpp"
#include "sagdiv/ridge.hpp"
#include "sagdiv/sagd.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

enum class Method { SagdKernel, SagdRawY, TwoSLS, KIV, Naive, Zero };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Per-method hyperparameters. Defaults follow the reference experiments.
struct MethodSettings {
  Index warmup = 100;
  double bound = 10.0;
  /// Unset: alpha_m = 1/sqrt(M).
  std::optional<double> learning_rate;
  double ratio_cap = 25.0;
  Index ratio_basis = 200;
  int folds = 5;
  /// Instrument draws per estimator triple when splitting a single dataset.
  Index stream_ratio = 2;
};

struct NaiveModel {
  RidgeModel ridge;
};

struct ZeroModel {
  Index x_dim = 1;
};

/// Any fitted estimate of h*.
using FittedModel = std::variant<SAGDModel, TSLSModel, KIVModel, NaiveModel, ZeroModel>;

Vector predict(const FittedModel& model, const Matrix& x, int threads = 1);
Index input_dim(const FittedModel& model);

/// Seeds consumed by a single fit.
struct FitSeeds {
  std::uint64_t estimators = 0;
};

KernelSAGDOptions kernel_sagd_options(const MethodSettings& settings, const LossSpec& loss,
                                      Index stream_length, bool raw_y, const FitSeeds& seeds);

/// Fits `method` on separate estimator triples and instrument stream. Baselines
/// ignore the stream and use `baseline_data`.
FittedModel fit_method(Method method, const Dataset& estimator_data, const Matrix& z_stream,
                       const Vector& y_stream, const Dataset& baseline_data,
                       const MethodSettings& settings, const LossSpec& loss,
                       const FitSeeds& seeds);

/// Fits `method` on one user dataset. Gradient methods split it chronologically:
/// the first n / (1 + stream_ratio) rows fit the estimators, the z (and y) of the
/// remaining rows form the stream.
FittedModel fit_on_dataset(Method method, const Dataset& data, const MethodSettings& settings,
                           const LossSpec& loss, const FitSeeds& seeds);

}  // namespace sagdiv
