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

#include "sagdiv/models.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

#include "sagdiv/error.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::SagdKernel: return "sagdiv-kernel";
    case Method::SagdRawY: return "sagdiv-rawy";
    case Method::TwoSLS: return "2sls";
    case Method::KIV: return "kiv";
    case Method::Naive: return "naive";
    case Method::Zero: return "zero";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::SagdKernel, Method::SagdRawY, Method::TwoSLS, Method::KIV,
                   Method::Naive, Method::Zero}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

Vector predict(const FittedModel& model, const Matrix& x, int threads) {
  if (x.cols() != input_dim(model)) throw InvalidInput("covariate dimension does not match the model");
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SAGDModel>) {
          return eval_sagd(m, x, threads);
        } else if constexpr (std::is_same_v<T, TSLSModel>) {
          return predict_2sls(m, x);
        } else if constexpr (std::is_same_v<T, KIVModel>) {
          return predict_kiv(m, x);
        } else if constexpr (std::is_same_v<T, NaiveModel>) {
          return predict_ridge(m.ridge, x);
        } else {
          return Vector::Zero(x.rows());
        }
      },
      model);
}

Index input_dim(const FittedModel& model) {
  return std::visit(
      [](const auto& m) -> Index {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SAGDModel>) {
          return m.ratio().centers_x.cols();
        } else if constexpr (std::is_same_v<T, TSLSModel>) {
          return m.first_stage.cols();
        } else if constexpr (std::is_same_v<T, KIVModel>) {
          return m.stage1_x.cols();
        } else if constexpr (std::is_same_v<T, NaiveModel>) {
          return m.ridge.inputs.cols();
        } else {
          return m.x_dim;
        }
      },
      model);
}

KernelSAGDOptions kernel_sagd_options(const MethodSettings& settings, const LossSpec& loss,
                                      Index stream_length, bool raw_y, const FitSeeds& seeds) {
  if (settings.warmup < 0) throw InvalidInput("warm-up must be nonnegative");
  if (settings.ratio_basis < 1) throw InvalidInput("ratio basis must be positive");
  if (settings.folds < 2) throw InvalidInput("at least two folds are required");
  KernelSAGDOptions opts;
  opts.sagd.warmup = settings.warmup;
  opts.sagd.search_set = SearchSet(settings.bound);
  opts.sagd.loss = loss;
  if (settings.learning_rate) {
    if (!(*settings.learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
    opts.sagd.schedule = LearningRateSchedule::custom(
        std::vector<double>(static_cast<std::size_t>(stream_length), *settings.learning_rate));
  }
  opts.ratio.basis = settings.ratio_basis;
  opts.ratio.cap = settings.ratio_cap;
  opts.ratio.seed = derive_seed(seeds.estimators, "ratio");
  opts.mean.raw_y = raw_y;
  opts.mean.folds = settings.folds;
  opts.mean.seed = derive_seed(seeds.estimators, "mean");
  if (loss.kind() == LossKind::LogisticBCE) opts.mean.range = std::pair{0.0, 1.0};
  opts.cme.seed = derive_seed(seeds.estimators, "cme");
  return opts;
}

FittedModel fit_method(Method method, const Dataset& estimator_data, const Matrix& z_stream,
                       const Vector& y_stream, const Dataset& baseline_data,
                       const MethodSettings& settings, const LossSpec& loss,
                       const FitSeeds& seeds) {
  switch (method) {
    case Method::SagdKernel:
    case Method::SagdRawY: {
      const bool raw_y = method == Method::SagdRawY;
      if (raw_y && y_stream.size() != z_stream.rows()) {
        throw InvalidInput("raw-outcome variant needs one outcome per instrument draw");
      }
      auto opts = kernel_sagd_options(settings, loss, z_stream.rows(), raw_y, seeds);
      opts.ratio.basis = std::min(settings.ratio_basis, estimator_data.size());
      const auto est = fit_preliminary_estimators(estimator_data, opts);
      return fit_sagdiv(est, z_stream, opts.sagd,
                        raw_y ? std::optional<Vector>(y_stream) : std::nullopt);
    }
    case Method::TwoSLS:
      return fit_2sls(baseline_data);
    case Method::KIV: {
      KIVOptions opts;
      opts.seed = derive_seed(seeds.estimators, "kiv");
      opts.stage1.seed = derive_seed(seeds.estimators, "kiv-stage1");
      return fit_kiv(baseline_data, opts);
    }
    case Method::Naive: {
      NaiveOptions opts;
      opts.folds = settings.folds;
      opts.seed = derive_seed(seeds.estimators, "naive");
      return NaiveModel{fit_naive_krr(baseline_data, opts)};
    }
    case Method::Zero:
      return ZeroModel{baseline_data.x_dim()};
  }
  throw InvalidInput("unknown method");
}

FittedModel fit_on_dataset(Method method, const Dataset& data, const MethodSettings& settings,
                           const LossSpec& loss, const FitSeeds& seeds) {
  if (settings.stream_ratio < 1) throw InvalidInput("stream ratio must be at least one");
  const Index n = data.size();
  // Chronological split: leading rows feed the estimators, the rest form the stream.
  const Index head = n / (1 + settings.stream_ratio);
  if (method == Method::SagdKernel || method == Method::SagdRawY) {
    if (head < 2 || n - head < 1) throw InvalidInput("too few rows to split into estimator and stream blocks");
    const Dataset est = data.slice(0, head);
    const Dataset stream = data.slice(head, n - head);
    return fit_method(method, est, stream.z(), stream.y(), data, settings, loss, seeds);
  }
  return fit_method(method, data, Matrix(0, data.z_dim()), Vector(0), data, settings, loss, seeds);
}

}  // namespace sagdiv
