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

#include <functional>
#include <optional>

#include "sagdiv/cme.hpp"
#include "sagdiv/conditional_mean.hpp"
#include "sagdiv/density_ratio.hpp"
#include "sagdiv/loss.hpp"
#include "sagdiv/schedule.hpp"
#include "sagdiv/search_set.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

inline constexpr double kDivergenceThreshold = 1e6;

struct SAGDConfig {
  /// Iterates 1..warmup are discarded before averaging.
  Index warmup = 100;
  /// Unset: 1/sqrt(M) for the length M of the instrument stream.
  std::optional<LearningRateSchedule> schedule;
  SearchSet search_set{};
  LossSpec loss = LossSpec::quadratic();
};

/// The three preliminary estimators consumed by the gradient loop.
struct PreliminaryEstimators {
  DensityRatioModel ratio;
  ConditionalMeanModel mean;
  CMEOperatorModel cme;
};

/// Result of the projected stochastic gradient loop.
///
/// Iterate m is h_m(x) = clamp(h_{m-1}(x) - step_m * ratio(x, z_m), -A, A) with
/// h_0 = 0 and step_m = alpha_m * g_m. The fitted function is the pointwise mean
/// of h_{K+1}..h_M. Evaluation replays this chain, which is the only exact
/// representation once clipping is involved.
class SAGDModel {
 public:
  SAGDModel(DensityRatioModel ratio, Matrix anchors, Vector rates, Vector gradients,
            double bound, Index warmup, Matrix cached_x, Vector cached_average);

  const DensityRatioModel& ratio() const noexcept { return ratio_; }
  const Matrix& anchors() const noexcept { return anchors_; }
  const Vector& rates() const noexcept { return rates_; }
  const Vector& gradients() const noexcept { return gradients_; }
  const Vector& steps() const noexcept { return steps_; }
  double bound() const noexcept { return bound_; }
  Index warmup() const noexcept { return warmup_; }
  Index iterations() const noexcept { return anchors_.rows(); }
  const Matrix& cached_x() const noexcept { return cached_x_; }
  const Vector& cached_average() const noexcept { return cached_average_; }

  /// w_j kz(z_m, cz_j), b x M; reused by every evaluation.
  const Matrix& anchor_factor() const noexcept { return anchor_factor_; }

 private:
  DensityRatioModel ratio_;
  Matrix anchors_;
  Vector rates_;
  Vector gradients_;
  Vector steps_;
  double bound_;
  Index warmup_;
  Matrix cached_x_;
  Vector cached_average_;
  Matrix anchor_factor_;
};

/// Runs the gradient loop over the instrument stream. `outcomes` is required when
/// the conditional-mean estimator is the RawY marker and supplies y_m in place
/// of r(z_m).
SAGDModel fit_sagdiv(const PreliminaryEstimators& estimators, const Matrix& z_stream,
                     const SAGDConfig& config,
                     const std::optional<Vector>& outcomes = std::nullopt);

/// Averaged estimate at each row of x. Rows are processed in independent blocks
/// across `threads` workers.
Vector eval_sagd(const SAGDModel& model, const Matrix& x, int threads = 1);

/// Options for the kernel variant: all three estimators are kernel methods.
struct KernelSAGDOptions {
  SAGDConfig sagd{};
  DensityRatioOptions ratio{};
  ConditionalMeanOptions mean{};
  CMEOptions cme{};
};

/// Fits the three estimators on `estimator_data`. The caller keeps the
/// instrument stream for fit_sagdiv disjoint from these rows.
PreliminaryEstimators fit_preliminary_estimators(const Dataset& estimator_data,
                                                 const KernelSAGDOptions& options);

}  // namespace sagdiv
