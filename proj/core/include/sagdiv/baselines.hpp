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

#include "sagdiv/cme.hpp"
#include "sagdiv/reg_search.hpp"
#include "sagdiv/ridge.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

/// Two-stage least squares with intercepts in both stages.
struct TSLSModel {
  Matrix first_stage;   // (d_Z + 1) x d_X, first row is the intercept
  Vector second_stage;  // d_X + 1, first entry is the intercept
};

TSLSModel fit_2sls(const Dataset& data);
Vector predict_2sls(const TSLSModel& model, const Matrix& x);

/// Kernel instrumental variable regression. Stage 1 embeds X | Z on the first
/// half of the rows; stage 2 regresses the second half's outcomes on the
/// embedded instruments. The estimate is h(x) = sum_i alpha_i kx(x_i, x) over
/// the stage-1 covariates.
struct KIVModel {
  KernelBlock x_block;
  Matrix stage1_x;
  Vector alpha;
  double lambda = 0.0;  // stage-1 regularization
  double xi = 0.0;      // stage-2 regularization
  Index stage1_size = 0;
  Index stage2_size = 0;
};

struct KIVOptions {
  std::uint64_t seed = 0;
  CMEOptions stage1{};
  RegSearchOptions stage2_search{};
  /// Skip the stage-2 search.
  std::optional<double> xi;
};

KIVModel fit_kiv(const Dataset& data, const KIVOptions& options = {});
Vector predict_kiv(const KIVModel& model, const Matrix& x);

/// Stage-2 coefficients for a given xi:
/// alpha = (W W' + m xi K_XX)^{-1} W y~, with W = K_XX (K_ZZ + n lambda I)^{-1} K_ZZ~.
Vector kiv_stage2_coefficients(const Matrix& kxx, const Matrix& w, const Vector& y_tilde,
                               double xi);

struct NaiveOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  RegSearchOptions search{};
};

/// Kernel ridge of y on x that ignores the instrument. Confounded by design.
RidgeModel fit_naive_krr(const Dataset& data, const NaiveOptions& options = {});

}  // namespace sagdiv
