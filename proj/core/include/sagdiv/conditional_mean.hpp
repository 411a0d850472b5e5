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
#include <utility>
#include <variant>

#include "sagdiv/reg_search.hpp"
#include "sagdiv/ridge.hpp"

namespace sagdiv {

/// Use the observed outcome y_m in place of an estimate of E[Y | Z = z_m].
struct RawY {};

/// Estimate of r(z) = E[Y | Z = z]: kernel ridge of y on z, or the RawY marker.
class ConditionalMeanModel {
 public:
  ConditionalMeanModel() : model_(RawY{}) {}
  explicit ConditionalMeanModel(RidgeModel ridge,
                                std::optional<std::pair<double, double>> range = std::nullopt);

  bool is_raw_y() const noexcept { return std::holds_alternative<RawY>(model_); }
  const RidgeModel& ridge() const;
  const std::optional<std::pair<double, double>>& range() const noexcept { return range_; }

  /// Predictions at each row of z, clipped to `range` when one is set.
  /// Throws InvalidInput in RawY mode.
  Vector predict(const Matrix& z) const;

 private:
  std::variant<RidgeModel, RawY> model_;
  std::optional<std::pair<double, double>> range_;
};

struct ConditionalMeanOptions {
  bool raw_y = false;
  int folds = 5;
  std::uint64_t seed = 0;
  /// Overrides the median-heuristic lengthscale.
  std::optional<double> lengthscale;
  /// Clip predictions, e.g. to [0, 1] for binary outcomes.
  std::optional<std::pair<double, double>> range;
  RegSearchOptions search{};
};

/// Kernel ridge regression of y on z with lambda chosen by the iterative search
/// over the k-fold cross-validation error.
ConditionalMeanModel fit_conditional_mean(const Dataset& data,
                                          const ConditionalMeanOptions& options = {});

}  // namespace sagdiv
