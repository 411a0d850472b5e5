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

#include <vector>

#include "sagdiv/types.hpp"

namespace sagdiv {

enum class ScheduleKind { InverseSqrtM, Custom };

/// Step sizes alpha_1..alpha_M for the gradient loop.
class LearningRateSchedule {
 public:
  /// alpha_m = 1 / sqrt(M) for every m.
  static LearningRateSchedule inverse_sqrt(Index iterations);
  static LearningRateSchedule custom(std::vector<double> rates);

  ScheduleKind kind() const noexcept { return kind_; }
  Index size() const noexcept { return static_cast<Index>(rates_.size()); }
  /// 1-based, matching the iteration counter of the loop.
  double rate(Index m) const { return rates_.at(static_cast<std::size_t>(m - 1)); }
  const std::vector<double>& rates() const noexcept { return rates_; }

 private:
  LearningRateSchedule(ScheduleKind kind, std::vector<double> rates);

  ScheduleKind kind_;
  std::vector<double> rates_;
};

}  // namespace sagdiv
