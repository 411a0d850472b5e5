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
#include <span>
#include <vector>

#include "sagdiv/ridge.hpp"

namespace sagdiv {

using Objective = std::function<double(double)>;

struct RegSearchOptions {
  std::vector<double> initial{1e-1, 1e-3, 1e-5, 1e-7};
  /// Offset for the first refinement. Unset: one tenth of the first winner.
  std::optional<double> offset;
  int iterations = 3;
};

/// Iterative regularization search. Each round picks the argmin over the current
/// candidates (lowest index on ties, non-positive candidates skipped), replaces
/// the candidates by lambda* + k*eps for k = -5..5, and divides eps by 10. After
/// the last round the refined candidates are scored once more and the winner is
/// returned.
double refine_reg_search(const Objective& objective, const RegSearchOptions& options = {});

/// Score callback for one fold: held-out mean squared error at `lambda`.
using FoldScore = std::function<double(std::size_t fold, double lambda)>;

/// Mean held-out error of `lambda` across `folds` folds.
double cv_error(std::size_t folds, double lambda, const FoldScore& score);

/// Candidate with the smallest mean held-out error; lowest index on ties.
double cross_validate(std::size_t folds, std::span<const double> candidates,
                      const FoldScore& score);

/// Argmin of `objective` over `candidates`, skipping non-positive and non-finite
/// entries. Returns nullopt when nothing scored finite.
std::optional<std::size_t> argmin_candidate(std::span<const double> candidates,
                                            const Objective& objective);

}  // namespace sagdiv
