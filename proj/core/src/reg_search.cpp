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

#include "sagdiv/reg_search.hpp"

#include <cmath>
#include <limits>

#include "sagdiv/error.hpp"

namespace sagdiv {

std::optional<std::size_t> argmin_candidate(std::span<const double> candidates,
                                            const Objective& objective) {
  std::optional<std::size_t> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double lambda = candidates[i];
    if (!(lambda > 0.0) || !std::isfinite(lambda)) continue;
    const double value = objective(lambda);
    if (!std::isfinite(value)) continue;
    if (!best || value < best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

double refine_reg_search(const Objective& objective, const RegSearchOptions& options) {
  if (options.initial.empty()) throw InvalidInput("regularization search needs initial candidates");
  for (double l : options.initial) {
    if (!(l > 0.0)) throw InvalidInput("initial regularization candidates must be positive");
  }
  if (options.offset && !(*options.offset > 0.0)) throw InvalidInput("search offset must be positive");
  if (options.iterations < 1) throw InvalidInput("search needs at least one iteration");

  std::vector<double> candidates = options.initial;
  std::optional<double> offset = options.offset;
  double best = 0.0;
  for (int t = 0; t <= options.iterations; ++t) {
    const auto winner = argmin_candidate(candidates, objective);
    if (!winner) {
      if (t == 0) throw SearchFailure("objective is non-finite on every candidate");
      break;  // keep the previous round's winner
    }
    best = candidates[*winner];
    if (t == options.iterations) break;
    const double eps = offset.value_or(best / 10.0);
    candidates.clear();
    for (int k = -5; k <= 5; ++k) candidates.push_back(best + k * eps);
    offset = eps / 10.0;
  }
  return best;
}

double cv_error(std::size_t folds, double lambda, const FoldScore& score) {
  double total = 0.0;
  for (std::size_t f = 0; f < folds; ++f) total += score(f, lambda);
  return total / static_cast<double>(folds);
}

double cross_validate(std::size_t folds, std::span<const double> candidates,
                      const FoldScore& score) {
  if (candidates.empty()) throw InvalidInput("cross-validation needs at least one candidate");
  if (folds < 2) throw InvalidInput("cross-validation needs at least two folds");
  const auto winner =
      argmin_candidate(candidates, [&](double lambda) { return cv_error(folds, lambda, score); });
  if (!winner) throw SearchFailure("cross-validation error is non-finite for every candidate");
  return candidates[*winner];
}

}  // namespace sagdiv
