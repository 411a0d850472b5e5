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

#include "sagdiv/conditional_mean.hpp"

#include "sagdiv/error.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {

ConditionalMeanModel::ConditionalMeanModel(RidgeModel ridge,
                                           std::optional<std::pair<double, double>> range)
    : model_(std::move(ridge)), range_(range) {}

const RidgeModel& ConditionalMeanModel::ridge() const {
  if (is_raw_y()) throw InvalidInput("RawY conditional mean has no ridge model");
  return std::get<RidgeModel>(model_);
}

Vector ConditionalMeanModel::predict(const Matrix& z) const {
  if (is_raw_y()) {
    throw InvalidInput("RawY conditional mean can only be used inside the gradient loop");
  }
  Vector out = predict_ridge(std::get<RidgeModel>(model_), z);
  if (range_) out = out.cwiseMax(range_->first).cwiseMin(range_->second);
  return out;
}

ConditionalMeanModel fit_conditional_mean(const Dataset& data, const ConditionalMeanOptions& options) {
  if (options.raw_y) return ConditionalMeanModel{};
  if (data.size() < 10) throw InvalidInput("conditional-mean fit needs at least 10 samples");
  KernelBlock block = KernelBlock::fit(data.z());
  if (options.lengthscale) block.kernel = KernelSpec(*options.lengthscale);
  const Matrix k = block.gram(data.z(), data.z());
  const RidgeCrossValidator cv(k, data.y(), options.folds, derive_seed(options.seed, "folds"));
  const double lambda = refine_reg_search(cv, options.search);
  RidgeModel ridge;
  ridge.block = block;
  ridge.inputs = data.z();
  ridge.lambda = lambda;
  ridge.coef = fit_ridge(k, data.y(), lambda);
  return ConditionalMeanModel(std::move(ridge), options.range);
}

}  // namespace sagdiv
