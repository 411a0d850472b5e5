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

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sagdiv/kernel.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

inline constexpr double kGramJitter = 1e-10;

/// Cholesky factor of K + m*lambda*I (+ jitter) for an m x m Gram matrix K.
Eigen::LLT<Matrix> factor_regularized(const Matrix& k, double lambda);

/// Dual coefficients c solving (K + m*lambda*I) c = y.
Vector fit_ridge(const Matrix& k, const Vector& y, double lambda);

/// Kernel ridge regression on standardized inputs.
struct RidgeModel {
  KernelBlock block;
  Matrix inputs;  // raw training inputs (m x d)
  Vector coef;
  double lambda = 1.0;
};

RidgeModel fit_ridge_model(const Matrix& inputs, const Vector& y, double lambda);
RidgeModel fit_ridge_model(const KernelBlock& block, const Matrix& inputs, const Vector& y,
                           double lambda);
Vector predict_ridge(const RidgeModel& model, const Matrix& query);

/// K-fold assignment. Fold sizes differ by at most one.
struct FoldSplit {
  std::vector<Index> train;
  std::vector<Index> test;
};
std::vector<FoldSplit> make_folds(Index n, int folds, std::uint64_t seed);

/// Held-out mean squared error of kernel ridge across folds, for any lambda.
///
/// Each fold's training Gram matrix is eigendecomposed once, so scoring a new
/// lambda costs O(m^2) per fold instead of a fresh factorization.
class RidgeCrossValidator {
 public:
  RidgeCrossValidator(const Matrix& k, const Vector& y, int folds, std::uint64_t seed);

  double score(double lambda) const;
  double operator()(double lambda) const { return score(lambda); }
  const std::vector<FoldSplit>& folds() const noexcept { return folds_; }

 private:
  struct FoldCache {
    Vector eigenvalues;
    Matrix test_projection;  // K_test,train * Q
    Vector projected_y;      // Q^T y_train
    Vector test_y;
  };

  std::vector<FoldSplit> folds_;
  std::vector<FoldCache> cache_;
};

}  // namespace sagdiv
