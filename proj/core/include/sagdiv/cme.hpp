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

#include <Eigen/Cholesky>

#include "sagdiv/kernel.hpp"
#include "sagdiv/reg_search.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

/// Conditional expectation operator estimated by a kernel mean embedding:
///
///   E[h(X) | Z = z] ~ sum_i gamma_i(z) h(x_i),  gamma(z) = (K_ZZ + n lambda I)^{-1} k_Z(z).
class CMEOperatorModel {
 public:
  CMEOperatorModel(KernelBlock z_block, KernelBlock x_block, Matrix train_x, Matrix train_z,
                   double lambda);

  Index size() const noexcept { return train_x_.rows(); }
  double lambda() const noexcept { return lambda_; }
  const Matrix& train_x() const noexcept { return train_x_; }
  const Matrix& train_z() const noexcept { return train_z_; }
  const KernelBlock& z_block() const noexcept { return z_block_; }
  const KernelBlock& x_block() const noexcept { return x_block_; }

  /// gamma(z) for one instrument.
  Vector weights(const Eigen::Ref<const Eigen::RowVectorXd>& z) const;
  /// gamma for each row of z, as columns of an n x q matrix.
  Matrix batch_weights(const Matrix& z) const;

 private:
  KernelBlock z_block_;
  KernelBlock x_block_;
  Matrix train_x_;
  Matrix train_z_;
  double lambda_;
  Eigen::LLT<Matrix> factor_;
};

/// Inner product of gamma(z) with h evaluated at the training covariates.
double apply_cme(const CMEOperatorModel& model, const Vector& values,
                 const Eigen::Ref<const Eigen::RowVectorXd>& z);

/// Held-out embedding loss (1/m) sum_j |phi(x~_j) - mu(z~_j)|^2 over a validation
/// sample, expanded through kernels:
///
///   (1/m) tr(K_X~X~ - 2 K_X~X G + G' K_XX G),  G = (K_ZZ + n lambda I)^{-1} K_ZZ~.
///
/// One eigendecomposition of K_ZZ makes each lambda O(n^2).
class CMEValidationLoss {
 public:
  CMEValidationLoss(const KernelBlock& z_block, const KernelBlock& x_block,
                    const Matrix& train_x, const Matrix& train_z, const Matrix& val_x,
                    const Matrix& val_z);

  double operator()(double lambda) const;

 private:
  Index n_;
  Index m_;
  double val_trace_;
  Vector eigenvalues_;
  Vector cross_diag_;  // diag((Q' K_ZZ~)(Q' K_XX~)')
  Matrix coupling_;    // (Q' K_XX Q) .* ((Q' K_ZZ~)(Q' K_ZZ~)')
};

struct CMEOptions {
  std::uint64_t seed = 0;
  double validation_fraction = 0.5;
  /// Skip the search and use this regularization.
  std::optional<double> lambda;
  RegSearchOptions search{};
};

/// Selects lambda on a seeded train/validation split, then refits on every row.
CMEOperatorModel fit_cme_operator(const Dataset& data, const CMEOptions& options = {});
CMEOperatorModel fit_cme_operator(const Matrix& x, const Matrix& z, const CMEOptions& options);

}  // namespace sagdiv
