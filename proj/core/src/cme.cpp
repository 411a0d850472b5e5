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

#include "sagdiv/cme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "sagdiv/error.hpp"
#include "sagdiv/ridge.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {

CMEOperatorModel::CMEOperatorModel(KernelBlock z_block, KernelBlock x_block, Matrix train_x,
                                   Matrix train_z, double lambda)
    : z_block_(std::move(z_block)),
      x_block_(std::move(x_block)),
      train_x_(std::move(train_x)),
      train_z_(std::move(train_z)),
      lambda_(lambda) {
  if (train_x_.rows() != train_z_.rows() || train_x_.rows() < 1) {
    throw InvalidInput("operator training blocks disagree on row count");
  }
  factor_ = factor_regularized(z_block_.gram(train_z_, train_z_), lambda_);
}

Vector CMEOperatorModel::weights(const Eigen::Ref<const Eigen::RowVectorXd>& z) const {
  if (!z.allFinite()) throw InvalidInput("operator query is not finite");
  return factor_.solve(z_block_.gram(train_z_, Matrix(z)));
}

Matrix CMEOperatorModel::batch_weights(const Matrix& z) const {
  if (!z.allFinite()) throw InvalidInput("operator query is not finite");
  return factor_.solve(z_block_.gram(train_z_, z));
}

double apply_cme(const CMEOperatorModel& model, const Vector& values,
                 const Eigen::Ref<const Eigen::RowVectorXd>& z) {
  if (values.size() != model.size()) {
    throw InvalidInput("operator expects " + std::to_string(model.size()) + " values, got " +
                       std::to_string(values.size()));
  }
  return model.weights(z).dot(values);
}

CMEValidationLoss::CMEValidationLoss(const KernelBlock& z_block, const KernelBlock& x_block,
                                     const Matrix& train_x, const Matrix& train_z,
                                     const Matrix& val_x, const Matrix& val_z)
    : n_(train_x.rows()), m_(val_x.rows()) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(z_block.gram(train_z, train_z));
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of K_ZZ failed");
  const Matrix& q = eig.eigenvectors();
  eigenvalues_ = eig.eigenvalues();
  const Matrix b = q.transpose() * z_block.gram(train_z, val_z);
  const Matrix c = q.transpose() * x_block.gram(train_x, val_x);
  cross_diag_ = b.cwiseProduct(c).rowwise().sum();
  const Matrix e = q.transpose() * x_block.gram(train_x, train_x) * q;
  coupling_ = e.cwiseProduct(b * b.transpose());
  val_trace_ = x_block.gram(val_x, val_x).trace();
}

double CMEValidationLoss::operator()(double lambda) const {
  if (!(lambda > 0.0)) return std::numeric_limits<double>::infinity();
  const Vector d =
      (eigenvalues_.array() + static_cast<double>(n_) * lambda + kGramJitter).inverse().matrix();
  return (val_trace_ - 2.0 * d.dot(cross_diag_) + d.dot(coupling_ * d)) / static_cast<double>(m_);
}

CMEOperatorModel fit_cme_operator(const Dataset& data, const CMEOptions& options) {
  return fit_cme_operator(data.x(), data.z(), options);
}

CMEOperatorModel fit_cme_operator(const Matrix& x, const Matrix& z, const CMEOptions& options) {
  const Index n = x.rows();
  if (z.rows() != n) throw InvalidInput("operator fit: x and z disagree on row count");
  if (n < 10) throw InvalidInput("operator fit needs at least 10 samples");
  KernelBlock z_block = KernelBlock::fit(z);
  KernelBlock x_block = KernelBlock::fit(x);
  double lambda = 0.0;
  if (options.lambda) {
    lambda = *options.lambda;
  } else {
    const auto held_out =
        static_cast<Index>(std::round(options.validation_fraction * static_cast<double>(n)));
    if (held_out < 1 || n - held_out < 2) throw InvalidInput("operator fit: invalid validation split");
    auto perm = permutation(n, derive_seed(options.seed, "split"));
    std::vector<Index> val(perm.begin(), perm.begin() + held_out);
    std::vector<Index> train(perm.begin() + held_out, perm.end());
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());
    const CMEValidationLoss loss(z_block, x_block, select_rows(x, train), select_rows(z, train),
                                 select_rows(x, val), select_rows(z, val));
    lambda = refine_reg_search(loss, options.search);
  }
  return CMEOperatorModel(std::move(z_block), std::move(x_block), x, z, lambda);
}

}  // namespace sagdiv
