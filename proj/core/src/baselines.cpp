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

#include "sagdiv/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "sagdiv/error.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {
namespace {

Matrix with_intercept(const Matrix& m) {
  Matrix out(m.rows(), m.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(m.cols()) = m;
  return out;
}

Matrix least_squares(const Matrix& design, const Matrix& target, const char* stage) {
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols()) {
    throw DegenerateData(std::string("rank-deficient design in 2SLS ") + stage);
  }
  return qr.solve(target);
}

}  // namespace

TSLSModel fit_2sls(const Dataset& data) {
  const Index n = data.size();
  if (n <= data.z_dim() + 1 || n <= data.x_dim() + 1) {
    throw InvalidInput("2SLS needs more samples than regressors plus one");
  }
  TSLSModel model;
  const Matrix z1 = with_intercept(data.z());
  model.first_stage = least_squares(z1, data.x(), "first stage");
  const Matrix x_hat = z1 * model.first_stage;
  model.second_stage = least_squares(with_intercept(x_hat), data.y(), "second stage");
  return model;
}

Vector predict_2sls(const TSLSModel& model, const Matrix& x) {
  if (x.cols() + 1 != model.second_stage.size()) throw InvalidInput("covariate dimension mismatch");
  return with_intercept(x) * model.second_stage;
}

Vector kiv_stage2_coefficients(const Matrix& kxx, const Matrix& w, const Vector& y_tilde,
                               double xi) {
  const auto m = static_cast<double>(w.cols());
  Matrix a = w * w.transpose() + m * xi * kxx;
  a.diagonal().array() += kGramJitter * std::max(1.0, a.diagonal().maxCoeff());
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) return llt.solve(w * y_tilde);
  Eigen::LDLT<Matrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("KIV stage-2 system is singular");
  return ldlt.solve(w * y_tilde);
}

KIVModel fit_kiv(const Dataset& data, const KIVOptions& options) {
  const Index n = data.size();
  if (n < 20) throw InvalidInput("KIV needs at least 20 samples");
  const auto perm = permutation(n, derive_seed(options.seed, "split"));
  const Index n1 = n / 2;
  std::vector<Index> first(perm.begin(), perm.begin() + n1);
  std::vector<Index> second(perm.begin() + n1, perm.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  const Dataset stage1 = data.select(first);
  const Dataset stage2 = data.select(second);

  CMEOptions stage1_options = options.stage1;
  stage1_options.seed = derive_seed(options.seed, "stage1");
  const CMEOperatorModel cme = fit_cme_operator(stage1, stage1_options);

  const Matrix kxx = cme.x_block().gram(stage1.x(), stage1.x());
  const Matrix w = kxx * cme.batch_weights(stage2.z());
  double xi = 0.0;
  if (options.xi) {
    xi = *options.xi;
  } else {
    // Out-of-sample loss on the stage-1 outcomes.
    const auto objective = [&](double candidate) {
      const Vector alpha = kiv_stage2_coefficients(kxx, w, stage2.y(), candidate);
      return (stage1.y() - kxx * alpha).squaredNorm() / static_cast<double>(n1);
    };
    xi = refine_reg_search(objective, options.stage2_search);
  }

  KIVModel model;
  model.x_block = cme.x_block();
  model.stage1_x = stage1.x();
  model.alpha = kiv_stage2_coefficients(kxx, w, stage2.y(), xi);
  model.lambda = cme.lambda();
  model.xi = xi;
  model.stage1_size = n1;
  model.stage2_size = n - n1;
  return model;
}

Vector predict_kiv(const KIVModel& model, const Matrix& x) {
  if (x.rows() == 0) return Vector(0);
  return model.x_block.gram(x, model.stage1_x) * model.alpha;
}

RidgeModel fit_naive_krr(const Dataset& data, const NaiveOptions& options) {
  if (data.size() < 10) throw InvalidInput("naive kernel ridge needs at least 10 samples");
  const KernelBlock block = KernelBlock::fit(data.x());
  const Matrix k = block.gram(data.x(), data.x());
  const RidgeCrossValidator cv(k, data.y(), options.folds, derive_seed(options.seed, "folds"));
  const double lambda = refine_reg_search(cv, options.search);
  RidgeModel model;
  model.block = block;
  model.inputs = data.x();
  model.lambda = lambda;
  model.coef = fit_ridge(k, data.y(), lambda);
  return model;
}

}  // namespace sagdiv
