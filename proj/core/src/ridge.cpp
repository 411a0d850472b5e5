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

#include "sagdiv/ridge.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sagdiv/error.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {

Eigen::LLT<Matrix> factor_regularized(const Matrix& k, double lambda) {
  if (k.rows() != k.cols()) throw InvalidInput("Gram matrix must be square");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("ridge lambda must be positive");
  const auto m = static_cast<double>(k.rows());
  Matrix a = k;
  a.diagonal().array() += m * lambda + kGramJitter;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of the regularized Gram matrix failed");
  }
  return llt;
}

Vector fit_ridge(const Matrix& k, const Vector& y, double lambda) {
  if (k.rows() != y.size()) throw InvalidInput("Gram matrix and targets disagree on size");
  return factor_regularized(k, lambda).solve(y);
}

RidgeModel fit_ridge_model(const Matrix& inputs, const Vector& y, double lambda) {
  return fit_ridge_model(KernelBlock::fit(inputs), inputs, y, lambda);
}

RidgeModel fit_ridge_model(const KernelBlock& block, const Matrix& inputs, const Vector& y,
                           double lambda) {
  RidgeModel model;
  model.block = block;
  model.inputs = inputs;
  model.lambda = lambda;
  model.coef = fit_ridge(block.gram(inputs, inputs), y, lambda);
  return model;
}

Vector predict_ridge(const RidgeModel& model, const Matrix& query) {
  if (query.rows() == 0) return Vector(0);
  return model.block.gram(query, model.inputs) * model.coef;
}

std::vector<FoldSplit> make_folds(Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidInput("cross-validation needs at least two folds");
  if (n < folds) throw InvalidInput("fewer rows than folds");
  const auto perm = permutation(n, seed);
  std::vector<Index> fold_of(static_cast<std::size_t>(n));
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    fold_of[static_cast<std::size_t>(perm[pos])] = static_cast<Index>(pos % static_cast<std::size_t>(folds));
  }
  std::vector<FoldSplit> out(static_cast<std::size_t>(folds));
  for (Index i = 0; i < n; ++i) {
    for (int f = 0; f < folds; ++f) {
      auto& split = out[static_cast<std::size_t>(f)];
      (fold_of[static_cast<std::size_t>(i)] == f ? split.test : split.train).push_back(i);
    }
  }
  return out;
}

RidgeCrossValidator::RidgeCrossValidator(const Matrix& k, const Vector& y, int folds,
                                         std::uint64_t seed)
    : folds_(make_folds(y.size(), folds, seed)) {
  if (k.rows() != y.size() || k.cols() != y.size()) {
    throw InvalidInput("Gram matrix and targets disagree on size");
  }
  cache_.reserve(folds_.size());
  for (const auto& split : folds_) {
    const auto m = static_cast<Index>(split.train.size());
    const auto t = static_cast<Index>(split.test.size());
    Matrix k_train(m, m);
    Matrix k_test(t, m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) k_train(a, b) = k(split.train[a], split.train[b]);
      for (Index c = 0; c < t; ++c) k_test(c, a) = k(split.test[c], split.train[a]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(k_train);
    if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed in CV");
    FoldCache cache;
    cache.eigenvalues = eig.eigenvalues();
    cache.test_projection = k_test * eig.eigenvectors();
    cache.projected_y = eig.eigenvectors().transpose() * select_rows(y, split.train);
    cache.test_y = select_rows(y, split.test);
    cache_.push_back(std::move(cache));
  }
}

double RidgeCrossValidator::score(double lambda) const {
  if (!(lambda > 0.0)) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const auto& c : cache_) {
    const double shift = static_cast<double>(c.eigenvalues.size()) * lambda + kGramJitter;
    const Vector coef = c.projected_y.array() / (c.eigenvalues.array() + shift);
    total += (c.test_projection * coef - c.test_y).squaredNorm() / static_cast<double>(c.test_y.size());
  }
  return total / static_cast<double>(cache_.size());
}

}  // namespace sagdiv
