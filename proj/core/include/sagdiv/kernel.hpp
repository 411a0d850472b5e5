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

#include "sagdiv/types.hpp"

namespace sagdiv {

/// Gaussian kernel k(u, v) = exp(-|u - v|^2 / (2 lengthscale^2)).
class KernelSpec {
 public:
  explicit KernelSpec(double lengthscale = 1.0);

  double lengthscale() const noexcept { return lengthscale_; }
  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& u,
                    const Eigen::Ref<const Eigen::RowVectorXd>& v) const;

 private:
  double lengthscale_;
};

/// Per-column affine map to mean 0 and unit variance. Constant columns keep scale 1.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(Vector mean, Vector scale);

  static Standardizer fit(const Matrix& data);

  Matrix apply(const Matrix& data) const;
  const Vector& mean() const noexcept { return mean_; }
  const Vector& scale() const noexcept { return scale_; }
  Index dim() const noexcept { return mean_.size(); }

 private:
  Vector mean_;
  Vector scale_;
};

inline constexpr Index kMedianHeuristicMaxRows = 2000;
inline constexpr std::uint64_t kMedianHeuristicSeed = 0x6d656469616eULL;

/// Median of the pairwise Euclidean distances between rows. Inputs with more than
/// kMedianHeuristicMaxRows rows are subsampled with a fixed seed. An even number
/// of pairs yields the mean of the two middle distances.
double median_heuristic(const Matrix& points);

/// Cross Gram matrix K(a, b) with K_ij = k(a_i, b_j).
Matrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b);

/// Squared Euclidean distances between the rows of a and b.
Matrix squared_distances(const Matrix& a, const Matrix& b);

/// Standardizer fitted on `data` together with a median-heuristic lengthscale on
/// the standardized rows. The common setup for every kernel block.
struct KernelBlock {
  Standardizer standardizer;
  KernelSpec kernel;

  static KernelBlock fit(const Matrix& data);
  /// Gram matrix between raw inputs a and b after standardization.
  Matrix gram(const Matrix& a, const Matrix& b) const;
};

}  // namespace sagdiv
