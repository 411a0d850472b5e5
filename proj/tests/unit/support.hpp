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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "sagdiv/density_ratio.hpp"
#include "sagdiv/kernel.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv::testing {

inline Matrix normal_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Vector normal_vector(Index n, std::uint64_t seed) {
  return normal_matrix(n, 1, seed).col(0);
}

inline Matrix uniform_matrix(Index rows, Index cols, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = unif(rng);
  }
  return m;
}

inline KernelBlock identity_block(Index dim, double lengthscale) {
  return KernelBlock{Standardizer(Vector::Zero(dim), Vector::Ones(dim)), KernelSpec(lengthscale)};
}

/// Hand-built ratio model with unit standardization.
inline DensityRatioModel toy_ratio(Index basis, Index dx, Index dz, std::uint64_t seed,
                                   double cap = 25.0) {
  DensityRatioModel model;
  model.x_block = identity_block(dx, 0.8);
  model.z_block = identity_block(dz, 1.3);
  model.centers_x = normal_matrix(basis, dx, seed);
  model.centers_z = normal_matrix(basis, dz, seed + 1);
  model.weights = uniform_matrix(basis, 1, -0.5, 2.0, seed + 2).col(0);
  model.cap = cap;
  model.lambda = 1e-3;
  return model;
}

/// Direct summation of the clamped ratio at one pair.
inline double ratio_oracle(const DensityRatioModel& model, const Eigen::RowVectorXd& x,
                           const Eigen::RowVectorXd& z) {
  const Eigen::RowVectorXd xs =
      (x - model.x_block.standardizer.mean().transpose()).cwiseQuotient(
          model.x_block.standardizer.scale().transpose());
  const Eigen::RowVectorXd zs =
      (z - model.z_block.standardizer.mean().transpose()).cwiseQuotient(
          model.z_block.standardizer.scale().transpose());
  const double lx = model.x_block.kernel.lengthscale();
  const double lz = model.z_block.kernel.lengthscale();
  double total = 0.0;
  for (Index j = 0; j < model.weights.size(); ++j) {
    const Eigen::RowVectorXd cx =
        (model.centers_x.row(j) - model.x_block.standardizer.mean().transpose())
            .cwiseQuotient(model.x_block.standardizer.scale().transpose());
    const Eigen::RowVectorXd cz =
        (model.centers_z.row(j) - model.z_block.standardizer.mean().transpose())
            .cwiseQuotient(model.z_block.standardizer.scale().transpose());
    double dx = 0.0;
    for (Index c = 0; c < xs.size(); ++c) dx += (xs(c) - cx(c)) * (xs(c) - cx(c));
    double dz = 0.0;
    for (Index c = 0; c < zs.size(); ++c) dz += (zs(c) - cz(c)) * (zs(c) - cz(c));
    total += model.weights(j) * std::exp(-dx / (2.0 * lx * lx)) * std::exp(-dz / (2.0 * lz * lz));
  }
  return std::min(std::max(total, 0.0), model.cap);
}

}  // namespace sagdiv::testing
