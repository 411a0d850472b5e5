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
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sagdiv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Matched samples of covariates x (n x d_X), instruments z (n x d_Z) and outcomes y (n).
///
/// The constructor enforces identical row counts, at least one row and one
/// column per block, and finite entries everywhere.
class Dataset {
 public:
  Dataset(Matrix x, Matrix z, Vector y);

  const Matrix& x() const noexcept { return x_; }
  const Matrix& z() const noexcept { return z_; }
  const Vector& y() const noexcept { return y_; }

  Index size() const noexcept { return y_.size(); }
  Index x_dim() const noexcept { return x_.cols(); }
  Index z_dim() const noexcept { return z_.cols(); }

  /// Rows [begin, begin + count).
  Dataset slice(Index begin, Index count) const;
  /// Rows in the given order (duplicates allowed).
  Dataset select(std::span<const Index> rows) const;

 private:
  Matrix x_;
  Matrix z_;
  Vector y_;
};

/// Rows of `m` listed in `rows`.
Matrix select_rows(const Matrix& m, std::span<const Index> rows);
Vector select_rows(const Vector& v, std::span<const Index> rows);

bool all_finite(const Matrix& m);

}  // namespace sagdiv
