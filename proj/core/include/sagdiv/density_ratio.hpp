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

#include "sagdiv/kernel.hpp"
#include "sagdiv/reg_search.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

/// Kernel estimate of the density ratio p(x, z) / (p(x) p(z)) fitted by
/// unconstrained least-squares importance fitting:
///
///   ratio(x, z) = clamp(sum_j w_j kx(x, cx_j) kz(z, cz_j), 0, cap).
struct DensityRatioModel {
  KernelBlock x_block;
  KernelBlock z_block;
  Matrix centers_x;  // raw coordinates, b x d_X
  Matrix centers_z;  // raw coordinates, b x d_Z
  Vector weights;    // b; signed unless fitted with clamp_negative_weights
  double cap = 25.0;
  double lambda = 0.0;

  Index basis_size() const noexcept { return weights.size(); }
};

/// How the product-of-marginals (denominator) moment is formed.
enum class DenominatorPairs {
  /// Every (x_i, z_j) with i != j, via the closed form over factorized kernels.
  AllPairs,
  /// One pair (x_i, z_pi(i)) per row for a seeded derangement pi.
  Derangement,
};

struct DensityRatioOptions {
  /// Number of kernel centers. Unset: min(n, 200).
  std::optional<Index> basis;
  double cap = 25.0;
  std::uint64_t seed = 0;
  /// Share of rows held out when scoring lambda candidates.
  double validation_fraction = 0.25;
  DenominatorPairs denominator = DenominatorPairs::AllPairs;
  /// Zero out negative weights after the solve. Off by default: with
  /// median-heuristic bandwidths a nonnegative combination cannot resolve a
  /// ratio narrower than the kernel.
  bool clamp_negative_weights = false;
  RegSearchOptions search{};
};

/// Fits the weights for a fixed lambda. Numerator samples are the observed pairs
/// (x_i, z_i); denominator samples follow `options.denominator`.
DensityRatioModel fit_density_ratio(const Dataset& data, double lambda,
                                    const DensityRatioOptions& options = {});

/// Selects lambda by the iterative search on the held-out least-squares
/// importance criterion 0.5 w'H w - h'w, then refits on all rows.
DensityRatioModel fit_density_ratio(const Dataset& data, const DensityRatioOptions& options);

double eval_density_ratio(const DensityRatioModel& model,
                          const Eigen::Ref<const Eigen::RowVectorXd>& x,
                          const Eigen::Ref<const Eigen::RowVectorXd>& z);

/// Center-side factor for a batch of instruments: column m holds
/// w_j * kz(z_m, cz_j) over j. Combine with ratio_from_factors.
Matrix ratio_z_factor(const DensityRatioModel& model, const Matrix& z);
Matrix ratio_x_factor(const DensityRatioModel& model, const Matrix& x);

/// Full table ratio(x_i, z_m), rows over x and columns over z.
Matrix density_ratio_table(const DensityRatioModel& model, const Matrix& x, const Matrix& z);
Matrix ratio_from_factors(const DensityRatioModel& model, const Matrix& x_factor,
                          const Matrix& z_factor);

}  // namespace sagdiv
