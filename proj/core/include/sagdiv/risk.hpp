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
#include <functional>

#include "sagdiv/loss.hpp"
#include "sagdiv/rng.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

/// Batch evaluation of a candidate function h at each row.
using BatchFunction = std::function<Vector(const Matrix&)>;

/// Ground truth needed to evaluate the projected risk of a candidate.
class ConditionalOracle {
 public:
  virtual ~ConditionalOracle() = default;

  virtual Index z_dim() const = 0;
  virtual Index x_dim() const = 0;
  /// Draws from the instrument marginal.
  virtual Matrix sample_z(Index count, Rng& rng) const = 0;
  /// Draws from X | Z = z.
  virtual Matrix sample_x_given_z(const Eigen::Ref<const Eigen::RowVectorXd>& z, Index count,
                                  Rng& rng) const = 0;
  /// r(z) = E[Y | Z = z], the first argument of the loss.
  virtual double target(const Eigen::Ref<const Eigen::RowVectorXd>& z) const = 0;
};

struct RiskEstimate {
  double value = 0.0;
  double std_error = 0.0;
  Index samples = 0;
};

/// Nested Monte Carlo estimate of E[l(r(Z), E[h(X) | Z])]: `outer` instrument
/// draws, each with `inner` conditional covariate draws to approximate the inner
/// expectation. Outer draw i uses the substream derive_seed(seed, "outer", i), so
/// the result does not depend on `threads`.
RiskEstimate mc_projected_risk(const BatchFunction& h, const ConditionalOracle& oracle,
                               const LossSpec& loss, Index outer, Index inner,
                               std::uint64_t seed, int threads = 1);

}  // namespace sagdiv
