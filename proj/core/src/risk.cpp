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

#include "sagdiv/risk.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sagdiv/error.hpp"
#include "sagdiv/parallel.hpp"

namespace sagdiv {

RiskEstimate mc_projected_risk(const BatchFunction& h, const ConditionalOracle& oracle,
                               const LossSpec& loss, Index outer, Index inner,
                               std::uint64_t seed, int threads) {
  if (outer < 2 || inner < 1) throw InvalidInput("risk estimate needs outer >= 2 and inner >= 1");
  constexpr Index kDrawsPerBlock = 32;
  const Index blocks = (outer + kDrawsPerBlock - 1) / kDrawsPerBlock;
  std::vector<double> losses(static_cast<std::size_t>(outer));
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t blk) {
    const Index begin = static_cast<Index>(blk) * kDrawsPerBlock;
    const Index count = std::min(kDrawsPerBlock, outer - begin);
    Matrix zs(count, oracle.z_dim());
    Matrix xs(count * inner, oracle.x_dim());
    for (Index i = 0; i < count; ++i) {
      Rng rng(derive_seed(seed, "outer", static_cast<std::uint64_t>(begin + i)));
      zs.row(i) = oracle.sample_z(1, rng).row(0);
      xs.middleRows(i * inner, inner) = oracle.sample_x_given_z(zs.row(i), inner, rng);
    }
    const Vector values = h(xs);
    if (values.size() != xs.rows()) throw InvalidInput("candidate returned the wrong number of values");
    for (Index i = 0; i < count; ++i) {
      const double projected = values.segment(i * inner, inner).mean();
      losses[static_cast<std::size_t>(begin + i)] = loss_value(loss, oracle.target(zs.row(i)), projected);
    }
  });
  double mean = 0.0;
  for (double l : losses) mean += l;
  mean /= static_cast<double>(outer);
  double ss = 0.0;
  for (double l : losses) ss += (l - mean) * (l - mean);
  const double sd = std::sqrt(ss / static_cast<double>(outer - 1));
  return RiskEstimate{mean, sd / std::sqrt(static_cast<double>(outer)), outer};
}

}  // namespace sagdiv
