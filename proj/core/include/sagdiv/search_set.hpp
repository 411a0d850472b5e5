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

#include <span>

#include "sagdiv/types.hpp"

namespace sagdiv {

/// The L-infinity ball {h : |h(x)| <= bound for all x}.
class SearchSet {
 public:
  explicit SearchSet(double bound = 10.0);

  double bound() const noexcept { return bound_; }
  double diameter() const noexcept { return 2.0 * bound_; }

 private:
  double bound_;
};

/// Pointwise projection onto the ball: (h+ ^ A) - (h- ^ A), i.e. clamp to [-A, A].
Vector project_linf(std::span<const double> values, double bound);
Vector project_linf(const Vector& values, double bound);

/// Clamp in place. Caller guarantees finiteness; used inside the gradient loop.
inline void clamp_inplace(Vector& values, double bound) {
  values = values.cwiseMax(-bound).cwiseMin(bound);
}

}  // namespace sagdiv
