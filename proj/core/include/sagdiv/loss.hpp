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

namespace sagdiv {

enum class LossKind { Quadratic, LogisticBCE };

/// Pointwise loss l(y, y') together with the constants that bound its
/// second-argument derivative: |d2 l(y,y') - d2 l(u,u')| <= L (|y-u| + |y'-u'|)
/// and C0 = |d2 l(0, 0)|.
///
/// Quadratic:    l = (y - y')^2 / 2.
/// LogisticBCE:  l = bce(y, F(y')) with F(t) = 1 / (1 + exp(-t / beta)).
class LossSpec {
 public:
  static LossSpec quadratic();
  static LossSpec logistic_bce(double beta);

  LossKind kind() const noexcept { return kind_; }
  /// Logistic scale; 1 for the quadratic loss.
  double scale() const noexcept { return scale_; }
  double lipschitz() const noexcept;
  double offset() const noexcept;

  /// Link applied to the second argument before the likelihood: identity or F.
  double link(double t) const noexcept;

 private:
  LossSpec(LossKind kind, double scale) : kind_(kind), scale_(scale) {}

  LossKind kind_;
  double scale_;
};

double loss_value(const LossSpec& spec, double y, double y_pred);
double loss_deriv2(const LossSpec& spec, double y, double y_pred);

/// Numerically stable logistic function and log(1 + exp(t)).
double sigmoid(double t) noexcept;
double softplus(double t) noexcept;

}  // namespace sagdiv
