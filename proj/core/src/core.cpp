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

#include <algorithm>
#include <cmath>
#include <string>

#include "sagdiv/error.hpp"
#include "sagdiv/loss.hpp"
#include "sagdiv/schedule.hpp"
#include "sagdiv/search_set.hpp"

namespace sagdiv {

SearchSet::SearchSet(double bound) : bound_(bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidInput("search-set bound must be positive");
}

Vector project_linf(std::span<const double> values, double bound) {
  if (!(bound > 0.0)) throw InvalidInput("projection bound must be positive");
  Vector out(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) {
      throw InvalidInput("projection input " + std::to_string(i) + " is not finite");
    }
    out(static_cast<Index>(i)) = std::min(std::max(v, 0.0), bound) - std::min(std::max(-v, 0.0), bound);
  }
  return out;
}

Vector project_linf(const Vector& values, double bound) {
  return project_linf(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())),
                      bound);
}

double sigmoid(double t) noexcept {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) noexcept { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

LossSpec LossSpec::quadratic() { return LossSpec(LossKind::Quadratic, 1.0); }

LossSpec LossSpec::logistic_bce(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("logistic scale must be positive");
  return LossSpec(LossKind::LogisticBCE, beta);
}

double LossSpec::lipschitz() const noexcept {
  if (kind_ == LossKind::Quadratic) return 1.0;
  return std::max(1.0 / scale_, 1.0 / (4.0 * scale_ * scale_));
}

double LossSpec::offset() const noexcept {
  if (kind_ == LossKind::Quadratic) return 0.0;
  return 1.0 / (2.0 * scale_);
}

double LossSpec::link(double t) const noexcept {
  if (kind_ == LossKind::Quadratic) return t;
  return sigmoid(t / scale_);
}

namespace {
void check_probability(const LossSpec& spec, double y) {
  if (spec.kind() == LossKind::LogisticBCE && !(y >= 0.0 && y <= 1.0)) {
    throw InvalidInput("binary cross-entropy target must lie in [0, 1], got " + std::to_string(y));
  }
}
}  // namespace

double loss_value(const LossSpec& spec, double y, double y_pred) {
  check_probability(spec, y);
  if (spec.kind() == LossKind::Quadratic) {
    const double d = y - y_pred;
    return 0.5 * d * d;
  }
  // -log sigma(t) = softplus(-t), -log(1 - sigma(t)) = softplus(t).
  const double t = y_pred / spec.scale();
  return y * softplus(-t) + (1.0 - y) * softplus(t);
}

double loss_deriv2(const LossSpec& spec, double y, double y_pred) {
  check_probability(spec, y);
  if (spec.kind() == LossKind::Quadratic) return y_pred - y;
  return (sigmoid(y_pred / spec.scale()) - y) / spec.scale();
}

LearningRateSchedule::LearningRateSchedule(ScheduleKind kind, std::vector<double> rates)
    : kind_(kind), rates_(std::move(rates)) {
  for (double r : rates_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("learning rates must be positive");
  }
}

LearningRateSchedule LearningRateSchedule::inverse_sqrt(Index iterations) {
  if (iterations < 1) throw InvalidInput("schedule needs at least one iteration");
  const double rate = 1.0 / std::sqrt(static_cast<double>(iterations));
  return LearningRateSchedule(ScheduleKind::InverseSqrtM,
                              std::vector<double>(static_cast<std::size_t>(iterations), rate));
}

LearningRateSchedule LearningRateSchedule::custom(std::vector<double> rates) {
  if (rates.empty()) throw InvalidInput("custom schedule is empty");
  return LearningRateSchedule(ScheduleKind::Custom, std::move(rates));
}

}  // namespace sagdiv
