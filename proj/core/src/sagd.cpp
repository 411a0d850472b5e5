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

#include "sagdiv/sagd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sagdiv/error.hpp"
#include "sagdiv/parallel.hpp"

namespace sagdiv {
namespace {
constexpr Index kEvalBlockRows = 256;
}

SAGDModel::SAGDModel(DensityRatioModel ratio, Matrix anchors, Vector rates, Vector gradients,
                     double bound, Index warmup, Matrix cached_x, Vector cached_average)
    : ratio_(std::move(ratio)),
      anchors_(std::move(anchors)),
      rates_(std::move(rates)),
      gradients_(std::move(gradients)),
      bound_(bound),
      warmup_(warmup),
      cached_x_(std::move(cached_x)),
      cached_average_(std::move(cached_average)) {
  const Index m = anchors_.rows();
  if (m < 1) throw InvalidInput("model needs at least one anchor");
  if (rates_.size() != m || gradients_.size() != m) {
    throw InvalidInput("anchors, rates and gradients disagree on length");
  }
  if (warmup_ < 0 || warmup_ >= m) throw InvalidInput("warm-up must satisfy 0 <= K < M");
  if (!(bound_ > 0.0)) throw InvalidInput("bound must be positive");
  if (cached_x_.rows() != cached_average_.size()) throw InvalidInput("cache size mismatch");
  if (anchors_.cols() != ratio_.centers_z.cols()) throw InvalidInput("anchor dimension mismatch");
  steps_ = rates_.cwiseProduct(gradients_);
  anchor_factor_ = ratio_z_factor(ratio_, anchors_);
}

SAGDModel fit_sagdiv(const PreliminaryEstimators& est, const Matrix& z_stream,
                     const SAGDConfig& config, const std::optional<Vector>& outcomes) {
  const Index m_total = z_stream.rows();
  if (m_total < 1) throw InvalidInput("instrument stream is empty");
  if (config.warmup < 0 || config.warmup >= m_total) {
    throw InvalidInput("warm-up " + std::to_string(config.warmup) + " must be below M = " +
                       std::to_string(m_total));
  }
  if (!z_stream.allFinite()) throw InvalidInput("instrument stream is not finite");
  if (z_stream.cols() != est.cme.train_z().cols() || z_stream.cols() != est.ratio.centers_z.cols()) {
    throw InvalidInput("instrument stream dimension does not match the estimators");
  }
  const LearningRateSchedule schedule =
      config.schedule.value_or(LearningRateSchedule::inverse_sqrt(m_total));
  if (schedule.size() < m_total) throw InvalidInput("learning-rate schedule shorter than M");
  const double bound = config.search_set.bound();

  Vector targets;
  if (est.mean.is_raw_y()) {
    if (!outcomes || outcomes->size() != m_total) {
      throw InvalidInput("RawY mode needs one outcome per stream instrument");
    }
    targets = *outcomes;
  } else {
    targets = est.mean.predict(z_stream);
  }

  const Matrix& train_x = est.cme.train_x();
  const Matrix gamma = est.cme.batch_weights(z_stream);  // n x M
  const Matrix ratio = density_ratio_table(est.ratio, train_x, z_stream);

  Vector rates(m_total);
  Vector gradients(m_total);
  Vector values = Vector::Zero(train_x.rows());
  Vector average = Vector::Zero(train_x.rows());
  for (Index m = 1; m <= m_total; ++m) {
    const Index col = m - 1;
    const double projected = gamma.col(col).dot(values);
    if (!std::isfinite(projected)) {
      throw DivergenceError("non-finite operator value at step " + std::to_string(m), m);
    }
    const double g = loss_deriv2(config.loss, targets(col), projected);
    if (!std::isfinite(g) || std::abs(g) > kDivergenceThreshold) {
      throw DivergenceError("gradient scale " + std::to_string(g) + " at step " + std::to_string(m), m);
    }
    rates(col) = schedule.rate(m);
    gradients(col) = g;
    const double step = rates(col) * g;
    values -= step * ratio.col(col);
    clamp_inplace(values, bound);
    if (m > config.warmup) average += values;
  }
  average /= static_cast<double>(m_total - config.warmup);
  return SAGDModel(est.ratio, z_stream, std::move(rates), std::move(gradients), bound,
                   config.warmup, train_x, std::move(average));
}

Vector eval_sagd(const SAGDModel& model, const Matrix& x, int threads) {
  if (x.cols() != model.ratio().centers_x.cols()) throw InvalidInput("covariate dimension mismatch");
  if (!x.allFinite()) throw InvalidInput("covariates are not finite");
  const Index n = x.rows();
  Vector out(n);
  const Index blocks = (n + kEvalBlockRows - 1) / kEvalBlockRows;
  const Index m_total = model.iterations();
  const Index warmup = model.warmup();
  const double bound = model.bound();
  const Vector& steps = model.steps();
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t blk) {
    const Index begin = static_cast<Index>(blk) * kEvalBlockRows;
    const Index rows = std::min(kEvalBlockRows, n - begin);
    const Matrix ratio = ratio_from_factors(
        model.ratio(), ratio_x_factor(model.ratio(), x.middleRows(begin, rows)),
        model.anchor_factor());
    Vector values = Vector::Zero(rows);
    Vector average = Vector::Zero(rows);
    for (Index m = 1; m <= m_total; ++m) {
      values -= steps(m - 1) * ratio.col(m - 1);
      clamp_inplace(values, bound);
      if (m > warmup) average += values;
    }
    out.segment(begin, rows) = average / static_cast<double>(m_total - warmup);
  });
  return out;
}

PreliminaryEstimators fit_preliminary_estimators(const Dataset& data,
                                                 const KernelSAGDOptions& options) {
  return PreliminaryEstimators{fit_density_ratio(data, options.ratio),
                               fit_conditional_mean(data, options.mean),
                               fit_cme_operator(data, options.cme)};
}

}  // namespace sagdiv
