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

#include "sagdiv/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sagdiv/error.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {

KernelSpec::KernelSpec(double lengthscale) : lengthscale_(lengthscale) {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw InvalidInput("kernel lengthscale must be positive and finite");
  }
}

double KernelSpec::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& u,
                              const Eigen::Ref<const Eigen::RowVectorXd>& v) const {
  return std::exp(-(u - v).squaredNorm() / (2.0 * lengthscale_ * lengthscale_));
}

Standardizer::Standardizer(Vector mean, Vector scale) : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size()) throw InvalidInput("standardizer size mismatch");
  if ((scale_.array() <= 0.0).any()) throw InvalidInput("standardizer scale must be positive");
}

Standardizer Standardizer::fit(const Matrix& data) {
  if (data.rows() < 1) throw InvalidInput("cannot standardize an empty matrix");
  Vector mean = data.colwise().mean().transpose();
  Vector scale(data.cols());
  for (Index j = 0; j < data.cols(); ++j) {
    const double var = (data.col(j).array() - mean(j)).square().mean();
    scale(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return Standardizer(std::move(mean), std::move(scale));
}

Matrix Standardizer::apply(const Matrix& data) const {
  if (data.cols() != mean_.size()) {
    throw InvalidInput("standardizer expects " + std::to_string(mean_.size()) + " columns, got " +
                       std::to_string(data.cols()));
  }
  return ((data.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array())
      .matrix();
}

Matrix squared_distances(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw InvalidInput("column mismatch: " + std::to_string(a.cols()) + " vs " +
                       std::to_string(b.cols()));
  }
  Matrix d = Matrix::Zero(a.rows(), b.rows());
  for (Index k = 0; k < a.cols(); ++k) {
    d.array() += (a.col(k).replicate(1, b.rows()) - b.col(k).transpose().replicate(a.rows(), 1))
                     .array()
                     .square();
  }
  return d;
}

Matrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
  const double scale = -1.0 / (2.0 * spec.lengthscale() * spec.lengthscale());
  return (squared_distances(a, b).array() * scale).exp().matrix();
}

double median_heuristic(const Matrix& points) {
  if (points.rows() < 2) throw InvalidInput("median heuristic needs at least two points");
  if (!points.allFinite()) throw InvalidInput("median heuristic input is not finite");
  Matrix sample;
  if (points.rows() > kMedianHeuristicMaxRows) {
    sample = select_rows(points, subsample(points.rows(), kMedianHeuristicMaxRows,
                                           kMedianHeuristicSeed));
  } else {
    sample = points;
  }
  const Index n = sample.rows();
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) dist.push_back((sample.row(i) - sample.row(j)).norm());
  }
  const auto median_of = [](std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
  };
  double med = median_of(dist);
  if (med > 0.0) return med;
  // Mostly duplicated rows: fall back to the median over distinct pairs.
  std::erase_if(dist, [](double d) { return d <= 0.0; });
  if (dist.empty()) throw DegenerateData("median heuristic: all points are identical");
  return median_of(dist);
}

KernelBlock KernelBlock::fit(const Matrix& data) {
  KernelBlock block;
  block.standardizer = Standardizer::fit(data);
  block.kernel = KernelSpec(median_heuristic(block.standardizer.apply(data)));
  return block;
}

Matrix KernelBlock::gram(const Matrix& a, const Matrix& b) const {
  return sagdiv::gram(kernel, standardizer.apply(a), standardizer.apply(b));
}

}  // namespace sagdiv
