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

#include "sagdiv/density_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "sagdiv/error.hpp"
#include "sagdiv/ridge.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {
namespace {

// Per-sample basis features psi(x, z)_j = kx(x, cx_j) kz(z, cz_j) are products of
// the two blocks' Gram rows, so the numerator and denominator designs reuse them.
struct BasisFeatures {
  Matrix kx;  // n x b
  Matrix kz;  // n x b
};

struct Moments {
  Matrix h_mat;  // denominator second moment, b x b
  Vector h_vec;  // numerator mean, b
};

Moments moments(const BasisFeatures& f, std::span<const Index> rows, DenominatorPairs pairs,
                std::uint64_t seed) {
  const auto n = static_cast<Index>(rows.size());
  const Index b = f.kx.cols();
  Matrix kx(n, b);
  Matrix kz(n, b);
  for (Index i = 0; i < n; ++i) {
    kx.row(i) = f.kx.row(rows[static_cast<std::size_t>(i)]);
    kz.row(i) = f.kz.row(rows[static_cast<std::size_t>(i)]);
  }
  const Matrix numer = kx.cwiseProduct(kz);
  Moments m;
  m.h_vec = numer.colwise().mean().transpose();
  if (pairs == DenominatorPairs::AllPairs) {
    // sum over i != j of psi(x_i, z_j) psi(x_i, z_j)' = (Kx'Kx) .* (Kz'Kz) - P'P.
    m.h_mat = ((kx.transpose() * kx).cwiseProduct(kz.transpose() * kz) -
               numer.transpose() * numer) /
              (static_cast<double>(n) * static_cast<double>(n - 1));
  } else {
    const auto shuffle = derangement(n, seed);
    Matrix denom(n, b);
    for (Index i = 0; i < n; ++i) {
      denom.row(i) = kx.row(i).cwiseProduct(kz.row(shuffle[static_cast<std::size_t>(i)]));
    }
    m.h_mat = denom.transpose() * denom / static_cast<double>(n);
  }
  return m;
}

Vector solve_weights(const Moments& m, double lambda, bool clamp) {
  Matrix a = m.h_mat;
  a.diagonal().array() += lambda + kGramJitter;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("density-ratio system is singular");
  Vector w = llt.solve(m.h_vec);
  if (!w.allFinite()) throw NumericalError("density-ratio weights are not finite");
  if (clamp) w = w.cwiseMax(0.0);
  return w;
}

struct Setup {
  KernelBlock x_block;
  KernelBlock z_block;
  Matrix centers_x;
  Matrix centers_z;
  BasisFeatures features;
};

Setup prepare(const Dataset& data, const DensityRatioOptions& options) {
  const Index n = data.size();
  const Index b = options.basis.value_or(std::min<Index>(n, 200));
  if (b < 1) throw InvalidInput("density-ratio basis must have at least one center");
  if (n < b) {
    throw InvalidInput("density-ratio basis of " + std::to_string(b) + " centers exceeds " +
                       std::to_string(n) + " samples");
  }
  if (n < 2) throw InvalidInput("density-ratio fit needs at least two samples");
  if (!(options.cap > 0.0) || !std::isfinite(options.cap)) {
    throw InvalidInput("density-ratio cap must be positive and finite");
  }
  Setup s;
  s.x_block = KernelBlock::fit(data.x());
  s.z_block = KernelBlock::fit(data.z());
  const auto centers = subsample(n, b, derive_seed(options.seed, "centers"));
  s.centers_x = select_rows(data.x(), centers);
  s.centers_z = select_rows(data.z(), centers);
  s.features.kx = s.x_block.gram(data.x(), s.centers_x);
  s.features.kz = s.z_block.gram(data.z(), s.centers_z);
  return s;
}

DensityRatioModel assemble(Setup&& s, Vector weights, double lambda, double cap) {
  DensityRatioModel model;
  model.x_block = std::move(s.x_block);
  model.z_block = std::move(s.z_block);
  model.centers_x = std::move(s.centers_x);
  model.centers_z = std::move(s.centers_z);
  model.weights = std::move(weights);
  model.cap = cap;
  model.lambda = lambda;
  return model;
}

std::vector<Index> iota_rows(Index n) {
  std::vector<Index> rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  return rows;
}

}  // namespace

DensityRatioModel fit_density_ratio(const Dataset& data, double lambda,
                                    const DensityRatioOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("density-ratio lambda must be positive");
  Setup s = prepare(data, options);
  const auto rows = iota_rows(data.size());
  const Vector w = solve_weights(
      moments(s.features, rows, options.denominator, derive_seed(options.seed, "denominator")),
      lambda, options.clamp_negative_weights);
  return assemble(std::move(s), w, lambda, options.cap);
}

DensityRatioModel fit_density_ratio(const Dataset& data, const DensityRatioOptions& options) {
  Setup s = prepare(data, options);
  const Index n = data.size();
  const auto held_out = static_cast<Index>(std::round(options.validation_fraction * static_cast<double>(n)));
  if (held_out < 2 || n - held_out < 2) throw InvalidInput("too few samples to validate the density ratio");
  const auto perm = permutation(n, derive_seed(options.seed, "split"));
  std::vector<Index> val(perm.begin(), perm.begin() + held_out);
  std::vector<Index> train(perm.begin() + held_out, perm.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());

  const Moments fit_m =
      moments(s.features, train, options.denominator, derive_seed(options.seed, "denominator-train"));
  const Moments val_m =
      moments(s.features, val, options.denominator, derive_seed(options.seed, "denominator-val"));
  const auto criterion = [&](double lambda) {
    const Vector w = solve_weights(fit_m, lambda, options.clamp_negative_weights);
    return 0.5 * w.dot(val_m.h_mat * w) - val_m.h_vec.dot(w);
  };
  const double lambda = refine_reg_search(criterion, options.search);

  const auto rows = iota_rows(n);
  const Vector w = solve_weights(
      moments(s.features, rows, options.denominator, derive_seed(options.seed, "denominator")),
      lambda, options.clamp_negative_weights);
  return assemble(std::move(s), w, lambda, options.cap);
}

double eval_density_ratio(const DensityRatioModel& model,
                          const Eigen::Ref<const Eigen::RowVectorXd>& x,
                          const Eigen::Ref<const Eigen::RowVectorXd>& z) {
  if (!x.allFinite() || !z.allFinite()) throw InvalidInput("density-ratio query is not finite");
  const Matrix kx = model.x_block.gram(Matrix(x), model.centers_x);
  const Matrix kz = model.z_block.gram(Matrix(z), model.centers_z);
  const double value = (kx.array() * kz.array()).matrix().row(0).dot(model.weights);
  return std::clamp(value, 0.0, model.cap);
}

Matrix ratio_x_factor(const DensityRatioModel& model, const Matrix& x) {
  return model.x_block.gram(x, model.centers_x);
}

Matrix ratio_z_factor(const DensityRatioModel& model, const Matrix& z) {
  return model.weights.asDiagonal() * model.z_block.gram(z, model.centers_z).transpose();
}

Matrix ratio_from_factors(const DensityRatioModel& model, const Matrix& x_factor,
                          const Matrix& z_factor) {
  return (x_factor * z_factor).cwiseMax(0.0).cwiseMin(model.cap);
}

Matrix density_ratio_table(const DensityRatioModel& model, const Matrix& x, const Matrix& z) {
  return ratio_from_factors(model, ratio_x_factor(model, x), ratio_z_factor(model, z));
}

}  // namespace sagdiv
