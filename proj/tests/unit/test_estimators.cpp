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


#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "sagdiv/cme.hpp"
#include "sagdiv/conditional_mean.hpp"
#include "sagdiv/density_ratio.hpp"
#include "sagdiv/error.hpp"
#include "sagdiv/ridge.hpp"
#include "sagdiv/rng.hpp"
#include "sagdiv/scenarios.hpp"
#include "support.hpp"

namespace sagdiv {
namespace {

using testing::normal_matrix;
using testing::normal_vector;
using testing::uniform_matrix;

Dataset independent_blocks(Index n, std::uint64_t seed) {
  return Dataset(normal_matrix(n, 1, seed), normal_matrix(n, 2, seed + 1), normal_vector(n, seed + 2));
}

GeneratedData linear_data(Index n, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.response = Response::Linear;
  spec.sizes.estimator = n;
  spec.sizes.stream = 10;
  spec.sizes.baseline = 10;
  spec.sizes.raw_estimator = 10;
  spec.sizes.raw_stream = 10;
  spec.sizes.test = 10;
  spec.seed = seed;
  return gen_continuous(spec);
}

// Density ratio ------------------------------------------------------------

TEST(DensityRatio, IndependentBlocksGiveUnitRatio) {
  const auto model = fit_density_ratio(independent_blocks(2000, 10), DensityRatioOptions{});
  // Fresh product-of-marginals draws.
  const Matrix x = normal_matrix(2000, 1, 90);
  const Matrix z = normal_matrix(2000, 2, 91);
  double total = 0.0;
  for (Index i = 0; i < 2000; ++i) total += eval_density_ratio(model, x.row(i), z.row(i));
  const double mean = total / 2000.0;
  EXPECT_GE(mean, 0.85);
  EXPECT_LE(mean, 1.15);
}

TEST(DensityRatio, IndependentBlocksWithSpecPairing) {
  DensityRatioOptions opts;
  opts.denominator = DenominatorPairs::Derangement;
  opts.clamp_negative_weights = true;
  const auto model = fit_density_ratio(independent_blocks(2000, 20), opts);
  EXPECT_TRUE((model.weights.array() >= 0.0).all());
  const Matrix x = normal_matrix(2000, 1, 92);
  const Matrix z = normal_matrix(2000, 2, 93);
  double total = 0.0;
  for (Index i = 0; i < 2000; ++i) total += eval_density_ratio(model, x.row(i), z.row(i));
  EXPECT_GE(total / 2000.0, 0.85);
  EXPECT_LE(total / 2000.0, 1.15);
}

TEST(DensityRatio, PerfectDependenceMatchesPopulationFit) {
  const Index n = 400;
  Matrix x(n, 1);
  for (Index i = 0; i < n; ++i) x(i, 0) = static_cast<double>(i % 2);
  const Dataset data(x, x, Vector::Zero(n));
  const auto model = fit_density_ratio(data, DensityRatioOptions{});
  const Eigen::RowVectorXd zero{{0.0}};
  const Eigen::RowVectorXd one{{1.0}};
  const double matched = std::min(eval_density_ratio(model, zero, zero), eval_density_ratio(model, one, one));
  const double mismatched =
      std::max(eval_density_ratio(model, zero, one), eval_density_ratio(model, one, zero));
  EXPECT_GT(matched, mismatched);
  // The true ratio is 2 on the diagonal and 0 off it, but every basis function
  // is centred on (0,0) or (1,1) and the standardized gap is 2. With per-block
  // overlap a = k(2), the symmetric least-squares fit of the ratio under the
  // product measure has weight w = 2(1+a^2) / ((1+a^2)^2 + 4a^2), giving
  // (1+a^2) w on the diagonal and 2aw off it.
  ASSERT_DOUBLE_EQ(model.x_block.kernel.lengthscale(), model.z_block.kernel.lengthscale());
  const double l = model.x_block.kernel.lengthscale();
  const double a = std::exp(-4.0 / (2.0 * l * l));
  const double w = 2.0 * (1.0 + a * a) / ((1.0 + a * a) * (1.0 + a * a) + 4.0 * a * a);
  EXPECT_NEAR(matched, (1.0 + a * a) * w, 0.02);
  EXPECT_NEAR(mismatched, 2.0 * a * w, 0.02);
}

TEST(DensityRatio, EvaluationsRespectCap) {
  const auto gen = linear_data(400, 3);
  DensityRatioOptions opts;
  opts.cap = 1.5;
  const auto model = fit_density_ratio(gen.estimator_data, opts);
  const Matrix x = normal_matrix(300, 1, 4) * 3.0;
  const Matrix z = uniform_matrix(300, 2, -4.0, 4.0, 5);
  const Matrix table = density_ratio_table(model, x, z);
  EXPECT_GE(table.minCoeff(), 0.0);
  EXPECT_LE(table.maxCoeff(), 1.5);
  EXPECT_EQ(table.maxCoeff(), 1.5);
}

TEST(DensityRatio, ZeroWeightsEvaluateToZero) {
  auto model = testing::toy_ratio(6, 1, 2, 1);
  model.weights.setZero();
  EXPECT_EQ(eval_density_ratio(model, Eigen::RowVectorXd{{0.2}}, Eigen::RowVectorXd{{1.0, -1.0}}), 0.0);
}

TEST(DensityRatio, SingleCenterAtQuery) {
  DensityRatioModel model;
  model.x_block = testing::identity_block(1, 1.0);
  model.z_block = testing::identity_block(2, 1.0);
  model.centers_x = Matrix{{0.4}};
  model.centers_z = Matrix{{-0.3, 0.9}};
  model.weights = Vector::Ones(1);
  model.cap = 10.0;
  EXPECT_EQ(eval_density_ratio(model, model.centers_x.row(0), model.centers_z.row(0)), 1.0);
}

TEST(DensityRatio, MatchesScalarLoop) {
  auto model = testing::toy_ratio(30, 2, 2, 7);
  model.x_block.standardizer = Standardizer(Vector{{0.3, -0.1}}, Vector{{1.5, 0.7}});
  const Matrix x = normal_matrix(40, 2, 8);
  const Matrix z = normal_matrix(40, 2, 9);
  const Matrix table = density_ratio_table(model, x, z);
  for (Index i = 0; i < 40; ++i) {
    const double oracle = testing::ratio_oracle(model, x.row(i), z.row(i));
    EXPECT_NEAR(eval_density_ratio(model, x.row(i), z.row(i)), oracle, 1e-12);
    for (Index j = 0; j < 40; j += 7) {
      EXPECT_NEAR(table(i, j), testing::ratio_oracle(model, x.row(i), z.row(j)), 1e-12);
    }
  }
}

TEST(DensityRatio, AllPairsMomentMatchesExplicitSum) {
  // With lambda fixed, the closed-form denominator must equal the explicit
  // average over i != j; check through the fitted weights.
  const Index n = 40;
  const Dataset data = independent_blocks(n, 30);
  DensityRatioOptions opts;
  opts.basis = 8;
  const double lambda = 1e-2;
  const auto model = fit_density_ratio(data, lambda, opts);
  const Matrix kx = model.x_block.gram(data.x(), model.centers_x);
  const Matrix kz = model.z_block.gram(data.z(), model.centers_z);
  Matrix h = Matrix::Zero(8, 8);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vector psi = kx.row(i).cwiseProduct(kz.row(j)).transpose();
      h += psi * psi.transpose();
    }
  }
  h /= static_cast<double>(n * (n - 1));
  const Vector hv = kx.cwiseProduct(kz).colwise().mean().transpose();
  h.diagonal().array() += lambda + kGramJitter;
  const Vector w = h.fullPivLu().solve(hv);
  EXPECT_LE((w - model.weights).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + w.cwiseAbs().maxCoeff()));
}

TEST(DensityRatio, RejectsBasisLargerThanSample) {
  DensityRatioOptions opts;
  opts.basis = 50;
  EXPECT_THROW(fit_density_ratio(independent_blocks(20, 1), 1e-3, opts), InvalidInput);
}

TEST(DensityRatio, Deterministic) {
  const Dataset data = independent_blocks(300, 40);
  DensityRatioOptions opts;
  opts.seed = 99;
  const auto a = fit_density_ratio(data, opts);
  const auto b = fit_density_ratio(data, opts);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.centers_x, b.centers_x);
  EXPECT_EQ(a.lambda, b.lambda);
}

// Conditional mean ---------------------------------------------------------

TEST(ConditionalMean, RecoversConstant) {
  const Index n = 300;
  const Matrix z = uniform_matrix(n, 2, -3.0, 3.0, 1);
  const Dataset data(normal_matrix(n, 1, 2), z, Vector::Constant(n, 2.75));
  ConditionalMeanOptions opts;
  opts.search.initial = {1e1, 1e-1, 1e-3, 1e-5, 1e-7, 1e-9};
  const auto model = fit_conditional_mean(data, opts);
  const Vector pred = model.predict(uniform_matrix(200, 2, -2.5, 2.5, 3));
  EXPECT_LE((pred.array() - 2.75).abs().maxCoeff(), 1e-3);
}

TEST(ConditionalMean, RawYMarker) {
  ConditionalMeanOptions opts;
  opts.raw_y = true;
  const auto model = fit_conditional_mean(independent_blocks(5, 1), opts);
  EXPECT_TRUE(model.is_raw_y());
  EXPECT_THROW(model.predict(Matrix::Zero(1, 2)), InvalidInput);
}

TEST(ConditionalMean, LinearScenarioNearBestRegularization) {
  // E[Y | Z] = z1 here, but Var(Y | Z) = 4.2, so even the best fixed lambda
  // leaves an RMSE around 0.13-0.22 at n = 1000. The cross-validated choice
  // should land close to that floor.
  const auto gen = linear_data(1000, 11);
  ConditionalMeanOptions opts;
  opts.seed = 5;
  const auto model = fit_conditional_mean(gen.estimator_data, opts);
  Rng rng(12);
  const Matrix z = gen.oracle->sample_z(2000, rng);
  const auto rmse = [&](const Vector& pred) { return std::sqrt((pred - z.col(0)).squaredNorm() / 2000.0); };
  const double chosen = rmse(model.predict(z));
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2}) {
    const auto fixed = fit_ridge_model(gen.estimator_data.z(), gen.estimator_data.y(), lambda);
    best = std::min(best, rmse(predict_ridge(fixed, z)));
  }
  EXPECT_LE(chosen, 1.15 * best);
  EXPECT_LE(chosen, 0.25);
}

TEST(ConditionalMean, RangeClipsPredictions) {
  const auto gen = linear_data(200, 13);
  ConditionalMeanOptions opts;
  opts.range = std::pair{-0.5, 0.5};
  const auto model = fit_conditional_mean(gen.estimator_data, opts);
  const Vector pred = model.predict(uniform_matrix(100, 2, -3.0, 3.0, 4));
  EXPECT_GE(pred.minCoeff(), -0.5);
  EXPECT_LE(pred.maxCoeff(), 0.5);
}

// Conditional expectation operator ----------------------------------------

CMEOperatorModel small_operator(Index n, std::uint64_t seed, std::optional<double> lambda) {
  const auto gen = linear_data(n, seed);
  CMEOptions opts;
  opts.seed = seed;
  opts.lambda = lambda;
  return fit_cme_operator(gen.estimator_data, opts);
}

TEST(Operator, ZeroValues) {
  const auto op = small_operator(50, 1, 1e-3);
  EXPECT_EQ(apply_cme(op, Vector::Zero(50), Eigen::RowVectorXd{{0.1, 0.2}}), 0.0);
}

TEST(Operator, OneHotGivesWeight) {
  const auto op = small_operator(50, 2, 1e-3);
  const Eigen::RowVectorXd z{{0.4, -1.0}};
  const Vector gamma = op.weights(z);
  for (Index i : {0, 17, 49}) {
    EXPECT_DOUBLE_EQ(apply_cme(op, Vector::Unit(50, i), z), gamma(i));
  }
}

TEST(Operator, MatchesDenseSolve) {
  const auto op = small_operator(80, 3, 2e-3);
  const Matrix kzz = op.z_block().gram(op.train_z(), op.train_z());
  Matrix a = kzz;
  a.diagonal().array() += 80.0 * 2e-3 + kGramJitter;
  const Vector h = normal_vector(80, 4);
  const Matrix queries = uniform_matrix(10, 2, -3.0, 3.0, 5);
  for (Index q = 0; q < 10; ++q) {
    const Vector k = op.z_block().gram(op.train_z(), Matrix(queries.row(q)));
    const Vector gamma = a.fullPivLu().solve(k);
    EXPECT_NEAR(apply_cme(op, h, queries.row(q)), gamma.dot(h), 1e-10);
  }
}

TEST(Operator, Linear) {
  const auto op = small_operator(200, 4, std::nullopt);
  const Vector h = normal_vector(200, 6);
  const Vector g = normal_vector(200, 7);
  const Matrix queries = uniform_matrix(25, 2, -3.0, 3.0, 8);
  for (Index q = 0; q < 25; ++q) {
    const auto z = queries.row(q);
    EXPECT_NEAR(apply_cme(op, 2.0 * h + g, z), 2.0 * apply_cme(op, h, z) + apply_cme(op, g, z), 1e-10);
    EXPECT_NEAR(apply_cme(op, -3.5 * h, z), -3.5 * apply_cme(op, h, z), 1e-10);
  }
}

TEST(Operator, WeightsSumToAboutOne) {
  const auto op = small_operator(500, 5, 1e-5);
  const Matrix queries = uniform_matrix(50, 2, -2.5, 2.5, 9);
  const Vector ones = Vector::Ones(500);
  for (Index q = 0; q < 50; ++q) EXPECT_NEAR(apply_cme(op, ones, queries.row(q)), 1.0, 0.1);
}

TEST(Operator, LinearScenarioConditionalMean) {
  const auto op = small_operator(1000, 6, std::nullopt);
  const Vector h = op.train_x().col(0);
  const Matrix queries = uniform_matrix(1000, 2, -3.0, 3.0, 10);
  const Matrix gamma = op.batch_weights(queries);
  const Vector est = gamma.transpose() * h;
  const double rmse = std::sqrt((est - queries.col(0)).squaredNorm() / 1000.0);
  EXPECT_LE(rmse, 0.2);
}

TEST(Operator, LengthMismatch) {
  const auto op = small_operator(30, 7, 1e-3);
  EXPECT_THROW(apply_cme(op, Vector::Zero(29), Eigen::RowVectorXd{{0.0, 0.0}}), InvalidInput);
}

TEST(Operator, ValidationLossMatchesDirectEvaluation) {
  const auto gen = linear_data(60, 8);
  const Matrix& x = gen.estimator_data.x();
  const Matrix& z = gen.estimator_data.z();
  const auto zb = KernelBlock::fit(z);
  const auto xb = KernelBlock::fit(x);
  const Matrix tx = x.topRows(40), tz = z.topRows(40), vx = x.bottomRows(20), vz = z.bottomRows(20);
  const CMEValidationLoss loss(zb, xb, tx, tz, vx, vz);
  for (double lambda : {1e-1, 1e-3, 1e-5}) {
    Matrix a = zb.gram(tz, tz);
    a.diagonal().array() += 40.0 * lambda + kGramJitter;
    const Matrix g = a.fullPivLu().solve(zb.gram(tz, vz));
    const double direct = (xb.gram(vx, vx) - 2.0 * xb.gram(vx, tx) * g +
                           g.transpose() * xb.gram(tx, tx) * g).trace() / 20.0;
    EXPECT_NEAR(loss(lambda), direct, 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST(Operator, FitIsDeterministic) {
  const auto a = small_operator(150, 9, std::nullopt);
  const auto b = small_operator(150, 9, std::nullopt);
  EXPECT_EQ(a.lambda(), b.lambda());
  EXPECT_EQ(a.weights(Eigen::RowVectorXd{{0.3, 0.3}}), b.weights(Eigen::RowVectorXd{{0.3, 0.3}}));
}

}  // namespace
}  // namespace sagdiv
