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

#include "sagdiv/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "sagdiv/error.hpp"
#include "sagdiv/loss.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {
namespace {

constexpr double kConfounderVariance = 1.0;
constexpr double kInstrumentHalfWidth = 3.0;

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double draw_logistic(Rng& rng, double scale) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = 0.0;
  do {
    u = unif(rng);
  } while (u <= 0.0 || u >= 1.0);
  return scale * std::log(u / (1.0 - u));
}

Matrix draw_instruments(Index count, Rng& rng) {
  std::uniform_real_distribution<double> unif(-kInstrumentHalfWidth, kInstrumentHalfWidth);
  Matrix z(count, 2);
  for (Index i = 0; i < count; ++i) {
    z(i, 0) = unif(rng);
    z(i, 1) = unif(rng);
  }
  return z;
}

class ContinuousOracle final : public ConditionalOracle {
 public:
  explicit ContinuousOracle(Response response) : response_(response) {}

  Index z_dim() const override { return 2; }
  Index x_dim() const override { return 1; }
  Matrix sample_z(Index count, Rng& rng) const override { return draw_instruments(count, rng); }
  Matrix sample_x_given_z(const Eigen::Ref<const Eigen::RowVectorXd>& z, Index count,
                          Rng& rng) const override {
    std::normal_distribution<double> eps(0.0, std::sqrt(kConfounderVariance));
    std::normal_distribution<double> gamma(0.0, std::sqrt(kSmallNoiseVariance));
    Matrix x(count, 1);
    for (Index i = 0; i < count; ++i) x(i, 0) = z(0) + eps(rng) + gamma(rng);
    return x;
  }
  double target(const Eigen::Ref<const Eigen::RowVectorXd>& z) const override {
    return continuous_conditional_mean(response_, z(0));
  }

 private:
  Response response_;
};

class BinaryOracle final : public ConditionalOracle {
 public:
  BinaryOracle(Response response, double beta) : response_(response), loss_(LossSpec::logistic_bce(beta)) {}

  Index z_dim() const override { return 2; }
  Index x_dim() const override { return 1; }
  Matrix sample_z(Index count, Rng& rng) const override { return draw_instruments(count, rng); }
  Matrix sample_x_given_z(const Eigen::Ref<const Eigen::RowVectorXd>& z, Index count,
                          Rng& rng) const override {
    std::normal_distribution<double> gamma(0.0, std::sqrt(kSmallNoiseVariance));
    Matrix x(count, 1);
    for (Index i = 0; i < count; ++i) x(i, 0) = z(0) + draw_logistic(rng, loss_.scale()) + gamma(rng);
    return x;
  }
  double target(const Eigen::Ref<const Eigen::RowVectorXd>& z) const override {
    return loss_.link(binary_conditional_mean(response_, z(0), loss_.scale()));
  }

 private:
  Response response_;
  LossSpec loss_;
};

struct Triples {
  Matrix x;
  Matrix z;
  Vector y;
};

Triples draw_continuous(Response response, Index count, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> eps(0.0, std::sqrt(kConfounderVariance));
  std::normal_distribution<double> small(0.0, std::sqrt(kSmallNoiseVariance));
  Triples t{Matrix(count, 1), draw_instruments(count, rng), Vector(count)};
  for (Index i = 0; i < count; ++i) {
    const double e = eps(rng);
    const double gamma = small(rng);
    const double delta = small(rng);
    t.x(i, 0) = t.z(i, 0) + e + gamma;
    t.y(i) = structural(response, t.x(i, 0)) + e + delta;
  }
  return t;
}

Triples draw_binary(Response response, double beta, Index count, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> small(0.0, std::sqrt(kSmallNoiseVariance));
  Triples t{Matrix(count, 1), draw_instruments(count, rng), Vector(count)};
  for (Index i = 0; i < count; ++i) {
    const double eta = draw_logistic(rng, beta);
    const double gamma = small(rng);
    t.x(i, 0) = t.z(i, 0) + eta + gamma;
    t.y(i) = binary_conditional_mean(response, t.z(i, 0), beta) + eta > 0.0 ? 1.0 : 0.0;
  }
  return t;
}

template <typename Draw>
GeneratedData assemble(const ScenarioSpec& spec, Draw&& draw) {
  const auto& sizes = spec.sizes;
  if (sizes.estimator < 1 || sizes.stream < 1 || sizes.baseline < 1 || sizes.test < 1) {
    throw InvalidInput("scenario sample sizes must be positive");
  }
  if (sizes.raw_estimator > sizes.estimator || sizes.raw_stream > sizes.stream) {
    throw InvalidInput("raw-outcome sizes must not exceed the estimator and stream blocks");
  }
  Triples est = draw(sizes.estimator, derive_seed(spec.seed, "estimator"));
  Triples stream = draw(sizes.stream, derive_seed(spec.seed, "stream"));
  Triples base = draw(sizes.baseline, derive_seed(spec.seed, "baseline"));
  Triples test = draw(sizes.test, derive_seed(spec.seed, "test"));
  Vector truth(sizes.test);
  for (Index i = 0; i < sizes.test; ++i) truth(i) = structural(spec.response, test.x(i, 0));
  return GeneratedData{Dataset(std::move(est.x), std::move(est.z), std::move(est.y)),
                       std::move(stream.z),
                       std::move(stream.y),
                       Dataset(std::move(base.x), std::move(base.z), std::move(base.y)),
                       std::move(test.x),
                       std::move(truth),
                       make_oracle(spec)};
}

}  // namespace

std::string_view to_string(OutcomeKind kind) {
  return kind == OutcomeKind::Continuous ? "continuous" : "binary";
}

std::string_view to_string(Response response) {
  switch (response) {
    case Response::Step: return "step";
    case Response::Abs: return "abs";
    case Response::Linear: return "linear";
    case Response::Sin: return "sin";
  }
  return "?";
}

OutcomeKind parse_outcome(std::string_view name) {
  if (name == "continuous") return OutcomeKind::Continuous;
  if (name == "binary") return OutcomeKind::Binary;
  throw InvalidInput("unknown outcome kind '" + std::string(name) + "'");
}

Response parse_response(std::string_view name) {
  if (name == "step") return Response::Step;
  if (name == "abs") return Response::Abs;
  if (name == "linear") return Response::Linear;
  if (name == "sin") return Response::Sin;
  throw InvalidInput("unknown response '" + std::string(name) + "'");
}

double structural(Response response, double x) {
  switch (response) {
    case Response::Step: return x > 0.0 ? 1.0 : 0.0;
    case Response::Abs: return std::abs(x);
    case Response::Linear: return x;
    case Response::Sin: return std::sin(x);
  }
  return 0.0;
}

SampleSizes SampleSizes::from_budget(Index total, Index stream_ratio, Index test) {
  if (total < 3 + stream_ratio || stream_ratio < 0) throw InvalidInput("budget too small");
  SampleSizes s;
  s.estimator = total / (3 + stream_ratio);
  s.stream = stream_ratio * s.estimator;
  s.baseline = total / 3;
  s.raw_estimator = total / (3 + 2 * stream_ratio);
  s.raw_stream = std::min((total - 3 * s.raw_estimator) / 2, s.stream);
  s.test = test;
  return s;
}

std::string ScenarioSpec::name() const {
  return std::string(to_string(outcome)) + "/" + std::string(to_string(response));
}

double continuous_conditional_mean(Response response, double z1) {
  const double var = kConfounderVariance + kSmallNoiseVariance;
  const double sd = std::sqrt(var);
  switch (response) {
    case Response::Linear: return z1;
    case Response::Sin: return std::sin(z1) * std::exp(-var / 2.0);
    case Response::Step: return normal_cdf(z1 / sd);
    case Response::Abs:
      return sd * std::sqrt(2.0 / std::numbers::pi) * std::exp(-z1 * z1 / (2.0 * var)) +
             z1 * std::erf(z1 / (sd * std::numbers::sqrt2));
  }
  return 0.0;
}

double gauss_hermite_expectation(const std::function<double(double)>& f, double mean, double sd,
                                 int order) {
  if (order < 1) throw InvalidInput("Gauss-Hermite order must be positive");
  // Golub-Welsch on the Jacobi matrix of the physicists' Hermite polynomials.
  Matrix jacobi = Matrix::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  double total = 0.0;
  for (int i = 0; i < order; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    // Weights sum to sqrt(pi); the expectation divides it back out.
    total += v0 * v0 * f(mean + std::numbers::sqrt2 * sd * eig.eigenvalues()(i));
  }
  return total;
}

double continuous_conditional_mean_quadrature(Response response, double z1) {
  const double sd = std::sqrt(kConfounderVariance + kSmallNoiseVariance);
  const auto h = [response](double x) { return structural(response, x); };
  if (response == Response::Linear || response == Response::Sin) {
    return gauss_hermite_expectation(h, z1, sd, 64);
  }
  using boost::math::quadrature::gauss_kronrod;
  const auto integrand = [&](double xi) {
    return h(z1 + xi) * std::exp(-xi * xi / (2.0 * sd * sd)) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  // The kink of h(z1 + xi) sits at xi = -z1.
  const double inf = std::numeric_limits<double>::infinity();
  return gauss_kronrod<double, 61>::integrate(integrand, -inf, -z1, 15, 1e-13) +
         gauss_kronrod<double, 61>::integrate(integrand, -z1, inf, 15, 1e-13);
}

double binary_sin_coefficient(double beta) {
  const double bp = beta * std::numbers::pi;
  return bp * std::exp(-kSmallNoiseVariance / 2.0) / std::sinh(bp);
}

double binary_conditional_mean(Response response, double z1, double beta) {
  switch (response) {
    case Response::Linear: return z1;
    case Response::Sin: return binary_sin_coefficient(beta) * std::sin(z1);
    default:
      throw UnsupportedScenario("binary outcomes support only the linear and sin responses");
  }
}

std::shared_ptr<const ConditionalOracle> make_oracle(const ScenarioSpec& spec) {
  if (spec.outcome == OutcomeKind::Continuous) return std::make_shared<ContinuousOracle>(spec.response);
  if (spec.response != Response::Linear && spec.response != Response::Sin) {
    throw UnsupportedScenario("binary outcomes support only the linear and sin responses");
  }
  return std::make_shared<BinaryOracle>(spec.response, spec.beta);
}

GeneratedData gen_continuous(const ScenarioSpec& spec) {
  return assemble(spec, [&](Index count, std::uint64_t seed) {
    return draw_continuous(spec.response, count, seed);
  });
}

GeneratedData gen_binary(const ScenarioSpec& spec) {
  if (spec.response != Response::Linear && spec.response != Response::Sin) {
    throw UnsupportedScenario("binary outcomes support only the linear and sin responses");
  }
  if (!(spec.beta > 0.0)) throw InvalidInput("logistic scale must be positive");
  return assemble(spec, [&](Index count, std::uint64_t seed) {
    return draw_binary(spec.response, spec.beta, count, seed);
  });
}

GeneratedData generate(const ScenarioSpec& spec) {
  return spec.outcome == OutcomeKind::Continuous ? gen_continuous(spec) : gen_binary(spec);
}

MSE mse_vs_truth(const Vector& predictions, const Vector& truth) {
  if (predictions.size() != truth.size()) throw InvalidInput("prediction and truth lengths differ");
  if (truth.size() == 0) throw InvalidInput("empty test set");
  const double mse = (predictions - truth).squaredNorm() / static_cast<double>(truth.size());
  return MSE{mse, std::log10(mse)};
}

}  // namespace sagdiv
