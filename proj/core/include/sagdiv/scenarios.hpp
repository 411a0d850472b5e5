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
#include <memory>
#include <string>
#include <string_view>

#include "sagdiv/risk.hpp"
#include "sagdiv/types.hpp"

namespace sagdiv {

enum class OutcomeKind { Continuous, Binary };
enum class Response { Step, Abs, Linear, Sin };

std::string_view to_string(OutcomeKind kind);
std::string_view to_string(Response response);
OutcomeKind parse_outcome(std::string_view name);
Response parse_response(std::string_view name);

/// The structural function h*.
double structural(Response response, double x);

/// Sample counts derived from a total budget of random-variable samples, where a
/// (X, Z, Y) triple counts as three and an instrument draw as one.
struct SampleSizes {
  Index estimator = 600;  // N triples for the preliminary estimators
  Index stream = 1200;    // M instrument draws for the gradient loop
  Index baseline = 1000;  // triples for single-dataset methods
  Index test = 1000;
  /// The raw-outcome variant spends two samples (z, y) per stream step, so at
  /// equal budget it gets fewer triples and steps. Both are prefixes of the
  /// estimator and stream blocks.
  Index raw_estimator = 428;
  Index raw_stream = 858;

  /// N = total / (3 + ratio), M = ratio * N, baseline = total / 3;
  /// raw-outcome N = total / (3 + 2 ratio), M = (total - 3N) / 2.
  static SampleSizes from_budget(Index total, Index stream_ratio = 2, Index test = 1000);
  Index sagd_budget() const noexcept { return 3 * estimator + stream; }
  Index raw_y_budget() const noexcept { return 3 * raw_estimator + 2 * raw_stream; }
  Index baseline_budget() const noexcept { return 3 * baseline; }
};

inline constexpr Index kPaperBudget = 3000;
inline constexpr Index kHalfBudget = 1500;

struct ScenarioSpec {
  OutcomeKind outcome = OutcomeKind::Continuous;
  Response response = Response::Linear;
  SampleSizes sizes{};
  /// Logistic scale of the binary noise.
  double beta = 0.31622776601683794;  // sqrt(0.1)
  std::uint64_t seed = 0;

  std::string name() const;
};

/// Variance of the gamma and delta noise terms.
inline constexpr double kSmallNoiseVariance = 0.1;

/// Everything one repetition needs: estimator triples, the instrument stream
/// (with its outcomes, used only by the RawY ablation), baseline triples, test
/// covariates with h* values and the ground-truth oracle.
struct GeneratedData {
  Dataset estimator_data;
  Matrix z_stream;
  Vector y_stream;
  Dataset baseline_data;
  Matrix test_x;
  Vector test_truth;
  std::shared_ptr<const ConditionalOracle> oracle;
};

/// Y = h*(X) + eps + delta, X = Z1 + eps + gamma, Z ~ U([-3, 3]^2),
/// eps ~ N(0, 1), gamma, delta ~ N(0, 0.1).
GeneratedData gen_continuous(const ScenarioSpec& spec);

/// Y = 1{E[h*(X) | Z] + eta > 0}, X = Z1 + eta + gamma, eta ~ Logistic(0, beta).
/// Only the linear and sin responses are supported.
GeneratedData gen_binary(const ScenarioSpec& spec);

GeneratedData generate(const ScenarioSpec& spec);

/// Oracle for either outcome model; exposed for tests and risk evaluation.
std::shared_ptr<const ConditionalOracle> make_oracle(const ScenarioSpec& spec);

/// E[h*(z1 + xi)] for xi ~ N(0, 1 + 0.1): the continuous-model r(z).
double continuous_conditional_mean(Response response, double z1);

/// Same quantity by numerical quadrature: Gauss-Hermite for the smooth
/// responses, Gauss-Kronrod split at the kink for step and abs.
double continuous_conditional_mean_quadrature(Response response, double z1);

/// E[cos(eta)] E[cos(gamma)] = beta pi e^{-0.05} / sinh(beta pi), so that
/// E[sin X | Z = z] = coefficient * sin(z1) in the binary model.
double binary_sin_coefficient(double beta);

/// E[h*(X) | Z = z] in the binary model.
double binary_conditional_mean(Response response, double z1, double beta);

/// Expectation of f(mean + sd * N(0,1)) with an order-`order` Gauss-Hermite rule.
double gauss_hermite_expectation(const std::function<double(double)>& f, double mean,
                                 double sd, int order = 64);

struct MSE {
  double mse = 0.0;
  double log10_mse = 0.0;
};

MSE mse_vs_truth(const Vector& predictions, const Vector& truth);

}  // namespace sagdiv
