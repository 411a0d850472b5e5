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

#include <gtest/gtest.h>

#include "sagdiv/error.hpp"
#include "sagdiv/risk.hpp"
#include "sagdiv/scenarios.hpp"

namespace sagdiv {
namespace {

std::shared_ptr<const ConditionalOracle> oracle_for(OutcomeKind outcome, Response response) {
  ScenarioSpec spec;
  spec.outcome = outcome;
  spec.response = response;
  return make_oracle(spec);
}

Vector zero_function(const Matrix& x) { return Vector::Zero(x.rows()); }

BatchFunction truth(Response response) {
  return [response](const Matrix& x) {
    Vector out(x.rows());
    for (Index i = 0; i < x.rows(); ++i) out(i) = structural(response, x(i, 0));
    return out;
  };
}

TEST(Risk, ZeroFunctionOnLinearScenario) {
  const auto oracle = oracle_for(OutcomeKind::Continuous, Response::Linear);
  const auto r = mc_projected_risk(zero_function, *oracle, LossSpec::quadratic(), 20000, 1, 1);
  // 0.5 E[Z1^2] with Z1 ~ U(-3, 3).
  EXPECT_NEAR(r.value, 1.5, 3.0 * r.std_error);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_EQ(r.samples, 20000);
}

TEST(Risk, TruthOnLinearScenarioIsNestedBiasOnly) {
  const auto oracle = oracle_for(OutcomeKind::Continuous, Response::Linear);
  const Index inner = 4000;
  const auto r = mc_projected_risk(truth(Response::Linear), *oracle, LossSpec::quadratic(), 400,
                                   inner, 2);
  // The inner mean has variance Var(X | Z) / inner = 1.1 / inner, so the
  // expected estimate is half of that.
  const double bias = 0.5 * 1.1 / static_cast<double>(inner);
  EXPECT_LE(std::abs(r.value - bias), 3.0 * r.std_error + 1e-12);
  EXPECT_LT(r.value, 1e-3);
}

TEST(Risk, TruthBeatsZeroForEveryResponse) {
  for (Response resp : {Response::Step, Response::Abs, Response::Linear, Response::Sin}) {
    const auto oracle = oracle_for(OutcomeKind::Continuous, resp);
    const auto at_truth =
        mc_projected_risk(truth(resp), *oracle, LossSpec::quadratic(), 500, 500, 3);
    const auto at_zero = mc_projected_risk(zero_function, *oracle, LossSpec::quadratic(), 500, 1, 3);
    EXPECT_LT(at_truth.value, 0.05 * at_zero.value) << to_string(resp);
  }
}

TEST(Risk, BinaryTruthBeatsZero) {
  const double beta = std::sqrt(0.1);
  for (Response resp : {Response::Linear, Response::Sin}) {
    const auto oracle = oracle_for(OutcomeKind::Binary, resp);
    const auto loss = LossSpec::logistic_bce(beta);
    const auto at_truth = mc_projected_risk(truth(resp), *oracle, loss, 500, 2000, 4);
    const auto at_zero = mc_projected_risk(zero_function, *oracle, loss, 500, 1, 4);
    EXPECT_LT(at_truth.value, at_zero.value);
    EXPECT_NEAR(at_zero.value, std::log(2.0), 1e-12);
  }
}

TEST(Risk, DeterministicAndThreadIndependent) {
  const auto oracle = oracle_for(OutcomeKind::Continuous, Response::Sin);
  const auto h = truth(Response::Abs);
  const auto a = mc_projected_risk(h, *oracle, LossSpec::quadratic(), 300, 50, 9, 1);
  const auto b = mc_projected_risk(h, *oracle, LossSpec::quadratic(), 300, 50, 9, 1);
  const auto c = mc_projected_risk(h, *oracle, LossSpec::quadratic(), 300, 50, 9, 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(a.std_error, c.std_error);
}

TEST(Risk, RejectsTinySamples) {
  const auto oracle = oracle_for(OutcomeKind::Continuous, Response::Sin);
  EXPECT_THROW(mc_projected_risk(zero_function, *oracle, LossSpec::quadratic(), 1, 1, 0),
               InvalidInput);
}

TEST(Risk, BinaryStepIsUnsupported) {
  EXPECT_THROW(oracle_for(OutcomeKind::Binary, Response::Step), UnsupportedScenario);
}

}  // namespace
}  // namespace sagdiv
