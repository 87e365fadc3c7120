/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "opekit/error.h"
#include "opekit/estimators.h"
#include "opekit/kernels.h"
#include "opekit/rng.h"
#include "opekit/synthetic.h"

namespace opekit {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kEmptyInput;
}

// Two units, two arms:
//   unit 1: pi = (1, 0),     a = 0, p = (0.5, 0.5),   r = 1
//   unit 2: pi = (0.5, 0.5), a = 1, p = (0.75, 0.25), r = 2
struct Golden {
  LoggedBanditData data = MakeLoggedData(Matrix(2, 0), {0, 1}, {1.0, 2.0},
                                         Matrix::FromRows({{0.5, 0.5}, {0.75, 0.25}}));
  PolicyMatrix policy = PolicyMatrix::FromMatrix(Matrix::FromRows({{1.0, 0.0}, {0.5, 0.5}}));
  RewardPredictions half{Matrix(2, 2, 0.5)};
};

TEST(Golden, Ipw) {
  // (1 * 1 / 0.5 + 0.5 * 2 / 0.25) / 2
  const Golden g;
  EXPECT_NEAR(Ipw(g.data, g.policy).value, 3.0, 1e-12);
}

TEST(Golden, Sw) {
  // (1 * 1 + 0.5 * 2) / (1 + 0.5)
  const Golden g;
  EXPECT_NEAR(Sw(g.data, g.policy).value, 2.0 / 1.5, 1e-12);
  EXPECT_NEAR(Sw(g.data, g.policy, SwForm::kLiteral).value, 1.0, 1e-12);
}

TEST(Golden, Dm) {
  // (1 * 0.5 + 0 * 0.5 + 0.5 * 0.5 + 0.5 * 0.5) / 2
  const Golden g;
  EXPECT_NEAR(Dm(g.data, g.policy, g.half).value, 0.5, 1e-12);
}

TEST(Golden, Dr) {
  // ((1 (1 - 0.5) / 0.5 + 0.5) + (0.5 (2 - 0.5) / 0.25 + 0.5)) / 2
  const Golden g;
  EXPECT_NEAR(Dr(g.data, g.policy, g.half).value, 2.5, 1e-12);
}

SyntheticProblem Problem(Scenario s, std::uint64_t seed, std::size_t n = 300) {
  Rng rng(seed);
  return GenExample1(n, 20, s, rng);
}

TEST(Dm, ZeroModelAndSelection) {
  const auto p = Problem(Scenario::kUnsorted, 1);
  const RewardPredictions zero{Matrix(p.data.size(), 20, 0.0)};
  EXPECT_EQ(Dm(p.data, p.policy, zero).value, 0.0);
  // A deterministic policy picks one exact mean per unit.
  Matrix pi(p.data.size(), 20);
  double mean = 0.0;
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    pi(i, i % 20) = 1.0;
    mean += p.full_rewards(i, i % 20);
  }
  mean /= p.data.size();
  const RewardPredictions exact{p.full_rewards};
  EXPECT_NEAR(Dm(p.data, PolicyMatrix::FromMatrix(pi), exact).value, mean, 1e-12);
}

TEST(Ipw, WeightsCancelWhenTargetIsLogging) {
  const auto p = Problem(Scenario::kDecreasing, 2);
  const PolicyMatrix same = PolicyMatrix::FromMatrix(p.data.propensities);
  const double mean = kernels::Sum(p.data.observed_reward) / p.data.size();
  EXPECT_EQ(Ipw(p.data, same).value, mean);
}

TEST(Ipw, LoggedOnlyDataMatchesFullData) {
  const auto p = Problem(Scenario::kUnsorted, 3);
  const auto logged = MakeLoggedOnlyData(20, Matrix(p.data.size(), 0), p.data.chosen_action,
                                         p.data.observed_reward, p.data.chosen_propensity);
  EXPECT_EQ(Ipw(logged, p.policy).value, Ipw(p.data, p.policy).value);
  EXPECT_EQ(CodeOf([&] { Nw(logged, p.policy); }), ErrorCode::kMissingPropensities);
  const RewardPredictions zero{Matrix(p.data.size(), 20, 0.0)};
  EXPECT_EQ(CodeOf([&] { Mnw(logged, p.policy, zero); }),
            ErrorCode::kMissingPropensities);
}

TEST(Sw, UniformPolicyGivesMeanReward) {
  const auto p = Problem(Scenario::kIncreasing, 4);
  double mean = 0.0;
  for (double r : p.data.observed_reward) mean += r;
  mean /= p.data.size();
  EXPECT_NEAR(Sw(p.data, p.policy).value, mean, 1e-12);
}

TEST(Sw, ZeroMassIsAnError) {
  const Golden g;
  const PolicyMatrix off = PolicyMatrix::FromMatrix(Matrix::FromRows({{0, 1}, {1, 0}}));
  EXPECT_EQ(CodeOf([&] { Sw(g.data, off); }), ErrorCode::kZeroWeightMass);
}

TEST(Dr, DegeneracyIdentities) {
  const auto p = Problem(Scenario::kUnsorted, 5);
  const std::size_t n = p.data.size();
  const RewardPredictions zero{Matrix(n, 20, 0.0)};
  EXPECT_NEAR(Dr(p.data, p.policy, zero).value, Ipw(p.data, p.policy).value, 1e-12);
  // A model that is exact on the logged actions leaves only the DM term.
  RewardPredictions fitted{p.full_rewards};
  for (std::size_t i = 0; i < n; ++i) fitted.mu_hat(i, 0) += 0.3;
  EXPECT_NEAR(Dr(p.data, p.policy, fitted).value, Dm(p.data, p.policy, fitted).value +
                  [&] {
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                      if (p.data.chosen_action[i] == 0) {
                        s -= p.policy.probs(i, 0) * 0.3 / p.data.chosen_propensity[i];
                      }
                    }
                    return s / n;
                  }(),
              1e-12);
  RewardPredictions exact{p.full_rewards};
  EXPECT_NEAR(Dr(p.data, p.policy, exact).value, Dm(p.data, p.policy, exact).value, 1e-12);
}

TEST(Nw, ConstantResponseSumsToOne) {
  const auto p = Problem(Scenario::kUnsorted, 6);
  const std::size_t n = p.data.size();
  const auto ones = MakeLoggedData(Matrix(n, 0), p.data.chosen_action,
                                   std::vector<double>(n, 1.0), p.data.propensities);
  EXPECT_NEAR(Nw(ones, p.policy).value, 1.0, 1e-8);
}

TEST(Nw, UniformPropensitiesUseConstantFit) {
  // p = 1/K everywhere: the fit is the mean response, V = K mean(pi r).
  const Matrix prop(3, 4, 0.25);
  const auto data = MakeLoggedData(Matrix(3, 0), {0, 2, 3}, {1.0, 4.0, -2.0}, prop);
  const PolicyMatrix pi = PolicyMatrix::FromMatrix(
      Matrix::FromRows({{0.4, 0.2, 0.2, 0.2}, {0.1, 0.1, 0.7, 0.1}, {0.25, 0.25, 0.25, 0.25}}));
  const double expect = 4.0 * (0.4 * 1.0 + 0.7 * 4.0 + 0.25 * -2.0) / 3.0;
  const auto r = Nw(data, pi);
  EXPECT_NEAR(r.value, expect, 1e-12);
  EXPECT_EQ(r.diagnostics.at("constant_fallback"), 1.0);
}

TEST(Nw, LinearInRewardsAtFixedLambda) {
  const auto p = Problem(Scenario::kDecreasing, 7);
  const std::size_t n = p.data.size();
  spline::SplineSpec spec;
  spec.lambda_fixed = 2.0;
  Rng rng(8);
  std::vector<double> r2(n), mix(n);
  for (std::size_t i = 0; i < n; ++i) {
    r2[i] = rng.Normal();
    mix[i] = 2.5 * p.data.observed_reward[i] - 0.75 * r2[i];
  }
  auto with = [&](std::vector<double> r) {
    return MakeLoggedData(Matrix(n, 0), p.data.chosen_action, std::move(r),
                          p.data.propensities);
  };
  const double lhs = Nw(with(mix), p.policy, spec).value;
  const double rhs = 2.5 * Nw(p.data, p.policy, spec).value -
                     0.75 * Nw(with(r2), p.policy, spec).value;
  EXPECT_NEAR(lhs, rhs, 1e-9);
}

TEST(Nw, ReportsDiagnosticsAndIsPure) {
  const auto p = Problem(Scenario::kUnsorted, 9);
  const auto a = Nw(p.data, p.policy);
  const auto b = Nw(p.data, p.policy);
  EXPECT_EQ(a.value, b.value);
  EXPECT_GT(a.diagnostics.at("lambda"), 0.0);
  EXPECT_GT(a.diagnostics.at("edf"), 1.0);
  EXPECT_EQ(a.diagnostics.at("constant_fallback"), 0.0);
}

TEST(Mnw, ZeroModelEqualsNw) {
  const auto p = Problem(Scenario::kUnsorted, 10);
  spline::SplineSpec spec;
  spec.lambda_fixed = 0.3;
  const RewardPredictions zero{Matrix(p.data.size(), 20, 0.0)};
  EXPECT_NEAR(Mnw(p.data, p.policy, zero, spec).value, Nw(p.data, p.policy, spec).value,
              1e-12);
}

TEST(Mnw, ExactNoiseFreeModelEqualsDm) {
  Rng rng(11);
  auto [p, mu] = GenExample2(300, 20, Scenario::kIncreasing, 1.0, rng);
  // Rewards generated without noise from the modeled means.
  const std::size_t n = p.data.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = mu.mu_hat(i, p.data.chosen_action[i]);
  const auto exact = MakeLoggedData(Matrix(n, 0), p.data.chosen_action, r,
                                    p.data.propensities);
  EXPECT_NEAR(Mnw(exact, p.policy, mu).value, Dm(exact, p.policy, mu).value, 1e-6);
}

TEST(Toy, LeastSquaresRecoversLinearRegressionFunction) {
  // f(p) = E[pi r | p] = (1 - w) mu / K + w mu p for the toy design.
  const double w = 0.5, mu = 2.0;
  const std::size_t k = 4, n = 200, draws = 2000;
  const auto [alpha, beta] = ToyLinearF(k, w, mu);
  EXPECT_DOUBLE_EQ(alpha, 0.25);
  EXPECT_DOUBLE_EQ(beta, 1.0);
  std::vector<double> a_hat(draws), b_hat(draws);
  for (std::size_t t = 0; t < draws; ++t) {
    Rng rng(1000 + t);
    const auto p = GenToy(n, k, w, mu, 1.0, rng);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = p.data.chosen_propensity[i];
      const double y = p.policy.probs(i, p.data.chosen_action[i]) * p.data.observed_reward[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    b_hat[t] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    a_hat[t] = (sy - b_hat[t] * sx) / n;
  }
  auto mean_se = [&](const std::vector<double>& v) {
    double m = 0, s = 0;
    for (double x : v) m += x;
    m /= v.size();
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, std::sqrt(s / (v.size() - 1) / v.size())};
  };
  const auto [am, ase] = mean_se(a_hat);
  const auto [bm, bse] = mean_se(b_hat);
  EXPECT_LE(std::abs(am - alpha), 3 * ase);
  EXPECT_LE(std::abs(bm - beta), 3 * bse);
}

TEST(Toy, BoundaryWeights) {
  Rng rng(12);
  const auto uniform = GenToy(50, 5, 0.0, 1.0, 1.0, rng);
  for (double v : uniform.policy.probs.values()) EXPECT_DOUBLE_EQ(v, 0.2);
  const auto logging = GenToy(50, 5, 1.0, 1.0, 1.0, rng);
  double mean = kernels::Sum(logging.data.observed_reward) / 50.0;
  EXPECT_EQ(Ipw(logging.data, logging.policy).value, mean);
}

TEST(Estimators, ShapeErrors) {
  const Golden g;
  const PolicyMatrix wrong = PolicyMatrix::Uniform(3, 2);
  EXPECT_EQ(CodeOf([&] { Ipw(g.data, wrong); }), ErrorCode::kShapeMismatch);
  const RewardPredictions bad{Matrix(2, 3)};
  EXPECT_EQ(CodeOf([&] { Dm(g.data, g.policy, bad); }), ErrorCode::kShapeMismatch);
}

TEST(BanditData, FloorLeavesValidRowsAlone) {
  Matrix m = Matrix::FromRows({{0.2, 0.3, 0.5}, {0.0, 0.4, 0.6}});
  FloorPropensities(m);
  EXPECT_EQ(m(0, 0), 0.2);
  EXPECT_EQ(m(0, 2), 0.5);
  EXPECT_NEAR(m(1, 0), 1e-6, 1e-18);
  EXPECT_NEAR(m(1, 1), 1e-6 + (1 - 3e-6) * 0.4, 1e-16);
  EXPECT_NEAR(m(1, 0) + m(1, 1) + m(1, 2), 1.0, 1e-15);
  Matrix dead = Matrix::FromRows({{0.0, 0.0}});
  EXPECT_EQ(CodeOf([&] { FloorPropensities(dead); }), ErrorCode::kZeroPropensity);
}

TEST(BanditData, ValidatesInputs) {
  const Matrix p(2, 2, 0.5);
  EXPECT_EQ(CodeOf([&] { MakeLoggedData(Matrix(2, 0), {0, 2}, {1, 1}, p); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { MakeLoggedData(Matrix(2, 0), {0, 1}, {1}, p); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([&] { MakeLoggedData(Matrix(2, 0), {0, 1}, {1, 1}, Matrix(2, 1, 1.0)); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([&] { MakeLoggedData(Matrix(0, 0), {}, {}, Matrix(0, 2)); }),
            ErrorCode::kEmptyInput);
  EXPECT_EQ(CodeOf([&] { PolicyMatrix::FromMatrix(Matrix::FromRows({{0.7, 0.7}})); }),
            ErrorCode::kInvalidArgument);
  const auto logged = MakeLoggedOnlyData(3, Matrix(), {0}, {1.0}, {0.0});
  EXPECT_EQ(logged.chosen_propensity[0], kPropensityFloor);
  EXPECT_FALSE(logged.has_full_propensities());
}

}  // namespace
}  // namespace opekit
