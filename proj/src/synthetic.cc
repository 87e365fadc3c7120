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
#include "opekit/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "opekit/error.h"
#include "opekit/kernels.h"

namespace opekit {

namespace {

void CheckSizes(std::size_t n, std::size_t num_actions) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (num_actions < 2) throw Error(ErrorCode::kInvalidArgument, "K must be >= 2");
}

// Draws propensities and one action per context, then assembles the logged
// data from the full reward matrix.
SyntheticProblem Assemble(Matrix full_rewards, Matrix propensities,
                          std::vector<int> actions, Scenario scenario,
                          PolicyMatrix policy) {
  const std::size_t n = full_rewards.rows();
  std::vector<double> observed(n);
  for (std::size_t i = 0; i < n; ++i) observed[i] = full_rewards(i, actions[i]);
  SyntheticProblem p;
  p.data = MakeLoggedData(Matrix(n, 0), std::move(actions), std::move(observed),
                          std::move(propensities));
  p.policy = std::move(policy);
  p.full_rewards = std::move(full_rewards);
  p.scenario = scenario;
  p.true_value = TrueValue(p, p.policy);
  return p;
}

std::vector<int> SampleActions(const Matrix& propensities, Rng& rng) {
  std::vector<int> a(propensities.rows());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<int>(rng.Categorical(propensities.row(i)));
  }
  return a;
}

}  // namespace

std::string_view ScenarioName(Scenario s) {
  switch (s) {
    case Scenario::kIncreasing: return "increasing";
    case Scenario::kDecreasing: return "decreasing";
    case Scenario::kUnsorted: return "unsorted";
  }
  return "unknown";
}

void DrawSortedPropensities(Rng& rng, std::span<double> row) {
  double sum = 0.0;
  for (double& v : row) {
    v = rng.Uniform();
    sum += v;
  }
  std::sort(row.begin(), row.end());
  for (double& v : row) v /= sum;
}

SyntheticProblem GenExample1(std::size_t n, std::size_t num_actions,
                             Scenario scenario, Rng& rng) {
  CheckSizes(n, num_actions);
  Matrix rewards(n, num_actions);
  Matrix prop(n, num_actions);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> r = rewards.row(i);
    for (double& v : r) {
      const double y = rng.Normal();
      v = y * y;
    }
    if (scenario == Scenario::kIncreasing) {
      std::sort(r.begin(), r.end());
    } else if (scenario == Scenario::kDecreasing) {
      std::sort(r.begin(), r.end(), std::greater<double>());
    }
    DrawSortedPropensities(rng, prop.row(i));
  }
  std::vector<int> actions = SampleActions(prop, rng);
  return Assemble(std::move(rewards), std::move(prop), std::move(actions),
                  scenario, PolicyMatrix::Uniform(n, num_actions));
}

std::pair<SyntheticProblem, RewardPredictions> GenExample2(
    std::size_t n, std::size_t num_actions, Scenario scenario, double beta,
    Rng& rng) {
  CheckSizes(n, num_actions);
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must lie in [0, 1]");
  }
  const double x_sd = std::sqrt(2.0);
  Matrix rewards(n, num_actions);
  Matrix baseline(n, num_actions);
  Matrix prop(n, num_actions);
  std::vector<double> x2(num_actions), y2(num_actions);
  std::vector<std::size_t> order(num_actions);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < num_actions; ++k) {
      const double x = rng.Normal(0.0, x_sd);
      const double y = rng.Normal();
      x2[k] = x * x;
      y2[k] = y * y;
    }
    // (x^2, y^2) pairs move together; the key is y^2.
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (scenario == Scenario::kIncreasing) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return y2[a] < y2[b]; });
    } else if (scenario == Scenario::kDecreasing) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return y2[a] > y2[b]; });
    }
    for (std::size_t k = 0; k < num_actions; ++k) {
      baseline(i, k) = x2[order[k]];
      rewards(i, k) = x2[order[k]] + y2[order[k]];
    }
    DrawSortedPropensities(rng, prop.row(i));
  }
  std::vector<int> actions = SampleActions(prop, rng);
  RewardPredictions mu{Matrix(n, num_actions)};
  for (std::size_t j = 0; j < baseline.values().size(); ++j) {
    mu.mu_hat.values()[j] = beta * baseline.values()[j];
  }
  SyntheticProblem p =
      Assemble(std::move(rewards), std::move(prop), std::move(actions),
               scenario, PolicyMatrix::Uniform(n, num_actions));
  p.baseline = std::move(baseline);
  return {std::move(p), std::move(mu)};
}

SyntheticProblem GenToy(std::size_t n, std::size_t num_actions, double w,
                        double mu, double sigma, Rng& rng) {
  CheckSizes(n, num_actions);
  if (!(w >= 0.0 && w <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "w must lie in [0, 1]");
  }
  if (!(sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  }
  Matrix rewards(n, num_actions);
  Matrix prop(n, num_actions);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : rewards.row(i)) v = mu + sigma * rng.Normal();
    DrawSortedPropensities(rng, prop.row(i));
  }
  // Floor first so that w = 1 reproduces the stored propensities exactly.
  FloorPropensities(prop);
  std::vector<int> actions = SampleActions(prop, rng);
  const double base = (1.0 - w) / static_cast<double>(num_actions);
  Matrix pi(n, num_actions);
  for (std::size_t j = 0; j < pi.values().size(); ++j) {
    pi.values()[j] = w * prop.values()[j] + base;
  }
  return Assemble(std::move(rewards), std::move(prop), std::move(actions),
                  Scenario::kUnsorted, PolicyMatrix{std::move(pi)});
}

std::pair<double, double> ToyLinearF(std::size_t num_actions, double w,
                                     double mu) {
  return {(1.0 - w) * mu / static_cast<double>(num_actions), w * mu};
}

double TrueValue(const SyntheticProblem& problem, const PolicyMatrix& policy) {
  const Matrix& r = problem.full_rewards;
  if (policy.probs.rows() != r.rows() || policy.probs.cols() != r.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "policy shape does not match the reward matrix");
  }
  return kernels::Dot(policy.probs.values(), r.values()) /
         static_cast<double>(r.rows());
}

}  // namespace opekit
