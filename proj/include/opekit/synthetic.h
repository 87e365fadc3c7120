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
// Simulated bandit problems with known ground truth.
//
// Example 1: y_ik ~ N(0, 1), reward y_ik^2, uniform target policy.
// Example 2: z_ik = x_ik^2 + y_ik^2 with x_ik ~ N(0, 2) (variance 2); reward
//            model mu_ik = beta x_ik^2.
// Toy:       r_ia = mu + N(0, sigma^2), target pi = w p + (1 - w) / K, so the
//            regression of pi r on p is exactly linear.
//
// In every problem each context draws K uniforms on (0, 1), sorts them
// increasing and normalizes them into the logging propensities, so arm k has
// the k-th smallest propensity. The scenario decides how rewards line up with
// that order.
#ifndef OPEKIT_SYNTHETIC_H_
#define OPEKIT_SYNTHETIC_H_

#include <cstddef>
#include <string_view>
#include <utility>

#include "opekit/bandit_data.h"
#include "opekit/rng.h"

namespace opekit {

enum class Scenario { kIncreasing, kDecreasing, kUnsorted };

std::string_view ScenarioName(Scenario s);

struct SyntheticProblem {
  LoggedBanditData data;
  PolicyMatrix policy;
  // Realized rewards of every arm; only used for the ground truth.
  Matrix full_rewards;
  double true_value = 0.0;
  Scenario scenario = Scenario::kUnsorted;
  // Example 2 only: x_ik^2, the part of the reward a baseline model explains.
  Matrix baseline;
};

SyntheticProblem GenExample1(std::size_t n, std::size_t num_actions,
                             Scenario scenario, Rng& rng);

// Returns the problem and the reward predictions beta * x^2.
std::pair<SyntheticProblem, RewardPredictions> GenExample2(
    std::size_t n, std::size_t num_actions, Scenario scenario, double beta,
    Rng& rng);

SyntheticProblem GenToy(std::size_t n, std::size_t num_actions, double w,
                        double mu, double sigma, Rng& rng);

// Intercept and slope of the toy problem's f(p) = E[pi r | p].
std::pair<double, double> ToyLinearF(std::size_t num_actions, double w,
                                     double mu);

// n^-1 sum_i sum_a pi_ia full_rewards_ia.
double TrueValue(const SyntheticProblem& problem, const PolicyMatrix& policy);

// K sorted uniforms normalized to sum one.
void DrawSortedPropensities(Rng& rng, std::span<double> row);

}  // namespace opekit

#endif  // OPEKIT_SYNTHETIC_H_
