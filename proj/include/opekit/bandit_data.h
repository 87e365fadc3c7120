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
// Logged bandit feedback and the matrices the estimators consume.
#ifndef OPEKIT_BANDIT_DATA_H_
#define OPEKIT_BANDIT_DATA_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "opekit/linalg.h"

namespace opekit {

// Propensities are kept at or above this value.
inline constexpr double kPropensityFloor = 1e-6;
// Tolerance for "rows sum to one".
inline constexpr double kRowSumTolerance = 1e-8;

// Rows that already are distributions with every entry >= floor are left
// untouched. Any other row is mapped to floor + (1 - K floor) max(p, 0) / sum,
// which keeps the ordering of the entries and sums to one.
void FloorPropensities(Matrix& propensities, double floor = kPropensityFloor);

// Throws Error(kInvalidArgument) unless every row of `m` is a probability
// distribution (entries in [0, 1], row sums within kRowSumTolerance of 1).
void CheckDistributionRows(const Matrix& m, std::string_view what);

struct LoggedBanditData {
  std::size_t num_actions = 0;
  // n x d context features; may have zero columns.
  Matrix features;
  std::vector<int> chosen_action;
  std::vector<double> observed_reward;
  // p_{i a_i}, always present.
  std::vector<double> chosen_propensity;
  // n x K behavior-policy probabilities used for estimation. Empty when only
  // the logged action's propensity is known.
  Matrix propensities;

  std::size_t size() const { return chosen_action.size(); }
  bool has_full_propensities() const { return !propensities.empty(); }
};

// Validates shapes and action range, floors the propensity rows and fills
// chosen_propensity. Throws Error(kShapeMismatch / kInvalidArgument).
LoggedBanditData MakeLoggedData(Matrix features, std::vector<int> actions,
                                std::vector<double> rewards,
                                Matrix propensities);

// Data that only records p_{i a_i}; such data cannot be used by NW or MNW.
// Chosen propensities are clamped into [floor, 1].
LoggedBanditData MakeLoggedOnlyData(std::size_t num_actions, Matrix features,
                                    std::vector<int> actions,
                                    std::vector<double> rewards,
                                    std::vector<double> chosen_propensity);

// Target-policy probabilities pi_{ia}.
struct PolicyMatrix {
  Matrix probs;

  static PolicyMatrix Uniform(std::size_t n, std::size_t num_actions);
  // Validates the rows and wraps `probs`.
  static PolicyMatrix FromMatrix(Matrix probs);
};

// Reward-model predictions mu_hat_{ia}.
struct RewardPredictions {
  Matrix mu_hat;
};

}  // namespace opekit

#endif  // OPEKIT_BANDIT_DATA_H_
