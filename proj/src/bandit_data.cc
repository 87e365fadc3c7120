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
#include "opekit/bandit_data.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "opekit/error.h"

namespace opekit {

namespace {

bool IsValidRow(std::span<const double> row, double floor) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= floor) || v > 1.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= kRowSumTolerance;
}

void CheckCommon(std::size_t n, const Matrix& features,
                 const std::vector<int>& actions,
                 const std::vector<double>& rewards, std::size_t num_actions) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no logged units");
  if (rewards.size() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(n) + " actions but " +
                    std::to_string(rewards.size()) + " rewards");
  }
  if (!features.empty() && features.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "feature matrix has " + std::to_string(features.rows()) +
                    " rows, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (actions[i] < 0 || static_cast<std::size_t>(actions[i]) >= num_actions) {
      throw Error(ErrorCode::kInvalidArgument,
                  "action " + std::to_string(actions[i]) + " of unit " +
                      std::to_string(i) + " outside [0, " +
                      std::to_string(num_actions) + ")");
    }
    if (!std::isfinite(rewards[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "reward of unit " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

void FloorPropensities(Matrix& propensities, double floor) {
  const std::size_t k = propensities.cols();
  if (k == 0) return;
  if (!(floor >= 0.0) || floor * static_cast<double>(k) >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "propensity floor too large");
  }
  const double scale = 1.0 - static_cast<double>(k) * floor;
  for (std::size_t i = 0; i < propensities.rows(); ++i) {
    std::span<double> row = propensities.row(i);
    if (IsValidRow(row, floor)) continue;
    double sum = 0.0;
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "propensity row " + std::to_string(i) + " is not finite");
      }
      sum += std::max(v, 0.0);
    }
    if (!(sum > 0.0)) {
      throw Error(ErrorCode::kZeroPropensity,
                  "propensity row " + std::to_string(i) + " has no mass");
    }
    for (double& v : row) v = floor + scale * std::max(v, 0.0) / sum;
  }
}

void CheckDistributionRows(const Matrix& m, std::string_view what) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!IsValidRow(m.row(i), 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " row " + std::to_string(i) +
                      " is not a probability distribution");
    }
  }
}

LoggedBanditData MakeLoggedData(Matrix features, std::vector<int> actions,
                                std::vector<double> rewards,
                                Matrix propensities) {
  const std::size_t n = actions.size();
  if (propensities.rows() != n || propensities.cols() < 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "propensity matrix is " + std::to_string(propensities.rows()) +
                    " x " + std::to_string(propensities.cols()) +
                    ", expected " + std::to_string(n) + " x K with K >= 2");
  }
  CheckCommon(n, features, actions, rewards, propensities.cols());
  FloorPropensities(propensities);

  LoggedBanditData d;
  d.num_actions = propensities.cols();
  d.chosen_propensity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.chosen_propensity[i] = propensities(i, actions[i]);
  }
  d.features = std::move(features);
  d.chosen_action = std::move(actions);
  d.observed_reward = std::move(rewards);
  d.propensities = std::move(propensities);
  return d;
}

LoggedBanditData MakeLoggedOnlyData(std::size_t num_actions, Matrix features,
                                    std::vector<int> actions,
                                    std::vector<double> rewards,
                                    std::vector<double> chosen_propensity) {
  const std::size_t n = actions.size();
  if (chosen_propensity.size() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected one logged propensity per unit");
  }
  CheckCommon(n, features, actions, rewards, num_actions);
  for (double& p : chosen_propensity) {
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::kInvalidArgument, "propensity is not finite");
    }
    p = std::clamp(p, kPropensityFloor, 1.0);
  }
  LoggedBanditData d;
  d.num_actions = num_actions;
  d.features = std::move(features);
  d.chosen_action = std::move(actions);
  d.observed_reward = std::move(rewards);
  d.chosen_propensity = std::move(chosen_propensity);
  return d;
}

PolicyMatrix PolicyMatrix::Uniform(std::size_t n, std::size_t num_actions) {
  return {Matrix(n, num_actions, 1.0 / static_cast<double>(num_actions))};
}

PolicyMatrix PolicyMatrix::FromMatrix(Matrix probs) {
  CheckDistributionRows(probs, "policy");
  return {std::move(probs)};
}

}  // namespace opekit
