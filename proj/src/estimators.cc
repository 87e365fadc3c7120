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
#include "opekit/estimators.h"

#include <cmath>
#include <string>
#include <vector>

#include "opekit/error.h"
#include "opekit/kernels.h"

namespace opekit {

namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + " x " + std::to_string(m.cols());
}

void CheckPolicy(const LoggedBanditData& data, const PolicyMatrix& policy) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyInput, "no logged units");
  if (policy.probs.rows() != data.size() ||
      policy.probs.cols() != data.num_actions) {
    throw Error(ErrorCode::kShapeMismatch,
                "policy is " + Shape(policy.probs) + ", data has " +
                    std::to_string(data.size()) + " units and " +
                    std::to_string(data.num_actions) + " actions");
  }
}

void CheckModel(const LoggedBanditData& data, const RewardPredictions& mu) {
  if (mu.mu_hat.rows() != data.size() || mu.mu_hat.cols() != data.num_actions) {
    throw Error(ErrorCode::kShapeMismatch,
                "reward predictions are " + Shape(mu.mu_hat) + ", expected " +
                    std::to_string(data.size()) + " x " +
                    std::to_string(data.num_actions));
  }
}

void CheckFullPropensities(const LoggedBanditData& data, const char* who) {
  if (!data.has_full_propensities()) {
    throw Error(ErrorCode::kMissingPropensities,
                std::string(who) +
                    " evaluates the fit at every arm's propensity and needs the "
                    "full n x K propensity matrix");
  }
}

std::vector<double> ChosenPolicy(const LoggedBanditData& data,
                                 const PolicyMatrix& policy) {
  std::vector<double> pi(data.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    pi[i] = policy.probs(i, data.chosen_action[i]);
  }
  return pi;
}

// pi_i / p_i for the logged actions.
std::vector<double> ImportanceWeights(const LoggedBanditData& data,
                                      const PolicyMatrix& policy) {
  std::vector<double> w = ChosenPolicy(data, policy);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = data.chosen_propensity[i];
    if (!(p > 0.0)) {
      throw Error(ErrorCode::kZeroPropensity,
                  "unit " + std::to_string(i) + " has zero propensity");
    }
    w[i] /= p;
  }
  return w;
}

double ModelTerm(const PolicyMatrix& policy, const RewardPredictions& mu) {
  return kernels::Dot(policy.probs.values(), mu.mu_hat.values());
}

// Fits responses on logged propensities and sums the fit over every arm.
double SplineSum(const LoggedBanditData& data, std::span<const double> response,
                 const spline::SplineSpec& spec, EstimateResult& result) {
  const spline::SplineFit fit =
      spline::FitPSpline(data.chosen_propensity, response, spec);
  std::vector<double> fitted(data.propensities.values().size());
  spline::PredictMany(fit, data.propensities.values(), fitted);
  result.diagnostics["lambda"] = fit.lambda;
  result.diagnostics["edf"] = fit.edf;
  result.diagnostics["rss"] = fit.rss;
  result.diagnostics["constant_fallback"] = fit.constant_fallback ? 1.0 : 0.0;
  return kernels::Sum(fitted);
}

EstimateResult Finish(EstimateResult r) {
  if (!std::isfinite(r.value)) {
    throw Error(ErrorCode::kInvalidArgument,
                r.estimator + " produced a non-finite value");
  }
  return r;
}

}  // namespace

EstimateResult Dm(const LoggedBanditData& data, const PolicyMatrix& policy,
                  const RewardPredictions& mu) {
  CheckPolicy(data, policy);
  CheckModel(data, mu);
  const double n = static_cast<double>(data.size());
  return Finish({"DM", ModelTerm(policy, mu) / n, {}});
}

EstimateResult Ipw(const LoggedBanditData& data, const PolicyMatrix& policy) {
  CheckPolicy(data, policy);
  const std::vector<double> w = ImportanceWeights(data, policy);
  const double n = static_cast<double>(data.size());
  return Finish({"IPW", kernels::Dot(w, data.observed_reward) / n, {}});
}

EstimateResult Sw(const LoggedBanditData& data, const PolicyMatrix& policy,
                  SwForm form) {
  CheckPolicy(data, policy);
  const std::vector<double> pi = ChosenPolicy(data, policy);
  const double weighted = kernels::Dot(pi, data.observed_reward);
  if (form == SwForm::kLiteral) {
    return Finish({"SW", weighted / static_cast<double>(data.size()), {}});
  }
  const double mass = kernels::Sum(pi);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kZeroWeightMass,
                "target policy puts no mass on any logged action");
  }
  return Finish({"SW", weighted / mass, {{"weight_mass", mass}}});
}

EstimateResult Dr(const LoggedBanditData& data, const PolicyMatrix& policy,
                  const RewardPredictions& mu) {
  CheckPolicy(data, policy);
  CheckModel(data, mu);
  const std::vector<double> w = ImportanceWeights(data, policy);
  std::vector<double> residual(data.observed_reward);
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] -= mu.mu_hat(i, data.chosen_action[i]);
  }
  const double n = static_cast<double>(data.size());
  return Finish({"DR", kernels::Dot(w, residual) / n + ModelTerm(policy, mu) / n,
                 {}});
}

EstimateResult Nw(const LoggedBanditData& data, const PolicyMatrix& policy,
                  const spline::SplineSpec& spec) {
  CheckPolicy(data, policy);
  CheckFullPropensities(data, "NW");
  std::vector<double> response = ChosenPolicy(data, policy);
  for (std::size_t i = 0; i < response.size(); ++i) {
    response[i] *= data.observed_reward[i];
  }
  EstimateResult r{"NW", 0.0, {}};
  r.value = SplineSum(data, response, spec, r) / static_cast<double>(data.size());
  return Finish(std::move(r));
}

EstimateResult Mnw(const LoggedBanditData& data, const PolicyMatrix& policy,
                   const RewardPredictions& mu, const spline::SplineSpec& spec) {
  CheckPolicy(data, policy);
  CheckModel(data, mu);
  CheckFullPropensities(data, "MNW");
  std::vector<double> response = ChosenPolicy(data, policy);
  for (std::size_t i = 0; i < response.size(); ++i) {
    response[i] *=
        data.observed_reward[i] - mu.mu_hat(i, data.chosen_action[i]);
  }
  EstimateResult r{"MNW", 0.0, {}};
  const double n = static_cast<double>(data.size());
  r.value = (SplineSum(data, response, spec, r) + ModelTerm(policy, mu)) / n;
  return Finish(std::move(r));
}

}  // namespace opekit
