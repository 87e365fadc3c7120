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
// Policy-value estimators for logged bandit data.
//
//   DM   n^-1 sum_i sum_a pi_ia mu_ia
//   IPW  n^-1 sum_i pi_i r_i / p_i                         (logged action)
//   SW   sum_i pi_i r_i / sum_i pi_i
//   DR   n^-1 sum_i [pi_i (r_i - mu_i) / p_i + sum_a pi_ia mu_ia]
//   NW   n^-1 sum_i sum_a f(p_ia),   f = P-spline fit of pi_i r_i on p_i
//   MNW  n^-1 sum_i sum_a [g(p_ia) + pi_ia mu_ia],
//        g = P-spline fit of pi_i (r_i - mu_i) on p_i
//
// All functions are pure; identical inputs give bitwise-identical values.
#ifndef OPEKIT_ESTIMATORS_H_
#define OPEKIT_ESTIMATORS_H_

#include <map>
#include <string>

#include "opekit/bandit_data.h"
#include "opekit/spline.h"

namespace opekit {

struct EstimateResult {
  std::string estimator;
  double value = 0.0;
  // Advisory only (selected lambda, edf, ...); not part of equality.
  std::map<std::string, double> diagnostics;
};

enum class SwForm {
  kNormalized,  // sum pi r / sum pi
  kLiteral,     // n^-1 sum pi r
};

EstimateResult Dm(const LoggedBanditData& data, const PolicyMatrix& policy,
                  const RewardPredictions& mu);
EstimateResult Ipw(const LoggedBanditData& data, const PolicyMatrix& policy);
EstimateResult Sw(const LoggedBanditData& data, const PolicyMatrix& policy,
                  SwForm form = SwForm::kNormalized);
EstimateResult Dr(const LoggedBanditData& data, const PolicyMatrix& policy,
                  const RewardPredictions& mu);
EstimateResult Nw(const LoggedBanditData& data, const PolicyMatrix& policy,
                  const spline::SplineSpec& spec = {});
EstimateResult Mnw(const LoggedBanditData& data, const PolicyMatrix& policy,
                   const RewardPredictions& mu,
                   const spline::SplineSpec& spec = {});

}  // namespace opekit

#endif  // OPEKIT_ESTIMATORS_H_
