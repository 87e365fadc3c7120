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
// Multinomial logistic regression and per-action ridge regression.
//
// Both learners add an unpenalized intercept. Logistic regression minimizes
//   sum_i -log softmax(W [1, x_i])_{y_i} + (l2 / 2) ||W without intercepts||^2
// with full-batch L-BFGS; it is deterministic for fixed inputs.
#ifndef OPEKIT_SUPERVISED_H_
#define OPEKIT_SUPERVISED_H_

#include <cstddef>
#include <span>
#include <vector>

#include "opekit/bandit_data.h"
#include "opekit/linalg.h"

namespace opekit {

// Column-wise z-scoring with statistics from one (training) matrix.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  // Columns with (population) standard deviation below 1e-12 get scale 1.
  static Standardizer Fit(const Matrix& x);
  Matrix Apply(const Matrix& x) const;
};

struct LogisticOptions {
  double l2 = 1.0;
  int max_iterations = 500;
  // On the gradient of the objective divided by n.
  double gradient_tolerance = 1e-6;
  int history = 10;
};

struct Classifier {
  // K x (d + 1); column 0 is the intercept.
  Matrix weights;
  std::size_t num_classes = 0;
  // Classes absent from the training labels are never predicted.
  std::vector<bool> present;
  bool degenerate_labels = false;
  bool converged = false;
  int iterations = 0;
  // Objective divided by n after each accepted step, starting at W = 0.
  std::vector<double> loss_trace;
};

// Throws Error(kInvalidArgument) for bad labels and Error(kTooFewPoints)
// when n <= K.
Classifier FitMultinomialLogistic(const Matrix& x, std::span<const int> labels,
                                  std::size_t num_classes,
                                  const LogisticOptions& options = {});

// Objective divided by n and its gradient (same layout as weights); exposed
// for finite-difference checks.
double LogisticObjective(const Matrix& x, std::span<const int> labels,
                         const std::vector<bool>& present, double l2,
                         const Matrix& weights, Matrix* gradient);

// n x K linear scores W [1, x]; absent classes score -inf.
Matrix ClassScores(const Classifier& model, const Matrix& x);
Matrix PredictProba(const Classifier& model, const Matrix& x);
// One-hot rows at the highest score, ties to the lowest class index.
PolicyMatrix ToDeterministicPolicy(const Classifier& model, const Matrix& x);
PolicyMatrix ArgmaxPolicy(const Matrix& scores);

struct RidgeModel {
  // K x (d + 1); column 0 is the intercept.
  Matrix coefficients;
  double l2 = 1.0;
};

// For every action a solves (X'X + l2 I) w = X' losses[:, a] with X = [1, x]
// and the intercept left out of the penalty.
RidgeModel FitRidgePerAction(const Matrix& x, const Matrix& losses,
                             double l2 = 1.0);
RewardPredictions PredictRewards(const RidgeModel& model, const Matrix& x);

}  // namespace opekit

#endif  // OPEKIT_SUPERVISED_H_
