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
// Monte Carlo experiment harness.
//
// Classification data sets become bandit problems the usual way: a classifier
// trained on one half of the data is the (deterministic) target policy, its
// error rate on the other half is the ground truth, and each Monte Carlo
// iteration reveals one noisy loss per test unit for an action drawn from a
// random logging policy. Synthetic problems (see synthetic.h) run through the
// same error bookkeeping.
//
// Every iteration draws from its own stream derived from (seed, repetition,
// iteration) and results are reduced in iteration order, so a fixed seed gives
// bitwise-identical summaries for any thread count.
#ifndef OPEKIT_HARNESS_H_
#define OPEKIT_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opekit/estimators.h"
#include "opekit/linalg.h"
#include "opekit/rng.h"
#include "opekit/spline.h"
#include "opekit/synthetic.h"

namespace opekit {

struct ClassificationData {
  std::string name;
  Matrix features;
  // 0-based, contiguous.
  std::vector<int> labels;
  std::size_t num_classes = 0;
  // Original label text of class k.
  std::vector<std::string> class_names;

  std::size_t size() const { return labels.size(); }
};

// Optional sidecar describing a data file. Unset fields are not checked.
struct DatasetSchema {
  std::string name;
  std::optional<std::size_t> n;
  std::optional<std::size_t> d;
  std::optional<std::size_t> num_classes;
  // 0-based label column; the last column when unset.
  std::optional<int> label_column;
  // ',', ';', '\t', or ' ' for runs of whitespace. Guessed when unset.
  std::optional<char> delimiter;
};

// Reads {name, n, d, K, label_column, delimiter} from a JSON file.
DatasetSchema LoadSchema(const std::string& path);

// Parses delimited text with numeric features and one label column. A first
// line whose feature fields are not all numeric is taken as a header. Labels
// that are all integers are ordered numerically, otherwise lexically.
// Throws Error(kParseError) or Error(kSchemaMismatch).
ClassificationData ParseDataset(std::istream& in, const DatasetSchema& schema,
                                const std::string& name);
ClassificationData LoadDataset(const std::string& path,
                               const DatasetSchema& schema = {});

// Random permutation; the first ceil(n/2) rows train, the rest test.
std::pair<ClassificationData, ClassificationData> SplitTrainTest(
    const ClassificationData& data, Rng& rng);

// Rows of K independent U(0, 1) draws normalized to sum one.
Matrix MakeLoggingPolicy(std::size_t n, std::size_t num_actions, Rng& rng);

// Multiplies every entry by an independent max(N(1, sd^2), kMinFactor) and
// renormalizes the rows.
inline constexpr double kMinPerturbFactor = 0.05;
Matrix PerturbLogging(const Matrix& propensities, Rng& rng, double sd = 0.3);

// Fits multinomial logistic regression of the sampled actions on the features
// of a random floor(fraction * n) subset and predicts floored propensities for
// every unit.
Matrix EstimateLogging(const Matrix& features, std::span<const int> actions,
                       std::size_t num_actions, Rng& rng,
                       double fraction = 0.75, double l2 = 1.0);
std::size_t EstimationSubsetSize(std::size_t n, double fraction = 0.75);

// l_ia = I(a != c_i) + sigma z_ia.
Matrix DrawNoisyLosses(std::span<const int> labels, std::size_t num_actions,
                       double sigma, Rng& rng);

enum class LoggingMode { kTrue, kPerturbed, kEstimated };
std::string_view LoggingModeName(LoggingMode mode);
// Throws Error(kInvalidArgument) for unknown names.
LoggingMode ParseLoggingMode(std::string_view name);

enum class EstimatorKind { kDm, kIpw, kSw, kDr, kNw, kMnw };
std::string_view EstimatorName(EstimatorKind kind);
EstimatorKind ParseEstimator(std::string_view name);
// Comma-separated, case-insensitive; duplicates rejected.
std::vector<EstimatorKind> ParseEstimatorList(std::string_view list);

struct RunConfig {
  std::string dataset;
  std::size_t mc_iterations = 500;
  std::size_t repetitions = 20;
  LoggingMode logging_mode = LoggingMode::kTrue;
  double noise_sigma = 0.2;
  std::uint64_t master_seed = 1;
  std::vector<EstimatorKind> estimators = {EstimatorKind::kDm, EstimatorKind::kIpw,
                                           EstimatorKind::kDr, EstimatorKind::kNw,
                                           EstimatorKind::kMnw};
  spline::SplineSpec spline;
  SwForm sw_form = SwForm::kNormalized;
  double logistic_l2 = 1.0;
  double ridge_l2 = 1.0;
  double perturb_sd = 0.3;
  double estimate_fraction = 0.75;
  // Draw new logging propensities every iteration (otherwise once per
  // repetition).
  bool redraw_logging = true;
  // Evaluation units per iteration; the whole test split when unset.
  std::optional<std::size_t> eval_sample_size;
  // 0: OPE_KIT_THREADS, or the hardware concurrency when that is unset or 0.
  int threads = 0;

  void Validate() const;
};

struct ErrorStats {
  double bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
};

// bias = mean(e), sd = population standard deviation, rmse = sqrt(mean(e^2)).
ErrorStats ComputeErrorStats(std::span<const double> errors);

struct RepetitionRecord {
  double ground_truth = 0.0;
  // One entry per estimator.
  std::vector<ErrorStats> stats;
  // mc_iterations x estimators matrix of estimate - truth.
  Matrix errors;
};

struct EvalSummary {
  std::string condition;
  std::string logging_mode;
  std::vector<std::string> estimators;
  // Means over repetitions, one per estimator.
  std::vector<ErrorStats> aggregate;
  std::vector<RepetitionRecord> repetitions;
  std::size_t mc_iterations = 0;
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) for an unknown estimator.
  const ErrorStats& Get(std::string_view estimator) const;
};

EvalSummary RunMonteCarlo(const RunConfig& config, const ClassificationData& data);

enum class SyntheticExample { kExample1, kExample2 };

struct SyntheticConfig {
  SyntheticExample example = SyntheticExample::kExample1;
  std::size_t n = 300;
  std::size_t num_actions = 20;
  Scenario scenario = Scenario::kDecreasing;
  std::size_t iterations = 2000;
  std::uint64_t master_seed = 1;
  // Example 1 supports SW, IPW and NW. Example 2 also supports DM, DR and MNW,
  // which are reported once per baseline coefficient in `betas`.
  std::vector<EstimatorKind> estimators = {EstimatorKind::kSw, EstimatorKind::kIpw,
                                           EstimatorKind::kNw};
  std::vector<double> betas = {0.5, 1.0};
  spline::SplineSpec spline;
  SwForm sw_form = SwForm::kNormalized;
  int threads = 0;

  void Validate() const;
};

// One repetition of `iterations` fresh draws; truth is recomputed per draw.
EvalSummary RunSyntheticMonteCarlo(const SyntheticConfig& config);

struct SweepPoint {
  std::size_t size = 0;
  std::string estimator;
  double bias = 0.0;
  double bias_se = 0.0;
  double rmse = 0.0;
  double rmse_se = 0.0;
};

// Standard errors: across repetitions when there are at least two, otherwise
// from the iteration values (delta method for the RMSE).
std::vector<SweepPoint> SweepPoints(const EvalSummary& summary, std::size_t size);

// Runs the protocol once per size, each iteration evaluating on a uniform
// subsample (without replacement) of the test split. Throws
// Error(kSizeTooLarge) if a size exceeds the test split.
std::vector<SweepPoint> SampleSizeSweep(const RunConfig& config,
                                        const ClassificationData& data,
                                        std::span<const std::size_t> sizes);

// Synthetic variant: the problem is generated with n = size.
std::vector<SweepPoint> SyntheticSweep(const SyntheticConfig& config,
                                       std::span<const std::size_t> sizes);

// Worker count after applying the OPE_KIT_THREADS convention.
int ResolveThreads(int requested);

// Calls fn(i) for i in [0, count) on up to `threads` workers. The exception
// of the lowest failing index is rethrown after all workers finish.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace opekit

#endif  // OPEKIT_HARNESS_H_
