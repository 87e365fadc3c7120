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
#include "opekit/harness.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>

#include "opekit/error.h"
#include "opekit/kernels.h"
#include "opekit/supervised.h"

namespace opekit {

namespace {

// First key of every derived stream, so streams of different purposes never
// coincide.
enum StreamTag : std::uint64_t {
  kSplitStream = 1,
  kIterationStream = 2,
  kLoggingStream = 3,
  kSubsampleStream = 4,
  kSyntheticStream = 5,
};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Matrix SubsetRows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(m.row(rows[i]).begin(), m.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

ClassificationData SubsetData(const ClassificationData& d,
                              std::span<const std::size_t> rows) {
  ClassificationData out;
  out.name = d.name;
  out.num_classes = d.num_classes;
  out.class_names = d.class_names;
  out.features = SubsetRows(d.features, rows);
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.labels[i] = d.labels[rows[i]];
  return out;
}

// First m entries of a uniform random permutation of [0, n), sorted.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t m,
                                                  Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.Index(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<double> Column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, c);
  return out;
}

double SampleSd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mean = kernels::Sum(v) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string BetaLabel(std::string_view base, double beta) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s(beta=%g)", std::string(base).c_str(), beta);
  return buf;
}

void FillStats(EvalSummary& s) {
  const std::size_t e = s.estimators.size();
  for (RepetitionRecord& rep : s.repetitions) {
    rep.stats.resize(e);
    for (std::size_t k = 0; k < e; ++k) {
      rep.stats[k] = ComputeErrorStats(Column(rep.errors, k));
    }
  }
  s.aggregate.assign(e, ErrorStats{});
  const double r = static_cast<double>(s.repetitions.size());
  for (std::size_t k = 0; k < e; ++k) {
    for (const RepetitionRecord& rep : s.repetitions) {
      s.aggregate[k].bias += rep.stats[k].bias;
      s.aggregate[k].sd += rep.stats[k].sd;
      s.aggregate[k].rmse += rep.stats[k].rmse;
    }
    s.aggregate[k].bias /= r;
    s.aggregate[k].sd /= r;
    s.aggregate[k].rmse /= r;
  }
}

// Everything a repetition fixes before its Monte Carlo iterations.
struct Repetition {
  ClassificationData test;  // standardized features
  PolicyMatrix target;
  RewardPredictions mu;
  double truth = 0.0;
  Matrix fixed_logging;  // only when logging is not redrawn
};

Repetition PrepareRepetition(const RunConfig& config,
                             const ClassificationData& data, std::size_t rep) {
  Rng rng(config.master_seed, {kSplitStream, rep});
  auto [train, test] = SplitTrainTest(data, rng);
  const Standardizer z = Standardizer::Fit(train.features);
  train.features = z.Apply(train.features);
  test.features = z.Apply(test.features);
  const std::size_t k = data.num_classes;

  LogisticOptions lo;
  lo.l2 = config.logistic_l2;
  const Classifier clf = FitMultinomialLogistic(train.features, train.labels, k, lo);

  Repetition r;
  r.target = ToDeterministicPolicy(clf, test.features);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (r.target.probs(i, test.labels[i]) != 1.0) ++wrong;
  }
  r.truth = static_cast<double>(wrong) / static_cast<double>(test.size());

  // Full-feedback noisy losses are available on the training half.
  const Matrix train_losses =
      DrawNoisyLosses(train.labels, k, config.noise_sigma, rng);
  const RidgeModel ridge =
      FitRidgePerAction(train.features, train_losses, config.ridge_l2);
  r.mu = PredictRewards(ridge, test.features);
  if (!config.redraw_logging) {
    Rng lrng(config.master_seed, {kLoggingStream, rep});
    r.fixed_logging = MakeLoggingPolicy(test.size(), k, lrng);
  }
  r.test = std::move(test);
  return r;
}

double RunEstimator(EstimatorKind kind, const LoggedBanditData& data,
                    const PolicyMatrix& policy, const RewardPredictions* mu,
                    const spline::SplineSpec& spec, SwForm sw_form) {
  auto need_mu = [&]() -> const RewardPredictions& {
    if (!mu) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(EstimatorName(kind)) + " needs a reward model");
    }
    return *mu;
  };
  switch (kind) {
    case EstimatorKind::kDm: return Dm(data, policy, need_mu()).value;
    case EstimatorKind::kIpw: return Ipw(data, policy).value;
    case EstimatorKind::kSw: return Sw(data, policy, sw_form).value;
    case EstimatorKind::kDr: return Dr(data, policy, need_mu()).value;
    case EstimatorKind::kNw: return Nw(data, policy, spec).value;
    case EstimatorKind::kMnw: return Mnw(data, policy, need_mu(), spec).value;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown estimator");
}

}  // namespace

std::pair<ClassificationData, ClassificationData> SplitTrainTest(
    const ClassificationData& data, Rng& rng) {
  const std::size_t n = data.size();
  if (n < 4) throw Error(ErrorCode::kTooFewPoints, "need at least 4 rows to split");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::swap(perm[i], perm[i + rng.Index(n - i)]);
  }
  const std::size_t n_train = (n + 1) / 2;
  const std::span<const std::size_t> all(perm);
  return {SubsetData(data, all.first(n_train)), SubsetData(data, all.subspan(n_train))};
}

Matrix MakeLoggingPolicy(std::size_t n, std::size_t num_actions, Rng& rng) {
  if (num_actions < 2) throw Error(ErrorCode::kInvalidArgument, "K must be >= 2");
  Matrix p(n, num_actions);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> row = p.row(i);
    double sum = 0.0;
    for (double& v : row) {
      v = rng.Uniform();
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
  return p;
}

Matrix PerturbLogging(const Matrix& propensities, Rng& rng, double sd) {
  if (!(sd >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sd must be >= 0");
  Matrix out = propensities;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    std::span<double> row = out.row(i);
    double sum = 0.0;
    for (double& v : row) {
      const double delta = std::max(1.0 + sd * rng.Normal(), kMinPerturbFactor);
      v *= delta;
      sum += v;
    }
    if (!(sum > 0.0)) {
      throw Error(ErrorCode::kZeroPropensity,
                  "propensity row " + std::to_string(i) + " has no mass");
    }
    for (double& v : row) v /= sum;
  }
  return out;
}

std::size_t EstimationSubsetSize(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

Matrix EstimateLogging(const Matrix& features, std::span<const int> actions,
                       std::size_t num_actions, Rng& rng, double fraction,
                       double l2) {
  const std::size_t n = features.rows();
  if (actions.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "one action per row is required");
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must lie in (0, 1]");
  }
  const std::size_t m = EstimationSubsetSize(n, fraction);
  const std::vector<std::size_t> rows = SampleWithoutReplacement(n, m, rng);
  std::vector<int> sub_actions(m);
  for (std::size_t i = 0; i < m; ++i) sub_actions[i] = actions[rows[i]];
  LogisticOptions lo;
  lo.l2 = l2;
  const Classifier model = FitMultinomialLogistic(SubsetRows(features, rows),
                                                  sub_actions, num_actions, lo);
  Matrix p = PredictProba(model, features);
  FloorPropensities(p);
  return p;
}

Matrix DrawNoisyLosses(std::span<const int> labels, std::size_t num_actions,
                       double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  Matrix l(labels.size(), num_actions);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t a = 0; a < num_actions; ++a) {
      const double noise = sigma * rng.Normal();
      l(i, a) = (static_cast<int>(a) != labels[i] ? 1.0 : 0.0) + noise;
    }
  }
  return l;
}

std::string_view LoggingModeName(LoggingMode mode) {
  switch (mode) {
    case LoggingMode::kTrue: return "true";
    case LoggingMode::kPerturbed: return "perturbed";
    case LoggingMode::kEstimated: return "estimated";
  }
  return "unknown";
}

LoggingMode ParseLoggingMode(std::string_view name) {
  const std::string s = Lower(name);
  if (s == "true") return LoggingMode::kTrue;
  if (s == "perturbed") return LoggingMode::kPerturbed;
  if (s == "estimated") return LoggingMode::kEstimated;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown logging mode '" + std::string(name) +
                  "' (expected true, perturbed or estimated)");
}

std::string_view EstimatorName(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kDm: return "DM";
    case EstimatorKind::kIpw: return "IPW";
    case EstimatorKind::kSw: return "SW";
    case EstimatorKind::kDr: return "DR";
    case EstimatorKind::kNw: return "NW";
    case EstimatorKind::kMnw: return "MNW";
  }
  return "unknown";
}

EstimatorKind ParseEstimator(std::string_view name) {
  const std::string s = Lower(name);
  for (EstimatorKind k : {EstimatorKind::kDm, EstimatorKind::kIpw, EstimatorKind::kSw,
                          EstimatorKind::kDr, EstimatorKind::kNw, EstimatorKind::kMnw}) {
    if (s == Lower(EstimatorName(k))) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown estimator '" + std::string(name) + "'");
}

std::vector<EstimatorKind> ParseEstimatorList(std::string_view list) {
  std::vector<EstimatorKind> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string_view tok = list.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const std::size_t b = tok.find_first_not_of(' ');
    if (b == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "empty entry in estimator list");
    }
    const EstimatorKind k = ParseEstimator(tok.substr(b, tok.find_last_not_of(' ') - b + 1));
    if (std::find(out.begin(), out.end(), k) != out.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "estimator " + std::string(EstimatorName(k)) + " listed twice");
    }
    out.push_back(k);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void RunConfig::Validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (mc_iterations < 1) fail("mc_iterations must be >= 1");
  if (repetitions < 1) fail("repetitions must be >= 1");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
  if (estimators.empty()) fail("no estimators configured");
  if (!(logistic_l2 > 0.0) || !(ridge_l2 > 0.0)) fail("l2 strengths must be > 0");
  if (!(perturb_sd >= 0.0)) fail("perturb_sd must be >= 0");
  if (!(estimate_fraction > 0.0 && estimate_fraction <= 1.0)) {
    fail("estimate_fraction must lie in (0, 1]");
  }
  if (eval_sample_size && *eval_sample_size < 1) fail("eval_sample_size must be >= 1");
  if (threads < 0) fail("threads must be >= 0");
  spline.Validate();
}

ErrorStats ComputeErrorStats(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorCode::kEmptyInput, "no errors to summarize");
  const double n = static_cast<double>(errors.size());
  ErrorStats s;
  s.bias = kernels::Sum(errors) / n;
  double ss = 0.0, sq = 0.0;
  for (double e : errors) {
    ss += (e - s.bias) * (e - s.bias);
    sq += e * e;
  }
  s.sd = std::sqrt(ss / n);
  s.rmse = std::sqrt(sq / n);
  return s;
}

const ErrorStats& EvalSummary::Get(std::string_view estimator) const {
  for (std::size_t k = 0; k < estimators.size(); ++k) {
    if (estimators[k] == estimator) return aggregate[k];
  }
  throw Error(ErrorCode::kInvalidArgument,
              "estimator " + std::string(estimator) + " not in summary");
}

EvalSummary RunMonteCarlo(const RunConfig& config, const ClassificationData& data) {
  config.Validate();
  const std::size_t k = data.num_classes;
  const std::size_t pool = data.size() - (data.size() + 1) / 2;
  const std::size_t m = config.eval_sample_size.value_or(pool);
  if (m > pool) {
    throw Error(ErrorCode::kSizeTooLarge,
                "evaluation size " + std::to_string(m) + " exceeds the test split (" +
                    std::to_string(pool) + " rows)");
  }
  const int threads = ResolveThreads(config.threads);

  EvalSummary s;
  s.condition = config.dataset.empty() ? data.name : config.dataset;
  s.logging_mode = std::string(LoggingModeName(config.logging_mode));
  for (EstimatorKind e : config.estimators) s.estimators.emplace_back(EstimatorName(e));
  s.mc_iterations = config.mc_iterations;
  s.seed = config.master_seed;
  s.repetitions.resize(config.repetitions);

  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const Repetition r = PrepareRepetition(config, data, rep);
    RepetitionRecord& record = s.repetitions[rep];
    record.ground_truth = r.truth;
    record.errors = Matrix(config.mc_iterations, config.estimators.size());

    ParallelFor(config.mc_iterations, threads, [&](std::size_t t) {
      std::vector<std::size_t> rows;
      if (m == pool) {
        rows.resize(pool);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
      } else {
        Rng sub(config.master_seed, {kSubsampleStream, rep, t});
        rows = SampleWithoutReplacement(pool, m, sub);
      }
      Rng rng(config.master_seed, {kIterationStream, rep, t});
      const Matrix features = SubsetRows(r.test.features, rows);
      std::vector<int> labels(m);
      for (std::size_t i = 0; i < m; ++i) labels[i] = r.test.labels[rows[i]];

      const Matrix logging = config.redraw_logging
                                 ? MakeLoggingPolicy(m, k, rng)
                                 : SubsetRows(r.fixed_logging, rows);
      std::vector<int> actions(m);
      for (std::size_t i = 0; i < m; ++i) {
        actions[i] = static_cast<int>(rng.Categorical(logging.row(i)));
      }
      const Matrix losses = DrawNoisyLosses(labels, k, config.noise_sigma, rng);
      std::vector<double> observed(m);
      for (std::size_t i = 0; i < m; ++i) observed[i] = losses(i, actions[i]);

      Matrix estimation;
      switch (config.logging_mode) {
        case LoggingMode::kTrue:
          estimation = logging;
          break;
        case LoggingMode::kPerturbed:
          estimation = PerturbLogging(logging, rng, config.perturb_sd);
          break;
        case LoggingMode::kEstimated:
          estimation = EstimateLogging(features, actions, k, rng,
                                       config.estimate_fraction, config.logistic_l2);
          break;
      }
      const LoggedBanditData logged = MakeLoggedData(
          features, std::move(actions), std::move(observed), std::move(estimation));
      const PolicyMatrix target{SubsetRows(r.target.probs, rows)};
      const RewardPredictions mu{SubsetRows(r.mu.mu_hat, rows)};
      for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        record.errors(t, e) = RunEstimator(config.estimators[e], logged, target, &mu,
                                           config.spline, config.sw_form) -
                              r.truth;
      }
    });
  }
  FillStats(s);
  return s;
}

void SyntheticConfig::Validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (n < 1) fail("n must be >= 1");
  if (num_actions < 2) fail("K must be >= 2");
  if (iterations < 1) fail("iterations must be >= 1");
  if (estimators.empty()) fail("no estimators configured");
  if (threads < 0) fail("threads must be >= 0");
  for (EstimatorKind e : estimators) {
    const bool needs_model = e == EstimatorKind::kDm || e == EstimatorKind::kDr ||
                             e == EstimatorKind::kMnw;
    if (needs_model && example == SyntheticExample::kExample1) {
      fail(std::string(EstimatorName(e)) + " needs a reward model, which example 1 "
           "does not define");
    }
  }
  if (example == SyntheticExample::kExample2) {
    if (betas.empty()) fail("no baseline coefficients configured");
    for (double b : betas) {
      if (!(b >= 0.0 && b <= 1.0)) fail("beta must lie in [0, 1]");
    }
  }
  spline.Validate();
}

EvalSummary RunSyntheticMonteCarlo(const SyntheticConfig& config) {
  config.Validate();
  const bool ex2 = config.example == SyntheticExample::kExample2;

  // Columns: model-free estimators once, model-based ones once per beta.
  struct Column {
    EstimatorKind kind;
    int beta_index;  // -1 when no reward model is used
  };
  std::vector<Column> columns;
  EvalSummary s;
  for (EstimatorKind e : config.estimators) {
    const bool needs_model = e == EstimatorKind::kDm || e == EstimatorKind::kDr ||
                             e == EstimatorKind::kMnw;
    if (!needs_model) {
      columns.push_back({e, -1});
      s.estimators.emplace_back(EstimatorName(e));
      continue;
    }
    for (std::size_t b = 0; b < config.betas.size(); ++b) {
      columns.push_back({e, static_cast<int>(b)});
      s.estimators.push_back(BetaLabel(EstimatorName(e), config.betas[b]));
    }
  }
  s.condition = std::string(ex2 ? "example2/" : "example1/") +
                std::string(ScenarioName(config.scenario));
  s.logging_mode = "true";
  s.mc_iterations = config.iterations;
  s.seed = config.master_seed;
  s.repetitions.resize(1);
  RepetitionRecord& record = s.repetitions[0];
  record.errors = Matrix(config.iterations, columns.size());

  const std::uint64_t example_key = ex2 ? 2 : 1;
  const std::uint64_t scenario_key = static_cast<std::uint64_t>(config.scenario);
  double truth_sum = 0.0;
  std::vector<double> truths(config.iterations);
  ParallelFor(config.iterations, ResolveThreads(config.threads), [&](std::size_t t) {
    Rng rng(config.master_seed, {kSyntheticStream, example_key, scenario_key, t});
    SyntheticProblem p;
    std::vector<RewardPredictions> mus;
    if (ex2) {
      p = GenExample2(config.n, config.num_actions, config.scenario, 1.0, rng).first;
      for (double beta : config.betas) {
        RewardPredictions mu{p.baseline};
        for (double& v : mu.mu_hat.values()) v *= beta;
        mus.push_back(std::move(mu));
      }
    } else {
      p = GenExample1(config.n, config.num_actions, config.scenario, rng);
    }
    truths[t] = p.true_value;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const RewardPredictions* mu =
          columns[c].beta_index >= 0 ? &mus[columns[c].beta_index] : nullptr;
      record.errors(t, c) = RunEstimator(columns[c].kind, p.data, p.policy, mu,
                                         config.spline, config.sw_form) -
                            p.true_value;
    }
  });
  for (double v : truths) truth_sum += v;
  record.ground_truth = truth_sum / static_cast<double>(config.iterations);
  FillStats(s);
  return s;
}

std::vector<SweepPoint> SweepPoints(const EvalSummary& summary, std::size_t size) {
  std::vector<SweepPoint> out;
  const std::size_t reps = summary.repetitions.size();
  for (std::size_t k = 0; k < summary.estimators.size(); ++k) {
    SweepPoint p;
    p.size = size;
    p.estimator = summary.estimators[k];
    p.bias = summary.aggregate[k].bias;
    p.rmse = summary.aggregate[k].rmse;
    if (reps >= 2) {
      std::vector<double> b(reps), r(reps);
      for (std::size_t i = 0; i < reps; ++i) {
        b[i] = summary.repetitions[i].stats[k].bias;
        r[i] = summary.repetitions[i].stats[k].rmse;
      }
      const double root = std::sqrt(static_cast<double>(reps));
      p.bias_se = SampleSd(b) / root;
      p.rmse_se = SampleSd(r) / root;
    } else {
      const std::vector<double> e = Column(summary.repetitions[0].errors, k);
      std::vector<double> sq(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) sq[i] = e[i] * e[i];
      const double root = std::sqrt(static_cast<double>(e.size()));
      p.bias_se = SampleSd(e) / root;
      // Delta method: se(sqrt(m)) = se(m) / (2 sqrt(m)).
      p.rmse_se = p.rmse > 0.0 ? SampleSd(sq) / root / (2.0 * p.rmse) : 0.0;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SweepPoint> SampleSizeSweep(const RunConfig& config,
                                        const ClassificationData& data,
                                        std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "no sweep sizes");
  const std::size_t pool = data.size() - (data.size() + 1) / 2;
  for (std::size_t size : sizes) {
    if (size > pool) {
      throw Error(ErrorCode::kSizeTooLarge,
                  "sweep size " + std::to_string(size) + " exceeds the test split (" +
                      std::to_string(pool) + " rows)");
    }
  }
  std::vector<SweepPoint> out;
  for (std::size_t size : sizes) {
    RunConfig c = config;
    c.eval_sample_size = size;
    const std::vector<SweepPoint> pts = SweepPoints(RunMonteCarlo(c, data), size);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::vector<SweepPoint> SyntheticSweep(const SyntheticConfig& config,
                                       std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "no sweep sizes");
  std::vector<SweepPoint> out;
  for (std::size_t size : sizes) {
    SyntheticConfig c = config;
    c.n = size;
    const std::vector<SweepPoint> pts = SweepPoints(RunSyntheticMonteCarlo(c), size);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

}  // namespace opekit
