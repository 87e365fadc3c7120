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
#include "opekit/selftest.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "opekit/estimators.h"
#include "opekit/kernels.h"
#include "opekit/spline.h"
#include "opekit/synthetic.h"

namespace opekit {

namespace {

// Kept apart from the harness streams.
constexpr std::uint64_t kBlobStream = 101;
constexpr std::uint64_t kPropertyStream = 102;

PropertyResult Check(std::string name, double deviation, double tolerance) {
  return {std::move(name), deviation <= tolerance, deviation, tolerance};
}

// Dense Gauss-Jordan elimination with partial pivoting.
std::vector<double> GaussJordanSolve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0.0) continue;
      const double f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a(i, i);
  return b;
}

PropertyResult PartitionOfUnity(Rng& rng) {
  double worst = 0.0;
  for (int degree = 1; degree <= 5; ++degree) {
    for (int segments = 1; segments <= 12; segments += 3) {
      const double lo = rng.Normal(0.0, 3.0);
      const double hi = lo + 0.01 + 5.0 * rng.Uniform();
      const auto knots = spline::KnotVector::Uniform(lo, hi, segments, degree);
      for (int t = 0; t <= 400; ++t) {
        const double x = t == 400 ? hi : lo + (hi - lo) * rng.Uniform();
        const auto b = spline::EvalBasis(knots, degree, x);
        double s = 0.0;
        for (double v : b) {
          if (v < 0.0) worst = std::max(worst, -v);
          s += v;
        }
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
  }
  return Check("spline_partition_of_unity", worst, 1e-12);
}

std::vector<double> UniformDraws(std::size_t n, double lo, double hi, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = lo + (hi - lo) * rng.Uniform();
  return x;
}

PropertyResult ConstantReproduction(Rng& rng) {
  double worst = 0.0;
  for (int degree : {1, 2, 3}) {
    const auto x = UniformDraws(200, -1.0, 2.0, rng);
    const std::vector<double> y(x.size(), 2.5);
    spline::SplineSpec spec;
    spec.degree = degree;
    const auto fit = spline::FitPSpline(x, y, spec);
    for (double t = -1.0; t <= 2.0; t += 0.01) {
      worst = std::max(worst, std::abs(spline::Predict(fit, t) - 2.5));
    }
  }
  return Check("spline_constant_reproduction", worst, 1e-8);
}

PropertyResult LargeLambdaLimit(Rng& rng) {
  const auto x = UniformDraws(300, 0.0, 1.0, rng);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = std::sin(6.0 * x[i]) + 0.1 * rng.Normal();
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  spline::SplineSpec spec;
  spec.lambda_fixed = 1e8;
  const auto fit = spline::FitPSpline(x, y, spec);
  double worst = 0.0;
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    worst = std::max(worst, std::abs(spline::Predict(fit, t) - mean));
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return Check("spline_large_lambda_constant_limit", worst, 1e-3 * (*hi - *lo));
}

PropertyResult NormalEquationOracle(Rng& rng) {
  double worst = 0.0;
  for (int order : {1, 2, 3}) {
    const auto x = UniformDraws(120, -2.0, 3.0, rng);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * x[i] + rng.Normal();
    spline::SplineSpec spec;
    spec.penalty_order = order;
    const spline::PenalizedProblem problem(x, y, spec);
    const auto& knots = problem.knots();
    const std::size_t m = knots.dimension();
    // Explicit design, difference matrix and normal equations.
    Matrix b(x.size(), m);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto row = spline::EvalBasis(knots, spec.degree, x[i]);
      std::copy(row.begin(), row.end(), b.row(i).begin());
    }
    Matrix d(m - order, m);
    for (std::size_t r = 0; r + order < m; ++r) {
      double binom = 1.0;
      for (int j = 0; j <= order; ++j) {
        d(r, r + j) = ((order - j) % 2 == 0 ? 1.0 : -1.0) * binom;
        binom = binom * (order - j) / (j + 1);
      }
    }
    for (double lambda : {1e-3, 1.0, 100.0}) {
      Matrix a = Multiply(b.Transposed(), b);
      const Matrix dtd = Multiply(d.Transposed(), d);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) += lambda * dtd(i, j);
        a(i, i) += spline::kRidgeJitter;
      }
      const auto beta = GaussJordanSolve(a, Multiply(b.Transposed(), y));
      const auto got = problem.Solve(lambda).coefficients;
      double scale = 1.0;
      for (double v : beta) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < m; ++i) {
        worst = std::max(worst, std::abs(got[i] - beta[i]) / scale);
      }
    }
  }
  return Check("spline_normal_equation_oracle", worst, 1e-9);
}

LoggedBanditData WithRewards(const LoggedBanditData& data, std::vector<double> r) {
  return MakeLoggedData(data.features, data.chosen_action, std::move(r),
                        data.propensities);
}

std::vector<PropertyResult> EstimatorIdentities(Rng& rng) {
  std::vector<PropertyResult> out;
  const auto problem = GenExample1(300, 20, Scenario::kUnsorted, rng);
  const auto& data = problem.data;
  const RewardPredictions zero{Matrix(data.size(), data.num_actions, 0.0)};
  spline::SplineSpec fixed;
  fixed.lambda_fixed = 0.5;

  out.push_back(Check("dr_with_zero_model_equals_ipw",
                      std::abs(Dr(data, problem.policy, zero).value -
                               Ipw(data, problem.policy).value),
                      1e-12));
  out.push_back(Check("mnw_with_zero_model_equals_nw",
                      std::abs(Mnw(data, problem.policy, zero, fixed).value -
                               Nw(data, problem.policy, fixed).value),
                      1e-12));

  std::vector<double> r2(data.size());
  for (double& v : r2) v = rng.Normal(1.0, 2.0);
  const double a = 1.7, c = -0.6;
  std::vector<double> mix(data.size());
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix[i] = a * data.observed_reward[i] + c * r2[i];
  }
  const double lhs = Nw(WithRewards(data, mix), problem.policy, fixed).value;
  const double rhs = a * Nw(data, problem.policy, fixed).value +
                     c * Nw(WithRewards(data, r2), problem.policy, fixed).value;
  out.push_back(Check("nw_reward_linearity", std::abs(lhs - rhs), 1e-9));

  const PolicyMatrix same = PolicyMatrix::FromMatrix(data.propensities);
  const double mean = kernels::Sum(data.observed_reward) /
                      static_cast<double>(data.size());
  out.push_back(Check("ipw_weight_cancellation",
                      std::abs(Ipw(data, same).value - mean), 0.0));
  return out;
}

double RmseIdentityGap(const EvalSummary& s) {
  double worst = 0.0;
  for (const auto& rep : s.repetitions) {
    for (const auto& st : rep.stats) {
      worst = std::max(worst,
                       std::abs(st.rmse * st.rmse - (st.bias * st.bias + st.sd * st.sd)));
    }
  }
  return worst;
}

bool SameBits(const EvalSummary& a, const EvalSummary& b) {
  if (a.repetitions.size() != b.repetitions.size()) return false;
  for (std::size_t r = 0; r < a.repetitions.size(); ++r) {
    if (a.repetitions[r].ground_truth != b.repetitions[r].ground_truth ||
        !(a.repetitions[r].errors == b.repetitions[r].errors)) {
      return false;
    }
  }
  for (std::size_t k = 0; k < a.aggregate.size(); ++k) {
    if (a.aggregate[k].bias != b.aggregate[k].bias ||
        a.aggregate[k].sd != b.aggregate[k].sd ||
        a.aggregate[k].rmse != b.aggregate[k].rmse) {
      return false;
    }
  }
  return true;
}

std::vector<PropertyResult> HarnessProperties(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  const ClassificationData blobs = MakeBlobData(240, 4, 3, 1.0, seed);
  RunConfig config;
  config.mc_iterations = 24;
  config.repetitions = 2;
  config.master_seed = seed;
  config.estimators = {EstimatorKind::kDm, EstimatorKind::kIpw, EstimatorKind::kSw,
                       EstimatorKind::kDr, EstimatorKind::kNw, EstimatorKind::kMnw};
  config.threads = 1;
  const EvalSummary serial = RunMonteCarlo(config, blobs);
  config.threads = 4;
  const EvalSummary parallel = RunMonteCarlo(config, blobs);

  SyntheticConfig synth;
  synth.example = SyntheticExample::kExample2;
  synth.iterations = 40;
  synth.master_seed = seed;
  synth.estimators = {EstimatorKind::kSw, EstimatorKind::kIpw, EstimatorKind::kNw,
                      EstimatorKind::kDr, EstimatorKind::kMnw};
  synth.threads = 1;
  const EvalSummary synth_serial = RunSyntheticMonteCarlo(synth);
  synth.threads = 4;
  const EvalSummary synth_parallel = RunSyntheticMonteCarlo(synth);

  out.push_back(Check("rmse_squared_equals_bias_squared_plus_var",
                      std::max(RmseIdentityGap(serial), RmseIdentityGap(synth_serial)),
                      1e-8));
  const bool same = SameBits(serial, parallel) && SameBits(synth_serial, synth_parallel);
  out.push_back(Check("serial_parallel_bitwise_reproducible", same ? 0.0 : 1.0, 0.0));
  return out;
}

}  // namespace

ClassificationData MakeBlobData(std::size_t n, std::size_t d, std::size_t num_classes,
                                double spread, std::uint64_t seed) {
  Rng rng(seed, {kBlobStream});
  Matrix centers(num_classes, d);
  for (double& v : centers.values()) v = rng.Normal();
  ClassificationData data;
  data.name = "blobs";
  data.num_classes = num_classes;
  data.features = Matrix(n, d);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i % num_classes;
    data.labels[i] = static_cast<int>(k);
    for (std::size_t j = 0; j < d; ++j) {
      data.features(i, j) = centers(k, j) + spread * rng.Normal();
    }
  }
  for (std::size_t k = 0; k < num_classes; ++k) {
    data.class_names.push_back(std::to_string(k));
  }
  return data;
}

std::vector<PropertyResult> RunPropertySuite(std::uint64_t seed) {
  Rng rng(seed, {kPropertyStream});
  std::vector<PropertyResult> out;
  out.push_back(PartitionOfUnity(rng));
  out.push_back(ConstantReproduction(rng));
  out.push_back(LargeLambdaLimit(rng));
  out.push_back(NormalEquationOracle(rng));
  for (auto& r : EstimatorIdentities(rng)) out.push_back(std::move(r));
  for (auto& r : HarnessProperties(seed)) out.push_back(std::move(r));
  return out;
}

}  // namespace opekit
