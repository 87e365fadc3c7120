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
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "opekit/error.h"
#include "opekit/estimators.h"
#include "opekit/harness.h"
#include "opekit/selftest.h"

namespace opekit {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kEmptyInput;
}

ClassificationData Parse(const std::string& text, const DatasetSchema& schema = {}) {
  std::istringstream in(text);
  return ParseDataset(in, schema, "inline");
}

TEST(Dataset, ParsesHandWrittenCsv) {
  const auto d = Parse("a,b,label\n1.5,-2,x\n0,3e2,y\n7,8,x\n");
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.features, Matrix::FromRows({{1.5, -2}, {0, 300}, {7, 8}}));
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(d.class_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(d.num_classes, 2u);
}

TEST(Dataset, NumericLabelsOrderNumerically) {
  const auto d = Parse("1 2 10\n3 4 9\n5 6 10\n");
  EXPECT_EQ(d.class_names, (std::vector<std::string>{"9", "10"}));
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0, 1}));
}

TEST(Dataset, LabelColumnAndDelimiterFromSchema) {
  DatasetSchema s;
  s.label_column = 0;
  s.delimiter = ';';
  s.n = 2;
  s.d = 2;
  s.num_classes = 2;
  const auto d = Parse("b;1;2\na;3;4\n", s);
  EXPECT_EQ(d.features, Matrix::FromRows({{1, 2}, {3, 4}}));
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0}));
}

TEST(Dataset, Errors) {
  DatasetSchema s;
  s.n = 5;
  EXPECT_EQ(CodeOf([&] { Parse("1,2,a\n3,4,b\n", s); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(CodeOf([] { Parse("1,2,a\n3,x,b\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Parse("1,2,a\n3,b\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Parse(""); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { LoadDataset("/nonexistent/file.csv"); }), ErrorCode::kIoError);
}

std::string DataFile(const char* name) {
  return std::string(OPEKIT_DATA_DIR) + "/" + name;
}

TEST(Dataset, BundledBenchmarks) {
  struct Expect {
    const char* name;
    std::size_t n, d, k;
  };
  for (const Expect& e : {Expect{"glass", 214, 9, 6}, Expect{"ecoli", 336, 7, 8},
                          Expect{"vehicle", 846, 18, 4}, Expect{"sat", 6435, 36, 6}}) {
    const std::string csv = DataFile(e.name) + std::string(".csv");
    if (!std::filesystem::exists(csv)) continue;
    const auto d = LoadDataset(csv, LoadSchema(DataFile(e.name) + std::string(".json")));
    EXPECT_EQ(d.size(), e.n) << e.name;
    EXPECT_EQ(d.features.cols(), e.d) << e.name;
    EXPECT_EQ(d.num_classes, e.k) << e.name;
  }
}

TEST(Split, SizesAndDeterminism) {
  for (auto [n, train] : {std::pair<std::size_t, std::size_t>{10, 5}, {11, 6}}) {
    const auto data = MakeBlobData(n, 2, 2, 1.0, 1);
    Rng a(3), b(3);
    const auto [tr, te] = SplitTrainTest(data, a);
    const auto [tr2, te2] = SplitTrainTest(data, b);
    EXPECT_EQ(tr.size(), train);
    EXPECT_EQ(te.size(), n - train);
    EXPECT_EQ(tr.features, tr2.features);
    EXPECT_EQ(te.labels, te2.labels);
    // The halves partition the rows.
    std::multiset<double> all, split;
    for (std::size_t i = 0; i < n; ++i) all.insert(data.features(i, 0));
    for (std::size_t i = 0; i < tr.size(); ++i) split.insert(tr.features(i, 0));
    for (std::size_t i = 0; i < te.size(); ++i) split.insert(te.features(i, 0));
    EXPECT_EQ(all, split);
  }
}

TEST(Logging, RandomPolicyRows) {
  Rng rng(4);
  const std::size_t n = 20000, k = 5;
  const Matrix p = MakeLoggingPolicy(n, k, rng);
  std::vector<double> marginal(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      EXPECT_GT(p(i, a), 0.0);
      EXPECT_LT(p(i, a), 1.0);
      s += p(i, a);
      marginal[a] += p(i, a) / n;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  for (double m : marginal) EXPECT_NEAR(m, 0.2, 0.01);
}

TEST(Logging, PerturbationIdentityAndSize) {
  Rng rng(5);
  const Matrix p = MakeLoggingPolicy(50, 4, rng);
  const Matrix same = PerturbLogging(p, rng, 0.0);
  for (std::size_t j = 0; j < p.values().size(); ++j)
    EXPECT_NEAR(same.values()[j], p.values()[j], 1e-15);
  // Uniform rows of 1000 arms: after renormalization entry / (1/K) is
  // delta / mean(delta), and mean |delta - 1| = 0.3 sqrt(2 / pi) = 0.239.
  const std::size_t n = 100, k = 1000;
  const Matrix flat(n, k, 1.0 / k);
  const Matrix q = PerturbLogging(flat, rng, 0.3);
  double distortion = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      s += q(i, a);
      distortion += std::abs(q(i, a) * k - 1.0);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_NEAR(distortion / (n * k), 0.3 * std::sqrt(2.0 / M_PI), 0.01);
}

TEST(Logging, EstimatedPropensitiesApproachFrequencies) {
  Rng rng(6);
  const std::size_t n = 800, k = 3;
  const auto blobs = MakeBlobData(n, 3, 2, 1.0, 7);
  const std::vector<double> policy = {0.5, 0.3, 0.2};
  std::vector<int> actions(n);
  std::vector<double> freq(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    actions[i] = static_cast<int>(rng.Categorical(policy));
    freq[actions[i]] += 1.0 / n;
  }
  ASSERT_GE(EstimationSubsetSize(n), 500u);
  const Matrix p = EstimateLogging(blobs.features, actions, k, rng);
  // The fitted slopes only pick up sampling noise, so rows sit near the
  // action frequencies on average and never stray far.
  double mean_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      EXPECT_LE(std::abs(p(i, a) - freq[a]), 0.15);
      mean_dev += std::abs(p(i, a) - freq[a]) / (n * k);
      s += p(i, a);
    }
    EXPECT_NEAR(s, 1.0, 1e-8);
  }
  EXPECT_LE(mean_dev, 0.03);
}

TEST(Logging, EstimationSubsetSize) {
  EXPECT_EQ(EstimationSubsetSize(2737), 2052u);
  EXPECT_EQ(EstimationSubsetSize(2736), 2052u);
  EXPECT_EQ(EstimationSubsetSize(4), 3u);
}

TEST(Losses, NoiselessAndNoiseScale) {
  Rng rng(8);
  const std::vector<int> labels = {0, 2, 1};
  EXPECT_EQ(DrawNoisyLosses(labels, 3, 0.0, rng),
            Matrix::FromRows({{0, 1, 1}, {1, 1, 0}, {1, 0, 1}}));
  const std::vector<int> many(25000, 1);
  const Matrix l = DrawNoisyLosses(many, 4, 0.2, rng);
  double ss = 0.0;
  std::vector<double> col(4, 0.0);
  for (std::size_t i = 0; i < many.size(); ++i) {
    for (std::size_t a = 0; a < 4; ++a) {
      const double e = l(i, a) - (a == 1 ? 0.0 : 1.0);
      ss += e * e;
      col[a] += l(i, a) / many.size();
    }
  }
  EXPECT_NEAR(std::sqrt(ss / (4.0 * many.size())), 0.2, 0.005);
  for (std::size_t a = 0; a < 4; ++a) {
    EXPECT_NEAR(col[a], a == 1 ? 0.0 : 1.0, 3 * 0.2 / std::sqrt(25000.0));
  }
}

TEST(Stats, HandValuesAndIdentity) {
  const std::vector<double> e = {1.0, -1.0, 3.0};
  const ErrorStats s = ComputeErrorStats(e);
  EXPECT_DOUBLE_EQ(s.bias, 1.0);
  EXPECT_DOUBLE_EQ(s.sd, std::sqrt(8.0 / 3.0));
  EXPECT_DOUBLE_EQ(s.rmse, std::sqrt(11.0 / 3.0));
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(1 + t * 7);
    for (double& x : v) x = rng.Normal(0.3, 2.0);
    const ErrorStats st = ComputeErrorStats(v);
    EXPECT_NEAR(st.rmse * st.rmse, st.bias * st.bias + st.sd * st.sd, 1e-8);
  }
}

TEST(Ipw, UnbiasedWhenTargetIsLogging) {
  // pi = p and noiseless losses: the IPW error has mean zero.
  const std::size_t n = 100, k = 4, draws = 2000;
  std::vector<double> err(draws);
  for (std::size_t t = 0; t < draws; ++t) {
    Rng rng(10, {t});
    std::vector<int> labels(n);
    for (int& c : labels) c = static_cast<int>(rng.Index(k));
    const Matrix p = MakeLoggingPolicy(n, k, rng);
    std::vector<int> actions(n);
    for (std::size_t i = 0; i < n; ++i) actions[i] = static_cast<int>(rng.Categorical(p.row(i)));
    const Matrix l = DrawNoisyLosses(labels, k, 0.0, rng);
    std::vector<double> observed(n);
    double truth = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      observed[i] = l(i, actions[i]);
      for (std::size_t a = 0; a < k; ++a) truth += p(i, a) * l(i, a) / n;
    }
    const auto data = MakeLoggedData(Matrix(n, 0), actions, observed, p);
    err[t] = Ipw(data, PolicyMatrix::FromMatrix(data.propensities)).value - truth;
  }
  const ErrorStats s = ComputeErrorStats(err);
  EXPECT_LE(std::abs(s.bias), 3.0 * s.sd / std::sqrt(static_cast<double>(draws)));
}

TEST(Parse, NamesAndLists) {
  EXPECT_EQ(ParseLoggingMode("Perturbed"), LoggingMode::kPerturbed);
  EXPECT_EQ(CodeOf([] { ParseLoggingMode("fake"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ParseEstimatorList("dm, IPW,mnw"),
            (std::vector<EstimatorKind>{EstimatorKind::kDm, EstimatorKind::kIpw,
                                        EstimatorKind::kMnw}));
  EXPECT_EQ(CodeOf([] { ParseEstimatorList("NW,nw"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ParseEstimatorList("NW,,DR"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ParseEstimator("SNIPS"); }), ErrorCode::kInvalidArgument);
}

RunConfig SmallConfig() {
  RunConfig c;
  c.mc_iterations = 16;
  c.repetitions = 2;
  c.master_seed = 21;
  c.estimators = {EstimatorKind::kDm, EstimatorKind::kIpw, EstimatorKind::kSw,
                  EstimatorKind::kDr, EstimatorKind::kNw, EstimatorKind::kMnw};
  return c;
}

TEST(MonteCarlo, SummaryShapeAndIdentity) {
  const auto data = MakeBlobData(200, 3, 3, 1.0, 11);
  const EvalSummary s = RunMonteCarlo(SmallConfig(), data);
  EXPECT_EQ(s.estimators, (std::vector<std::string>{"DM", "IPW", "SW", "DR", "NW", "MNW"}));
  EXPECT_EQ(s.repetitions.size(), 2u);
  EXPECT_EQ(s.logging_mode, "true");
  EXPECT_EQ(s.condition, "blobs");
  for (const auto& rep : s.repetitions) {
    EXPECT_EQ(rep.errors.rows(), 16u);
    EXPECT_GE(rep.ground_truth, 0.0);
    EXPECT_LE(rep.ground_truth, 1.0);
    for (const auto& st : rep.stats) {
      EXPECT_NEAR(st.rmse * st.rmse, st.bias * st.bias + st.sd * st.sd, 1e-8);
    }
  }
  EXPECT_NEAR(s.Get("NW").rmse,
              (s.repetitions[0].stats[4].rmse + s.repetitions[1].stats[4].rmse) / 2, 1e-15);
  EXPECT_EQ(CodeOf([&] { s.Get("XX"); }), ErrorCode::kInvalidArgument);
}

TEST(MonteCarlo, BitwiseReproducibleAcrossThreadCounts) {
  const auto data = MakeBlobData(180, 4, 4, 1.2, 12);
  for (LoggingMode mode : {LoggingMode::kTrue, LoggingMode::kPerturbed,
                           LoggingMode::kEstimated}) {
    RunConfig c = SmallConfig();
    c.logging_mode = mode;
    c.threads = 1;
    const EvalSummary a = RunMonteCarlo(c, data);
    c.threads = 3;
    const EvalSummary b = RunMonteCarlo(c, data);
    for (std::size_t r = 0; r < a.repetitions.size(); ++r) {
      EXPECT_EQ(a.repetitions[r].errors, b.repetitions[r].errors);
    }
  }
}

TEST(MonteCarlo, FixedLoggingModeRuns) {
  const auto data = MakeBlobData(120, 2, 3, 1.0, 13);
  RunConfig c = SmallConfig();
  c.redraw_logging = false;
  const EvalSummary s = RunMonteCarlo(c, data);
  for (const auto& st : s.aggregate) EXPECT_TRUE(std::isfinite(st.rmse));
}

TEST(MonteCarlo, ConfigValidation) {
  const auto data = MakeBlobData(100, 2, 2, 1.0, 14);
  RunConfig c = SmallConfig();
  c.mc_iterations = 0;
  EXPECT_EQ(CodeOf([&] { RunMonteCarlo(c, data); }), ErrorCode::kInvalidArgument);
  c = SmallConfig();
  c.estimators.clear();
  EXPECT_EQ(CodeOf([&] { RunMonteCarlo(c, data); }), ErrorCode::kInvalidArgument);
  c = SmallConfig();
  c.eval_sample_size = 51;
  EXPECT_EQ(CodeOf([&] { RunMonteCarlo(c, data); }), ErrorCode::kSizeTooLarge);
}

TEST(Sweep, FullSizeMatchesPlainRun) {
  const auto data = MakeBlobData(160, 3, 3, 1.0, 15);
  const RunConfig c = SmallConfig();
  const EvalSummary plain = RunMonteCarlo(c, data);
  const std::vector<std::size_t> sizes = {80};
  const auto pts = SampleSizeSweep(c, data, sizes);
  ASSERT_EQ(pts.size(), plain.estimators.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    EXPECT_EQ(pts[k].estimator, plain.estimators[k]);
    EXPECT_EQ(pts[k].rmse, plain.aggregate[k].rmse);
    EXPECT_EQ(pts[k].bias, plain.aggregate[k].bias);
    EXPECT_GE(pts[k].rmse_se, 0.0);
  }
  const std::vector<std::size_t> too_big = {81};
  EXPECT_EQ(CodeOf([&] { SampleSizeSweep(c, data, too_big); }), ErrorCode::kSizeTooLarge);
}

TEST(Sweep, SubsamplesGiveOnePointPerSizeAndEstimator) {
  const auto data = MakeBlobData(200, 3, 3, 1.0, 16);
  RunConfig c = SmallConfig();
  c.estimators = {EstimatorKind::kIpw, EstimatorKind::kNw};
  const std::vector<std::size_t> sizes = {30, 60, 100};
  const auto pts = SampleSizeSweep(c, data, sizes);
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[0].size, 30u);
  EXPECT_EQ(pts[5].size, 100u);
  EXPECT_EQ(pts[5].estimator, "NW");
}

TEST(Sweep, SyntheticNwErrorShrinksWithSampleSize) {
  SyntheticConfig c;
  c.scenario = Scenario::kDecreasing;
  c.iterations = 400;
  c.estimators = {EstimatorKind::kNw};
  c.master_seed = 17;
  const std::vector<std::size_t> sizes = {300, 1200};
  const auto pts = SyntheticSweep(c, sizes);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT(pts[1].rmse, pts[0].rmse);
  EXPECT_GT(pts[0].rmse_se, 0.0);
}

TEST(Synthetic, ExampleTwoLabelsPerBeta) {
  SyntheticConfig c;
  c.example = SyntheticExample::kExample2;
  c.iterations = 20;
  c.estimators = {EstimatorKind::kNw, EstimatorKind::kMnw, EstimatorKind::kDr};
  const EvalSummary s = RunSyntheticMonteCarlo(c);
  EXPECT_EQ(s.estimators, (std::vector<std::string>{"NW", "MNW(beta=0.5)", "MNW(beta=1)",
                                                    "DR(beta=0.5)", "DR(beta=1)"}));
  EXPECT_EQ(s.condition, "example2/decreasing");
  SyntheticConfig bad;
  bad.estimators = {EstimatorKind::kDm};
  EXPECT_EQ(CodeOf([&] { RunSyntheticMonteCarlo(bad); }), ErrorCode::kInvalidArgument);
}

TEST(Parallel, CoversEveryIndexOnce) {
  for (int threads : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(97);
    ParallelFor(97, threads, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  ParallelFor(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  for (int threads : {1, 4}) {
    try {
      ParallelFor(50, threads, [](std::size_t i) {
        if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "7");
    }
  }
}

TEST(Parallel, ThreadResolution) {
  EXPECT_EQ(ResolveThreads(3), 3);
  ::setenv("OPE_KIT_THREADS", "2", 1);
  EXPECT_EQ(ResolveThreads(0), 2);
  ::setenv("OPE_KIT_THREADS", "-1", 1);
  EXPECT_EQ(CodeOf([] { ResolveThreads(0); }), ErrorCode::kInvalidArgument);
  ::setenv("OPE_KIT_THREADS", "0", 1);
  EXPECT_GE(ResolveThreads(0), 1);
  ::unsetenv("OPE_KIT_THREADS");
  EXPECT_EQ(CodeOf([] { ResolveThreads(-2); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace opekit
