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
// Acceptance run: reproduces the synthetic and benchmark experiments at full
// scale and prints one PASS/FAIL line per criterion (plus indented detail
// lines). Exits 0 once every criterion has been evaluated; with --strict the
// exit status is 1 when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "opekit/error.h"
#include "opekit/estimators.h"
#include "opekit/harness.h"
#include "opekit/kernels.h"
#include "opekit/selftest.h"

namespace {

using namespace opekit;

constexpr std::uint64_t kSeed = 1;

struct Tally {
  int passed = 0;
  int failed = 0;
};

Tally tally;

void Detail(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void Detail(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  std::printf("    ");
  std::vprintf(fmt, args);
  std::printf("\n");
  va_end(args);
}

// Prints "  ok"/"  no" for one sub-check and returns it.
bool Sub(bool ok, const char* fmt, ...) __attribute__((format(printf, 2, 3)));
bool Sub(bool ok, const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  std::printf("    [%s] ", ok ? "ok" : "no");
  std::vprintf(fmt, args);
  std::printf("\n");
  va_end(args);
  return ok;
}

void Verdict(int id, const char* name, bool ok, double seconds) {
  std::printf("%s %d %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name, seconds);
  std::fflush(stdout);
  (ok ? tally.passed : tally.failed)++;
}

bool In(double v, double lo, double hi) { return v >= lo && v <= hi; }

EvalSummary Synthetic(SyntheticExample example, Scenario scenario,
                      std::vector<EstimatorKind> estimators) {
  SyntheticConfig c;
  c.example = example;
  c.scenario = scenario;
  c.iterations = 2000;
  c.master_seed = kSeed;
  c.estimators = std::move(estimators);
  return RunSyntheticMonteCarlo(c);
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void ExampleOne() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<EstimatorKind> est = {EstimatorKind::kSw, EstimatorKind::kIpw,
                                          EstimatorKind::kNw};
  bool ok = true;
  const EvalSummary dec = Synthetic(SyntheticExample::kExample1, Scenario::kDecreasing, est);
  const auto &sw = dec.Get("SW"), &ipw = dec.Get("IPW"), &nw = dec.Get("NW");
  ok &= Sub(In(sw.bias, -0.62, -0.55), "decreasing SW bias %.4f in [-0.62, -0.55]", sw.bias);
  ok &= Sub(std::abs(ipw.bias) <= 0.05, "decreasing IPW |bias| %.4f <= 0.05",
            std::abs(ipw.bias));
  ok &= Sub(In(ipw.sd, 0.40, 0.58), "decreasing IPW sd %.4f in [0.40, 0.58]", ipw.sd);
  ok &= Sub(In(nw.rmse, 0.12, 0.22), "decreasing NW RMSE %.4f in [0.12, 0.22]", nw.rmse);

  const EvalSummary inc = Synthetic(SyntheticExample::kExample1, Scenario::kIncreasing, est);
  const double inc_nw = inc.Get("NW").rmse, inc_ipw = inc.Get("IPW").rmse;
  ok &= Sub(In(inc_nw, 0.03, 0.06), "increasing NW RMSE %.4f in [0.03, 0.06]", inc_nw);
  ok &= Sub(inc_nw <= 1.25 * inc_ipw, "increasing NW RMSE %.4f <= 1.25 x IPW RMSE %.4f",
            inc_nw, inc_ipw);

  const EvalSummary uns = Synthetic(SyntheticExample::kExample1, Scenario::kUnsorted, est);
  const double a = uns.Get("SW").rmse, b = uns.Get("NW").rmse, c = uns.Get("IPW").rmse;
  ok &= Sub(a < b && b < c, "unsorted RMSE SW %.4f < NW %.4f < IPW %.4f", a, b, c);
  Verdict(1, "example1_reproduction", ok, Seconds(start));
}

void ExampleTwo() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  for (Scenario s : {Scenario::kIncreasing, Scenario::kDecreasing, Scenario::kUnsorted}) {
    const EvalSummary r = Synthetic(SyntheticExample::kExample2, s,
                                    {EstimatorKind::kNw, EstimatorKind::kMnw});
    const double nw = r.Get("NW").rmse;
    const double m1 = r.Get("MNW(beta=1)").rmse, m05 = r.Get("MNW(beta=0.5)").rmse;
    const std::string name(ScenarioName(s));
    ok &= Sub(m1 < nw, "%s MNW(beta=1) RMSE %.4f < NW RMSE %.4f", name.c_str(), m1, nw);
    ok &= Sub(m1 <= m05 + 0.02, "%s MNW(beta=1) RMSE %.4f <= MNW(beta=0.5) RMSE %.4f + 0.02",
              name.c_str(), m1, m05);
    if (s == Scenario::kDecreasing) {
      ok &= Sub(In(m1, 0.18, 0.30), "decreasing MNW(beta=1) RMSE %.4f in [0.18, 0.30]", m1);
    }
  }
  Verdict(2, "example2_reproduction", ok, Seconds(start));
}

void Benchmarks() {
  const auto start = std::chrono::steady_clock::now();
  const std::string dir = OPEKIT_DATA_DIR;
  // page-blocks is used when present; sat stands in for it otherwise.
  std::vector<std::string> names = {"glass", "ecoli"};
  names.push_back(std::filesystem::exists(dir + "/page.csv") ? "page" : "sat");
  bool ok = true;
  int evaluated = 0;
  for (const std::string& name : names) {
    const std::string csv = dir + "/" + name + ".csv";
    if (!std::filesystem::exists(csv)) {
      ok &= Sub(false, "%s: data file missing", name.c_str());
      continue;
    }
    const ClassificationData data = LoadDataset(csv, LoadSchema(dir + "/" + name + ".json"));
    RunConfig c;
    c.dataset = name;
    c.mc_iterations = 500;
    c.repetitions = 5;
    c.master_seed = kSeed;
    c.logging_mode = LoggingMode::kTrue;
    const EvalSummary t = RunMonteCarlo(c, data);
    c.logging_mode = LoggingMode::kPerturbed;
    const EvalSummary p = RunMonteCarlo(c, data);
    ++evaluated;
    const double dm = t.Get("DM").rmse, ipw = t.Get("IPW").rmse, dr = t.Get("DR").rmse,
                 nw = t.Get("NW").rmse, mnw = t.Get("MNW").rmse;
    Detail("%s true: DM %.4f IPW %.4f DR %.4f NW %.4f MNW %.4f", name.c_str(), dm, ipw, dr,
           nw, mnw);
    Detail("%s perturbed: IPW %.4f NW %.4f", name.c_str(), p.Get("IPW").rmse,
           p.Get("NW").rmse);
    ok &= Sub(nw < ipw, "%s true: NW < IPW", name.c_str());
    ok &= Sub(mnw < dr, "%s true: MNW < DR", name.c_str());
    ok &= Sub(dm > ipw && dm > dr && dm > nw && dm > mnw, "%s true: DM largest",
              name.c_str());
    ok &= Sub(p.Get("IPW").rmse >= 1.5 * ipw, "%s perturbed IPW / true IPW = %.3f >= 1.5",
              name.c_str(), p.Get("IPW").rmse / ipw);
    ok &= Sub(p.Get("NW").rmse <= 1.25 * nw, "%s perturbed NW / true NW = %.3f <= 1.25",
              name.c_str(), p.Get("NW").rmse / nw);
  }
  ok &= evaluated >= 3;
  Verdict(3, "benchmark_ordering", ok, Seconds(start));
}

void Rate() {
  const auto start = std::chrono::steady_clock::now();
  SyntheticConfig c;
  c.scenario = Scenario::kDecreasing;
  c.iterations = 2000;
  c.master_seed = kSeed;
  c.estimators = {EstimatorKind::kNw};
  const std::vector<std::size_t> sizes = {300, 600, 1200};
  const auto pts = SyntheticSweep(c, sizes);
  // Least-squares slope of log RMSE on log n.
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += std::log(static_cast<double>(p.size)) / 3.0;
    my += std::log(p.rmse) / 3.0;
  }
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : pts) {
    const double dx = std::log(static_cast<double>(p.size)) - mx;
    sxy += dx * (std::log(p.rmse) - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  for (const auto& p : pts) Detail("n=%zu NW RMSE %.4f (se %.4f)", p.size, p.rmse, p.rmse_se);
  bool ok = Sub(pts[2].rmse < pts[0].rmse, "RMSE at n=1200 < RMSE at n=300");
  ok &= Sub(slope <= -0.25, "log-log slope %.3f <= -0.25", slope);
  Verdict(4, "nw_rate", ok, Seconds(start));
}

void Properties() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  for (const PropertyResult& r : RunPropertySuite(kSeed)) {
    ok &= Sub(r.passed, "%-44s deviation %.3g (tolerance %.3g)", r.name.c_str(), r.deviation,
              r.tolerance);
  }
  const double seconds = Seconds(start);
  ok &= Sub(seconds < 60.0, "suite runtime %.1f s < 60 s", seconds);
  Verdict(5, "property_suite", ok, seconds);
}

void Goldens() {
  const auto start = std::chrono::steady_clock::now();
  // Two units, two arms; see the estimator unit tests for the hand arithmetic.
  const auto data = MakeLoggedData(Matrix(2, 0), {0, 1}, {1.0, 2.0},
                                   Matrix::FromRows({{0.5, 0.5}, {0.75, 0.25}}));
  const auto policy = PolicyMatrix::FromMatrix(Matrix::FromRows({{1.0, 0.0}, {0.5, 0.5}}));
  const RewardPredictions half{Matrix(2, 2, 0.5)};
  bool ok = true;
  const auto check = [&](const char* name, double got, double want) {
    ok &= Sub(std::abs(got - want) <= 1e-12, "%s = %.15g (expected %.15g)", name, got, want);
  };
  check("ipw", Ipw(data, policy).value, 3.0);
  check("sw", Sw(data, policy).value, 4.0 / 3.0);
  check("dm", Dm(data, policy, half).value, 0.5);
  check("dr", Dr(data, policy, half).value, 2.5);
  Verdict(6, "hand_goldens", ok, Seconds(start));
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      std::fprintf(stderr, "usage: %s [--strict]\n", argv[0]);
      return 2;
    }
  }
  std::printf("seed %llu, %d worker thread(s), %s kernels\n",
              static_cast<unsigned long long>(kSeed), ResolveThreads(0),
              std::string(kernels::IsaName(kernels::ActiveIsa())).c_str());
  try {
    ExampleOne();
    ExampleTwo();
    Benchmarks();
    Rate();
    Properties();
    Goldens();
  } catch (const std::exception& e) {
    std::printf("ERROR %s\n", e.what());
    return 1;
  }
  std::printf("%d passed, %d failed\n", tally.passed, tally.failed);
  return strict && tally.failed > 0 ? 1 : 0;
}
