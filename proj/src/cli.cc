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
#include "opekit/cli.h"

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opekit/error.h"
#include "opekit/harness.h"
#include "opekit/report.h"
#include "opekit/selftest.h"

namespace opekit {

namespace {

struct Options {
  std::size_t n = 300;
  std::size_t k = 20;
  std::size_t reps = 2000;
  std::uint64_t seed = 1;
  std::string out;
  std::string data;
  std::string schema;
  std::string logging = "true";
  std::string estimators;
  std::string sizes;
  std::size_t mc_iters = 500;
  std::size_t repetitions = 20;
  std::string lambda_grid;
  int segments = 0;
  int degree = 3;
  int penalty_order = 1;
  std::string format;
  std::string scenarios = "increasing,decreasing,unsorted";
  std::string betas = "0.5,1";
  std::string sw_form = "normalized";
  int example = 1;
  std::string svg;
  bool fixed_logging = false;
  int threads = 0;
};

// Failures are reported with the stage that raised them.
enum class Stage { kConfig, kLoad, kRun, kWrite };

const char* StageName(Stage s) {
  switch (s) {
    case Stage::kConfig: return "config";
    case Stage::kLoad: return "load";
    case Stage::kRun: return "run";
    case Stage::kWrite: return "write";
  }
  return "?";
}

void Fail(const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); }

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> ParseDoubles(const std::string& s, const char* flag) {
  std::vector<double> out;
  for (const std::string& f : SplitList(s)) {
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v)) {
      Fail(std::string(flag) + ": bad number '" + f + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> ParseSizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& f : SplitList(s)) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(f.c_str(), &end, 10);
    if (f.empty() || f[0] == '-' || end != f.c_str() + f.size() || errno || v == 0) {
      Fail("--sizes: bad size '" + f + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

Scenario ParseScenario(const std::string& s) {
  for (Scenario c : {Scenario::kIncreasing, Scenario::kDecreasing, Scenario::kUnsorted}) {
    if (ScenarioName(c) == s) return c;
  }
  Fail("unknown scenario '" + s + "' (expected increasing, decreasing or unsorted)");
  return Scenario::kUnsorted;
}

spline::SplineSpec SplineFromOptions(const Options& o) {
  spline::SplineSpec spec;
  spec.degree = o.degree;
  spec.penalty_order = o.penalty_order;
  if (o.segments > 0) spec.segments = o.segments;
  if (!o.lambda_grid.empty()) spec.lambda_grid = ParseDoubles(o.lambda_grid, "--lambda-grid");
  spec.Validate();
  return spec;
}

SwForm ParseSwForm(const std::string& s) {
  if (s == "normalized") return SwForm::kNormalized;
  if (s == "literal") return SwForm::kLiteral;
  Fail("unknown --sw-form '" + s + "' (expected normalized or literal)");
  return SwForm::kNormalized;
}

// --format wins; otherwise the extension of --out; otherwise `fallback`.
ReportFormat ResolveFormat(const Options& o, ReportFormat fallback) {
  if (!o.format.empty()) return ParseReportFormat(o.format);
  const std::string ext = std::filesystem::path(o.out).extension().string();
  if (ext == ".csv") return ReportFormat::kCsv;
  if (ext == ".tsv") return ReportFormat::kTsv;
  if (ext == ".json") return ReportFormat::kJson;
  return fallback;
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  Stage stage() const { return stage_; }

  void Synthetic(SyntheticExample example) {
    SyntheticConfig base;
    base.example = example;
    base.n = o_.n;
    base.num_actions = o_.k;
    base.iterations = o_.reps;
    base.master_seed = o_.seed;
    base.spline = SplineFromOptions(o_);
    base.sw_form = ParseSwForm(o_.sw_form);
    base.threads = o_.threads;
    base.betas = ParseDoubles(o_.betas, "--betas");
    if (!o_.estimators.empty()) {
      base.estimators = ParseEstimatorList(o_.estimators);
    } else if (example == SyntheticExample::kExample2) {
      base.estimators = {EstimatorKind::kSw, EstimatorKind::kIpw, EstimatorKind::kNw,
                         EstimatorKind::kMnw};
    }
    std::vector<SyntheticConfig> configs;
    for (const std::string& s : SplitList(o_.scenarios)) {
      SyntheticConfig c = base;
      c.scenario = ParseScenario(s);
      c.Validate();
      configs.push_back(c);
    }
    const ReportFormat format = ResolveFormat(o_, ReportFormat::kCsv);

    stage_ = Stage::kRun;
    std::vector<ReportRow> rows;
    for (const SyntheticConfig& c : configs) {
      for (ReportRow& r : RowsFromSummary(RunSyntheticMonteCarlo(c))) {
        rows.push_back(std::move(r));
      }
    }
    Emit(rows, format);
  }

  void Uci() {
    RunConfig config = ClassificationConfig();
    config.logging_mode = ParseLoggingMode(o_.logging);
    config.Validate();
    const ReportFormat format = ResolveFormat(o_, ReportFormat::kCsv);
    const ClassificationData data = Load();
    stage_ = Stage::kRun;
    const auto rows = RowsFromSummary(RunMonteCarlo(config, data));
    Emit(rows, format);
  }

  void Sweep() {
    const std::vector<std::size_t> sizes = ParseSizes(o_.sizes);
    const ReportFormat format = ResolveFormat(o_, ReportFormat::kTsv);
    std::vector<SweepPoint> points;
    if (!o_.data.empty()) {
      RunConfig config = ClassificationConfig();
      config.logging_mode = ParseLoggingMode(o_.logging);
      config.Validate();
      const ClassificationData data = Load();
      const std::size_t limit = data.size() / 2;
      for (std::size_t s : sizes) {
        if (s > limit) {
          stage_ = Stage::kConfig;
          throw Error(ErrorCode::kSizeTooLarge,
                      "size " + std::to_string(s) + " exceeds the test split (" +
                          std::to_string(limit) + " rows)");
        }
      }
      stage_ = Stage::kRun;
      points = SampleSizeSweep(config, data, sizes);
    } else {
      SyntheticConfig config;
      if (o_.example != 1 && o_.example != 2) Fail("--example must be 1 or 2");
      config.example =
          o_.example == 1 ? SyntheticExample::kExample1 : SyntheticExample::kExample2;
      config.num_actions = o_.k;
      config.iterations = o_.reps;
      config.master_seed = o_.seed;
      config.spline = SplineFromOptions(o_);
      config.sw_form = ParseSwForm(o_.sw_form);
      config.threads = o_.threads;
      config.betas = ParseDoubles(o_.betas, "--betas");
      const auto scen = SplitList(o_.scenarios);
      if (scen.size() != 1) Fail("sweep takes a single --scenarios value");
      config.scenario = ParseScenario(scen[0]);
      if (!o_.estimators.empty()) config.estimators = ParseEstimatorList(o_.estimators);
      config.Validate();
      stage_ = Stage::kRun;
      points = SyntheticSweep(config, sizes);
    }
    stage_ = Stage::kWrite;
    if (!o_.out.empty()) WriteSweep(points, o_.out, format);
    if (!o_.svg.empty()) RenderSweepSvg(points, o_.svg);
    out_ << FormatSweep(points, ReportFormat::kTsv);
  }

  bool Selftest() {
    stage_ = Stage::kRun;
    bool ok = true;
    for (const PropertyResult& r : RunPropertySuite(o_.seed)) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s %-44s deviation %.3g (tolerance %.3g)\n",
                    r.passed ? "PASS" : "FAIL", r.name.c_str(), r.deviation,
                    r.tolerance);
      out_ << buf;
      ok = ok && r.passed;
    }
    return ok;
  }

 private:
  RunConfig ClassificationConfig() const {
    if (o_.data.empty()) Fail("--data is required");
    RunConfig config;
    config.mc_iterations = o_.mc_iters;
    config.repetitions = o_.repetitions;
    config.master_seed = o_.seed;
    config.spline = SplineFromOptions(o_);
    config.sw_form = ParseSwForm(o_.sw_form);
    config.redraw_logging = !o_.fixed_logging;
    config.threads = o_.threads;
    if (!o_.estimators.empty()) config.estimators = ParseEstimatorList(o_.estimators);
    return config;
  }

  // The schema is --schema, else a .json file next to the data, else none.
  ClassificationData Load() {
    stage_ = Stage::kLoad;
    DatasetSchema schema;
    std::filesystem::path sidecar = o_.data;
    sidecar.replace_extension(".json");
    if (!o_.schema.empty()) {
      schema = LoadSchema(o_.schema);
    } else if (std::filesystem::exists(sidecar)) {
      schema = LoadSchema(sidecar.string());
    }
    ClassificationData data = LoadDataset(o_.data, schema);
    if (data.name.empty()) data.name = std::filesystem::path(o_.data).stem().string();
    return data;
  }

  void Emit(const std::vector<ReportRow>& rows, ReportFormat format) {
    stage_ = Stage::kWrite;
    if (!o_.out.empty()) WriteReport(rows, o_.out, format);
    out_ << SummaryTable(rows);
  }

  const Options& o_;
  std::ostream& out_;
  Stage stage_ = Stage::kConfig;
};

void AddSplineOptions(CLI::App* app, Options& o) {
  app->add_option("--lambda-grid", o.lambda_grid,
                  "comma-separated smoothing parameters searched by GCV");
  app->add_option("--segments", o.segments, "knot intervals (default: from n)");
  app->add_option("--degree", o.degree, "spline degree")->capture_default_str();
  app->add_option("--penalty-order", o.penalty_order, "difference penalty order")
      ->capture_default_str();
  app->add_option("--sw-form", o.sw_form, "SW form: normalized or literal")
      ->capture_default_str();
}

void AddCommonOptions(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "master seed")->capture_default_str();
  app->add_option("--out", o.out, "report path");
  app->add_option("--format", o.format, "csv, tsv or json (default: from --out)");
  app->add_option("--estimators", o.estimators, "comma-separated estimator names");
  app->add_option("--threads", o.threads, "worker threads (0: OPE_KIT_THREADS or auto)");
  AddSplineOptions(app, o);
}

void AddSyntheticOptions(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "units per draw")->capture_default_str();
  app->add_option("--k", o.k, "number of actions")->capture_default_str();
  app->add_option("--reps", o.reps, "Monte Carlo draws")->capture_default_str();
  app->add_option("--scenarios", o.scenarios, "reward scenarios")->capture_default_str();
  app->add_option("--betas", o.betas, "baseline coefficients (example 2)")
      ->capture_default_str();
}

void AddDataOptions(CLI::App* app, Options& o) {
  app->add_option("--data", o.data, "delimited data file, label in one column");
  app->add_option("--schema", o.schema, "JSON schema (default: sibling .json)");
  app->add_option("--logging", o.logging, "true, perturbed or estimated")
      ->capture_default_str();
  app->add_option("--mc-iters", o.mc_iters, "iterations per repetition")
      ->capture_default_str();
  app->add_option("--repetitions", o.repetitions, "train/test splits")
      ->capture_default_str();
  app->add_flag("--fixed-logging", o.fixed_logging,
                "draw the logging policy once per repetition");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Off-policy evaluation benchmarks", "ope_kit"};
  app.require_subcommand(1);
  auto* ex1 = app.add_subcommand("example1", "synthetic example without a reward model");
  auto* ex2 = app.add_subcommand("example2", "synthetic example with a reward model");
  auto* uci = app.add_subcommand("uci", "classification data turned into a bandit problem");
  auto* sweep = app.add_subcommand("sweep", "error against evaluation sample size");
  auto* self = app.add_subcommand("selftest", "built-in property checks");
  for (auto* s : {ex1, ex2}) {
    AddCommonOptions(s, o);
    AddSyntheticOptions(s, o);
  }
  AddCommonOptions(uci, o);
  AddDataOptions(uci, o);
  AddCommonOptions(sweep, o);
  AddDataOptions(sweep, o);
  sweep->add_option("--sizes", o.sizes, "comma-separated sample sizes")->required();
  sweep->add_option("--svg", o.svg, "also draw the RMSE series as SVG");
  sweep->add_option("--example", o.example, "synthetic example when --data is absent")
      ->capture_default_str();
  sweep->add_option("--k", o.k, "number of actions (synthetic)")->capture_default_str();
  sweep->add_option("--reps", o.reps, "Monte Carlo draws (synthetic)")
      ->capture_default_str();
  sweep->add_option("--scenarios", o.scenarios, "reward scenario (synthetic)");
  sweep->add_option("--betas", o.betas, "baseline coefficients (example 2)");
  self->add_option("--seed", o.seed, "master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (sweep->parsed() && !sweep->count("--scenarios")) o.scenarios = "decreasing";

  Runner runner(o, out);
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (ex1->parsed()) runner.Synthetic(SyntheticExample::kExample1);
    if (ex2->parsed()) runner.Synthetic(SyntheticExample::kExample2);
    if (uci->parsed()) runner.Uci();
    if (sweep->parsed()) runner.Sweep();
    if (self->parsed()) return runner.Selftest() ? 0 : 1;
  } catch (const Error& e) {
    const bool config = runner.stage() == Stage::kConfig ||
                        e.code() == ErrorCode::kInvalidArgument;
    err << "ope_kit " << cmd << ": " << StageName(runner.stage())
        << " failed: " << e.what() << "\n";
    return config ? 2 : 1;
  } catch (const std::exception& e) {
    err << "ope_kit " << cmd << ": " << StageName(runner.stage())
        << " failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace opekit
