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
// Report files: result tables (CSV or JSON), sample-size series (TSV, CSV or
// JSON) and an SVG chart of a series. Numbers are written with six
// significant digits.
#ifndef OPEKIT_REPORT_H_
#define OPEKIT_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opekit/harness.h"

namespace opekit {

struct ReportRow {
  std::string condition;
  std::string logging_mode;
  std::string estimator;
  double bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
  std::size_t reps = 0;
  std::size_t mc_iters = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

enum class ReportFormat { kCsv, kTsv, kJson };
ReportFormat ParseReportFormat(std::string_view name);

inline constexpr std::string_view kReportHeader =
    "condition,logging_mode,estimator,bias,sd,rmse,reps,mc_iters,seed";
inline constexpr std::string_view kSweepHeader =
    "size,estimator,bias,bias_se,rmse,rmse_se";

// "%.6g".
std::string FormatNumber(double v);

// One row per estimator of the summary.
std::vector<ReportRow> RowsFromSummary(const EvalSummary& summary);

// CSV or JSON (TSV uses tabs with the CSV header). Throws Error(kIoError) or,
// for an empty table, Error(kEmptyInput); nothing is written on error.
void WriteReport(std::span<const ReportRow> rows, const std::string& path,
                 ReportFormat format = ReportFormat::kCsv);
std::string FormatReport(std::span<const ReportRow> rows, ReportFormat format);
std::vector<ReportRow> ReadReport(const std::string& path);

void WriteSweep(std::span<const SweepPoint> points, const std::string& path,
                ReportFormat format = ReportFormat::kTsv);
std::string FormatSweep(std::span<const SweepPoint> points, ReportFormat format);
std::vector<SweepPoint> ReadSweep(const std::string& path);

// Line chart of RMSE against sample size, one polyline per estimator with
// standard-error bars. Needs at least two sizes.
void RenderSweepSvg(std::span<const SweepPoint> points, const std::string& path);
std::string SweepSvg(std::span<const SweepPoint> points);

// Fixed-width table for terminals.
std::string SummaryTable(std::span<const ReportRow> rows);

}  // namespace opekit

#endif  // OPEKIT_REPORT_H_
