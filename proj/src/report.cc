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
#include "opekit/report.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "opekit/error.h"

namespace opekit {

namespace {

std::string Field(const std::string& s, char delim) {
  if (s.find(delim) == std::string::npos && s.find('"') == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitLine(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double ToDouble(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kParseError, where + ": bad number '" + s + "'");
  }
  return v;
}

std::uint64_t ToU64(const std::string& s, const std::string& where) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || s[0] == '-') {
    throw Error(ErrorCode::kParseError, where + ": bad integer '" + s + "'");
  }
  return v;
}

// The value a reader recovers from FormatNumber(v).
double Rounded(double v) { return std::strtod(FormatNumber(v).c_str(), nullptr); }

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool LooksLikeJson(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && (text[p] == '{' || text[p] == '[');
}

std::vector<std::vector<std::string>> ReadTable(const std::string& text,
                                                std::string_view header,
                                                const std::string& path) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  std::string expected(header);
  if (delim == '\t') std::replace(expected.begin(), expected.end(), ',', '\t');
  if (line != expected) {
    throw Error(ErrorCode::kParseError, path + ": unexpected header '" + line + "'");
  }
  const std::size_t width = std::count(expected.begin(), expected.end(), delim) + 1;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = SplitLine(line, delim);
    if (f.size() != width) {
      throw Error(ErrorCode::kParseError,
                  path + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(width) + " fields");
    }
    rows.push_back(std::move(f));
  }
  return rows;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown format '" + std::string(name) + "' (expected csv, tsv or json)");
}

std::vector<ReportRow> RowsFromSummary(const EvalSummary& summary) {
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < summary.estimators.size(); ++k) {
    rows.push_back({summary.condition, summary.logging_mode, summary.estimators[k],
                    summary.aggregate[k].bias, summary.aggregate[k].sd,
                    summary.aggregate[k].rmse, summary.repetitions.size(),
                    summary.mc_iterations, summary.seed});
  }
  return rows;
}

std::string FormatReport(std::span<const ReportRow> rows, ReportFormat format) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no report rows");
  for (const ReportRow& r : rows) {
    if (!std::isfinite(r.bias) || !std::isfinite(r.sd) || !std::isfinite(r.rmse)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite value for " + r.condition + "/" + r.estimator);
    }
  }
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ReportRow& r : rows) {
      arr.push_back({{"condition", r.condition}, {"logging_mode", r.logging_mode},
                     {"estimator", r.estimator}, {"bias", Rounded(r.bias)},
                     {"sd", Rounded(r.sd)}, {"rmse", Rounded(r.rmse)},
                     {"reps", r.reps}, {"mc_iters", r.mc_iters}, {"seed", r.seed}});
    }
    return nlohmann::ordered_json{{"rows", arr}}.dump(2) + "\n";
  }
  const char d = format == ReportFormat::kTsv ? '\t' : ',';
  std::string header(kReportHeader);
  if (d == '\t') std::replace(header.begin(), header.end(), ',', '\t');
  std::string out = header + "\n";
  for (const ReportRow& r : rows) {
    out += Field(r.condition, d) + d + Field(r.logging_mode, d) + d +
           Field(r.estimator, d) + d + FormatNumber(r.bias) + d + FormatNumber(r.sd) +
           d + FormatNumber(r.rmse) + d + std::to_string(r.reps) + d +
           std::to_string(r.mc_iters) + d + std::to_string(r.seed) + "\n";
  }
  return out;
}

void WriteReport(std::span<const ReportRow> rows, const std::string& path,
                 ReportFormat format) {
  WriteFile(path, FormatReport(rows, format));
}

std::vector<ReportRow> ReadReport(const std::string& path) {
  const std::string text = ReadFile(path);
  std::vector<ReportRow> rows;
  if (LooksLikeJson(text)) {
    try {
      const auto j = nlohmann::json::parse(text);
      for (const auto& r : j.at("rows")) {
        rows.push_back({r.at("condition").get<std::string>(),
                        r.at("logging_mode").get<std::string>(),
                        r.at("estimator").get<std::string>(), r.at("bias").get<double>(),
                        r.at("sd").get<double>(), r.at("rmse").get<double>(),
                        r.at("reps").get<std::size_t>(),
                        r.at("mc_iters").get<std::size_t>(),
                        r.at("seed").get<std::uint64_t>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, path + ": " + e.what());
    }
    return rows;
  }
  for (const auto& f : ReadTable(text, kReportHeader, path)) {
    rows.push_back({f[0], f[1], f[2], ToDouble(f[3], path), ToDouble(f[4], path),
                    ToDouble(f[5], path), ToU64(f[6], path), ToU64(f[7], path),
                    ToU64(f[8], path)});
  }
  return rows;
}

std::string FormatSweep(std::span<const SweepPoint> points, ReportFormat format) {
  if (points.empty()) throw Error(ErrorCode::kEmptyInput, "no sweep points");
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SweepPoint& p : points) {
      arr.push_back({{"size", p.size}, {"estimator", p.estimator},
                     {"bias", Rounded(p.bias)}, {"bias_se", Rounded(p.bias_se)},
                     {"rmse", Rounded(p.rmse)}, {"rmse_se", Rounded(p.rmse_se)}});
    }
    return nlohmann::ordered_json{{"points", arr}}.dump(2) + "\n";
  }
  const char d = format == ReportFormat::kCsv ? ',' : '\t';
  std::string header(kSweepHeader);
  if (d == '\t') std::replace(header.begin(), header.end(), ',', '\t');
  std::string out = header + "\n";
  for (const SweepPoint& p : points) {
    out += std::to_string(p.size) + d + Field(p.estimator, d) + d +
           FormatNumber(p.bias) + d + FormatNumber(p.bias_se) + d +
           FormatNumber(p.rmse) + d + FormatNumber(p.rmse_se) + "\n";
  }
  return out;
}

void WriteSweep(std::span<const SweepPoint> points, const std::string& path,
                ReportFormat format) {
  WriteFile(path, FormatSweep(points, format));
}

std::vector<SweepPoint> ReadSweep(const std::string& path) {
  const std::string text = ReadFile(path);
  std::vector<SweepPoint> out;
  if (LooksLikeJson(text)) {
    try {
      const auto j = nlohmann::json::parse(text);
      for (const auto& p : j.at("points")) {
        out.push_back({p.at("size").get<std::size_t>(),
                       p.at("estimator").get<std::string>(), p.at("bias").get<double>(),
                       p.at("bias_se").get<double>(), p.at("rmse").get<double>(),
                       p.at("rmse_se").get<double>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, path + ": " + e.what());
    }
    return out;
  }
  for (const auto& f : ReadTable(text, kSweepHeader, path)) {
    out.push_back({static_cast<std::size_t>(ToU64(f[0], path)), f[1],
                   ToDouble(f[2], path), ToDouble(f[3], path), ToDouble(f[4], path),
                   ToDouble(f[5], path)});
  }
  return out;
}

std::string SweepSvg(std::span<const SweepPoint> points) {
  std::vector<std::size_t> sizes;
  std::vector<std::string> names;
  for (const SweepPoint& p : points) {
    if (std::find(sizes.begin(), sizes.end(), p.size) == sizes.end()) sizes.push_back(p.size);
    if (std::find(names.begin(), names.end(), p.estimator) == names.end()) {
      names.push_back(p.estimator);
    }
  }
  if (sizes.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a sweep chart needs at least two sizes");
  }
  std::sort(sizes.begin(), sizes.end());

  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 150, kTop = 20, kBottom = 50;
  const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
  double ymax = 0.0;
  for (const SweepPoint& p : points) ymax = std::max(ymax, p.rmse + p.rmse_se);
  if (!(ymax > 0.0)) ymax = 1.0;
  ymax *= 1.05;
  const double smin = static_cast<double>(sizes.front());
  const double smax = static_cast<double>(sizes.back());
  auto px = [&](double s) { return x0 + (s - smin) / (smax - smin) * (x1 - x0); };
  auto py = [&](double v) { return y0 - v / ymax * (y0 - y1); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::string svg;
  char buf[256];
  auto add = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    svg += buf;
  };
  add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
      "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH, kW, kH);
  add("<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n", kW, kH);
  add("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", x0, y0, x1, y0);
  add("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", x0, y0, x0, y1);
  for (std::size_t s : sizes) {
    const double x = px(static_cast<double>(s));
    add("<line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" stroke=\"black\"/>\n", x, y0, x,
        y0 + 5);
    add("<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%zu</text>\n", x, y0 + 18, s);
  }
  for (int t = 0; t <= 4; ++t) {
    const double v = ymax * t / 4.0;
    add("<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"black\"/>\n", x0 - 5,
        py(v), x0, py(v));
    add("<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">%s</text>\n", x0 - 8, py(v) + 4,
        FormatNumber(Rounded(v)).c_str());
  }
  add("<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">sample size</text>\n",
      (x0 + x1) / 2, kH - 10);
  add("<text x=\"15\" y=\"%g\" text-anchor=\"middle\" transform=\"rotate(-90 15 %g)\">"
      "RMSE</text>\n",
      (y0 + y1) / 2, (y0 + y1) / 2);

  for (std::size_t e = 0; e < names.size(); ++e) {
    const char* color = kColors[e % (sizeof(kColors) / sizeof(kColors[0]))];
    std::vector<const SweepPoint*> series;
    for (const SweepPoint& p : points) {
      if (p.estimator == names[e]) series.push_back(&p);
    }
    std::sort(series.begin(), series.end(),
              [](const SweepPoint* a, const SweepPoint* b) { return a->size < b->size; });
    std::string pts;
    for (const SweepPoint* p : series) {
      std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", pts.empty() ? "" : " ",
                    px(static_cast<double>(p->size)), py(p->rmse));
      pts += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    for (const SweepPoint* p : series) {
      const double x = px(static_cast<double>(p->size));
      add("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"/>\n", x,
          py(std::max(p->rmse - p->rmse_se, 0.0)), x, py(p->rmse + p->rmse_se), color);
    }
    const double ly = kTop + 20.0 * static_cast<double>(e);
    add("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>\n",
        x1 + 15, ly, x1 + 35, ly, color);
    svg += "<text x=\"" + FormatNumber(x1 + 40) + "\" y=\"" + FormatNumber(ly + 4) + "\">" +
           EscapeXml(names[e]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void RenderSweepSvg(std::span<const SweepPoint> points, const std::string& path) {
  if (points.empty()) throw Error(ErrorCode::kEmptyInput, "no sweep points to plot");
  WriteFile(path, SweepSvg(points));
}

std::string SummaryTable(std::span<const ReportRow> rows) {
  std::size_t wc = 9, wl = 7, we = 9;
  for (const ReportRow& r : rows) {
    wc = std::max(wc, r.condition.size());
    wl = std::max(wl, r.logging_mode.size());
    we = std::max(we, r.estimator.size());
  }
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-*s  %-*s  %-*s  %10s  %10s  %10s\n",
                static_cast<int>(wc), "condition", static_cast<int>(wl), "logging",
                static_cast<int>(we), "estimator", "bias", "sd", "rmse");
  out += buf;
  for (const ReportRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %-*s  %-*s  %10.4f  %10.4f  %10.4f\n",
                  static_cast<int>(wc), r.condition.c_str(), static_cast<int>(wl),
                  r.logging_mode.c_str(), static_cast<int>(we), r.estimator.c_str(),
                  r.bias, r.sd, r.rmse);
    out += buf;
  }
  return out;
}

}  // namespace opekit
