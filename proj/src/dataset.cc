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
#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "opekit/error.h"
#include "opekit/harness.h"

namespace opekit {

namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitFields(const std::string& line, char delim) {
  std::vector<std::string> out;
  if (delim == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    out.push_back(Trim(std::string_view(line).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

char GuessDelimiter(const std::string& line) {
  for (char c : {',', '\t', ';'}) {
    if (line.find(c) != std::string::npos) return c;
  }
  return ' ';
}

bool ParseDouble(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE && std::isfinite(out);
}

bool ParseInteger(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtol(s.c_str(), &end, 10);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

std::string Counts(std::size_t n, std::size_t d, std::size_t k) {
  return "n=" + std::to_string(n) + " d=" + std::to_string(d) +
         " K=" + std::to_string(k);
}

}  // namespace

DatasetSchema LoadSchema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open schema " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, "schema " + path + ": " + e.what());
  }
  DatasetSchema s;
  try {
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("n")) s.n = j.at("n").get<std::size_t>();
    if (j.contains("d")) s.d = j.at("d").get<std::size_t>();
    if (j.contains("K")) s.num_classes = j.at("K").get<std::size_t>();
    if (j.contains("label_column")) s.label_column = j.at("label_column").get<int>();
    if (j.contains("delimiter")) {
      const std::string d = j.at("delimiter").get<std::string>();
      if (d == "whitespace" || d == " ") {
        s.delimiter = ' ';
      } else if (d == "\\t" || d == "\t" || d == "tab") {
        s.delimiter = '\t';
      } else if (d.size() == 1) {
        s.delimiter = d[0];
      } else {
        throw Error(ErrorCode::kParseError,
                    "schema " + path + ": unsupported delimiter '" + d + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, "schema " + path + ": " + e.what());
  }
  return s;
}

ClassificationData ParseDataset(std::istream& in, const DatasetSchema& schema,
                                const std::string& name) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::optional<char> delim = schema.delimiter;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    if (!delim) delim = GuessDelimiter(line);
    rows.push_back(SplitFields(line, *delim));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw Error(ErrorCode::kParseError, name + ": no data rows");

  const std::size_t width = rows.front().size();
  if (width < 2) {
    throw Error(ErrorCode::kParseError,
                name + ": need at least one feature column and a label column");
  }
  int label_col = schema.label_column.value_or(static_cast<int>(width) - 1);
  if (label_col < 0) label_col += static_cast<int>(width);
  if (label_col < 0 || label_col >= static_cast<int>(width)) {
    throw Error(ErrorCode::kSchemaMismatch,
                name + ": label column " + std::to_string(label_col) +
                    " outside the " + std::to_string(width) + " columns");
  }

  // A header is a first row whose feature fields are not all numeric.
  std::size_t first = 0;
  {
    double v;
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<int>(c) != label_col && !ParseDouble(rows[0][c], v)) {
        first = 1;
        break;
      }
    }
  }
  const std::size_t n = rows.size() - first;
  const std::size_t d = width - 1;
  if (n == 0) throw Error(ErrorCode::kParseError, name + ": header only");

  ClassificationData out;
  out.name = name;
  out.features = Matrix(n, d);
  std::vector<std::string> raw_labels(n);
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& f = rows[r];
    const std::string where = name + " line " + std::to_string(line_numbers[r]);
    if (f.size() != width) {
      throw Error(ErrorCode::kParseError,
                  where + ": expected " + std::to_string(width) + " fields, found " +
                      std::to_string(f.size()));
    }
    const std::size_t i = r - first;
    std::size_t j = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<int>(c) == label_col) continue;
      double v;
      if (!ParseDouble(f[c], v)) {
        throw Error(ErrorCode::kParseError,
                    where + ": non-numeric or missing feature '" + f[c] + "'");
      }
      out.features(i, j++) = v;
    }
    if (f[label_col].empty() || f[label_col] == "?") {
      throw Error(ErrorCode::kParseError, where + ": missing label");
    }
    raw_labels[i] = f[label_col];
  }

  std::vector<std::string> names = raw_labels;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  bool numeric = true;
  for (const auto& s : names) {
    long v;
    numeric = numeric && ParseInteger(s, v);
  }
  if (numeric) {
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      return std::strtol(a.c_str(), nullptr, 10) < std::strtol(b.c_str(), nullptr, 10);
    });
  }
  std::map<std::string, int> index;
  for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = static_cast<int>(k);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = index.at(raw_labels[i]);
  out.num_classes = names.size();
  out.class_names = std::move(names);

  const bool bad = (schema.n && *schema.n != n) || (schema.d && *schema.d != d) ||
                   (schema.num_classes && *schema.num_classes != out.num_classes);
  if (bad) {
    throw Error(ErrorCode::kSchemaMismatch,
                name + ": expected " +
                    Counts(schema.n.value_or(n), schema.d.value_or(d),
                           schema.num_classes.value_or(out.num_classes)) +
                    ", found " + Counts(n, d, out.num_classes));
  }
  if (out.num_classes < 2) {
    throw Error(ErrorCode::kSchemaMismatch, name + ": fewer than two classes");
  }
  return out;
}

ClassificationData LoadDataset(const std::string& path,
                               const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open data file " + path);
  const std::string name = schema.name.empty()
                               ? std::filesystem::path(path).stem().string()
                               : schema.name;
  return ParseDataset(in, schema, name);
}

}  // namespace opekit
