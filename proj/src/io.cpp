// Copyright 2026 The Sensel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sensel/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sensel/errors.hpp"

namespace sensel {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

bool parse_cell(const std::string& field, double* value) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  *value = v;
  return true;
}

}  // namespace

Matrix parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  Index line_no = 0;       // 1-based physical line
  Index expected_cols = -1;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool all_numeric = true;
    Index bad_col = -1;       // first non-numeric cell, 1-based
    Index nonfinite_col = 0;  // first NaN/inf cell, 1-based, 0 if none
    for (size_t c = 0; c < fields.size(); ++c) {
      if (!parse_cell(fields[c], &row[c])) {
        all_numeric = false;
        bad_col = static_cast<Index>(c) + 1;
        break;
      }
      if (nonfinite_col == 0 && !std::isfinite(row[c])) {
        nonfinite_col = static_cast<Index>(c) + 1;
      }
    }
    if (first_content_line) {
      first_content_line = false;
      expected_cols = static_cast<Index>(fields.size());
      if (!all_numeric) {
        continue;  // header row
      }
    } else if (!all_numeric) {
      throw ParseError("csv: non-numeric cell at row " +
                           std::to_string(line_no) + ", column " +
                           std::to_string(bad_col),
                       line_no, bad_col);
    }
    if (nonfinite_col != 0) {
      throw ParseError("csv: non-finite value at row " +
                           std::to_string(line_no) + ", column " +
                           std::to_string(nonfinite_col),
                       line_no, nonfinite_col);
    }
    if (static_cast<Index>(fields.size()) != expected_cols) {
      throw RaggedRows("csv: row " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(expected_cols),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InputError("csv: no data rows");
  }
  Matrix M(static_cast<Index>(rows.size()), expected_cols);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return M;
}

Matrix load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  return parse_csv(in);
}

void write_csv(MatrixRef M, std::ostream& out) {
  char buf[40];
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

ActivityFilter preprocess_activity(MatrixRef M, double min_fraction) {
  if (min_fraction < 0.0 || min_fraction > 1.0) {
    throw DomainError("preprocess_activity: fraction must lie in [0, 1]");
  }
  ActivityFilter out;
  const double rows = static_cast<double>(M.rows());
  for (Index j = 0; j < M.cols(); ++j) {
    const double active =
        static_cast<double>((M.col(j).array() != 0.0).count());
    if (active / rows >= min_fraction) {
      out.kept.push_back(j);
    }
  }
  if (out.kept.empty()) {
    throw AllColumnsDropped("preprocess_activity: no column meets fraction " +
                            std::to_string(min_fraction));
  }
  out.matrix.resize(M.rows(), static_cast<Index>(out.kept.size()));
  for (size_t c = 0; c < out.kept.size(); ++c) {
    out.matrix.col(static_cast<Index>(c)) = M.col(out.kept[c]);
  }
  return out;
}

Matrix standardize_columns(MatrixRef M) {
  Matrix out = M;
  for (Index j = 0; j < out.cols(); ++j) {
    const double rms = std::sqrt(out.col(j).squaredNorm() /
                                 static_cast<double>(out.rows()));
    if (rms > 0.0) {
      out.col(j) /= rms;
    }
  }
  return out;
}

}  // namespace sensel
