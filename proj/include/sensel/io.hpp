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

#ifndef SENSEL_IO_HPP
#define SENSEL_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sensel/types.hpp"

namespace sensel {

// Loads a rectangular numeric CSV. A header row is auto-detected (any
// non-numeric first-row cell) and skipped. Rows are observations, columns
// variables. NaN and infinities are rejected with a ParseError carrying the
// 1-based row/column; ragged rows throw RaggedRows.
Matrix load_csv_matrix(const std::string& path);
Matrix parse_csv(std::istream& in);

// Full-precision CSV emission (round-trips through load_csv_matrix).
void write_csv(MatrixRef M, std::ostream& out);

struct ActivityFilter {
  Matrix matrix;             // kept columns only
  std::vector<Index> kept;   // original column indices
};

// Drops columns whose fraction of nonzero entries is below min_fraction
// (1.0 keeps only columns active in every row). Throws AllColumnsDropped
// when nothing survives.
ActivityFilter preprocess_activity(MatrixRef M, double min_fraction = 1.0);

// Scales each column to unit root-mean-square (no centering). Optional
// preprocing for utilization data where link magnitudes differ wildly.
Matrix standardize_columns(MatrixRef M);

}  // namespace sensel

#endif  // SENSEL_IO_HPP
