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

#ifndef SENSEL_SELECTION_HPP
#define SENSEL_SELECTION_HPP

#include <vector>

#include "sensel/barrier.hpp"
#include "sensel/types.hpp"

namespace sensel {

// Simple selection rule: indices of the k largest weights, ties broken by
// the lower index. Output is sorted ascending.
std::vector<Index> round_topk(VectorRef z, Index k);

// log det(A_S^T A_S) for the row subset S. A rank-deficient selection
// evaluates to -inf so search can move through it rather than aborting.
double logdet_selection(MatrixRef A, const std::vector<Index>& chosen);

struct LocalSearchResult {
  std::vector<Index> chosen;
  int swaps = 0;
  double log_det = 0.0;
};

// Steepest single-swap ascent: each pass scores all k(m-k) swaps of a chosen
// row against an unchosen one and applies the best strictly improving swap;
// stops when none improves or after max_passes. The objective sequence is
// strictly increasing, so this terminates.
LocalSearchResult local_search(MatrixRef A, std::vector<Index> chosen,
                               int max_passes = 1000);

struct SelectionBounds {
  double upper = 0.0;  // relaxed value at z* plus the 2 m kappa slack
  double lower = 0.0;  // best Boolean value found
  double gap = 0.0;    // upper - lower
};

// The barrier solution is within 2 m kappa of the relaxed optimum, which in
// turn bounds the Boolean optimum from above:
//   upper = log det(A^T diag(z*) A) + 2 m kappa.
SelectionBounds compute_bounds(const SensorProblem& p, VectorRef z_star,
                               double best_boolean_logdet);

struct SelectionResult {
  std::vector<Index> chosen;    // after local search
  double logdet_value = 0.0;    // value of `chosen`
  double logdet_simple = 0.0;   // value of the top-k rounding alone
  double relaxed_value = 0.0;   // log det(A^T diag(z*) A), barrier-free
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  int swaps = 0;
};

// Rounding + local search + bounds for a solved relaxation.
SelectionResult select_sensors(const SensorProblem& p, VectorRef z_star,
                               int max_passes = 1000);

}  // namespace sensel

#endif  // SENSEL_SELECTION_HPP
