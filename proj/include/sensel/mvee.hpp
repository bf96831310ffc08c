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

#ifndef SENSEL_MVEE_HPP
#define SENSEL_MVEE_HPP

#include <vector>

#include "sensel/newton.hpp"
#include "sensel/types.hpp"

namespace sensel {

// Origin-centered ellipsoid {x : x^T M x <= 1} with M symmetric positive
// definite.
struct Ellipsoid {
  Matrix M;
};

struct MveeResult {
  Ellipsoid ellipsoid;
  Vector weights;  // dual weights z*, nonnegative, summing to n
  SolveTrace trace;
};

// Minimum-volume origin-centered enclosing ellipsoid of the point rows, via
// the dual program
//   max log det(A^T diag(z) A)  s.t.  sum z = n, z >= 0,
// solved with the same Newton machinery (budget k = n, one-sided barrier
// kappa * sum log z_i) and recovered as M = (A^T diag(z*) A)^{-1}. Enclosure
// holds up to barrier smoothing: max_i a_i^T M a_i <= 1 + O(kappa m / n).
MveeResult mvee_solve(MatrixRef points, double kappa = 1e-4,
                      double tol = 1e-6,
                      Backend backend = Backend::kReferenceDense);

struct EnclosureReport {
  Vector ratios;  // a_i^T M a_i per point
  double max_ratio = 0.0;
  std::vector<Index> violations;  // points with ratio > 1 + tol
};

EnclosureReport enclosure_check(const Ellipsoid& e, MatrixRef points,
                                double tol);

}  // namespace sensel

#endif  // SENSEL_MVEE_HPP
