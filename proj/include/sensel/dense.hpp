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

#ifndef SENSEL_DENSE_HPP
#define SENSEL_DENSE_HPP

#include "sensel/types.hpp"

namespace sensel {

// Cholesky factor of a symmetric positive definite matrix together with the
// log-determinant of the factored matrix.
struct SpdFactor {
  Matrix lower;    // L with L L^T = M, strictly positive diagonal
  double log_det;  // 2 * sum(log(diag(L)))

  Index dim() const { return lower.rows(); }
  Vector solve(VectorRef b) const;
  Matrix reconstruct() const { return lower * lower.transpose(); }
};

// Symmetrizes (M + M^T)/2 when the asymmetry is at roundoff level,
// otherwise throws NotSymmetric. Products like A^T diag(z) A drift by a few
// ulps; anything larger is a caller bug.
Matrix symmetrized(MatrixRef M, double tol = 1e-12);

// Factors a symmetric positive definite matrix and returns the factor plus
// log det(M). Throws NotPositiveDefinite when a pivot is not strictly
// positive, which for barrier matrices signals an iterate too close to the
// boundary or a rank-deficient A^T diag(z) A.
SpdFactor cholesky_logdet(MatrixRef M);

// Solves M x = b for symmetric positive definite M with one step of
// iterative refinement. Residual contract: |M x - b|_inf <= 1e-10 (1+|b|_inf)
// on reasonably conditioned systems.
Vector solve_direct(MatrixRef M, VectorRef b);

// Inverse of a symmetric positive definite matrix (refined so that
// M M^{-1} = I holds to about 1e-9 in the max norm).
Matrix invert_spd(MatrixRef M);

// Elementwise product. Shapes must agree.
Matrix hadamard(MatrixRef A, MatrixRef B);

}  // namespace sensel

#endif  // SENSEL_DENSE_HPP
