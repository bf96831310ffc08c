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

#include "sensel/dense.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "sensel/errors.hpp"

namespace sensel {

Vector SpdFactor::solve(VectorRef b) const {
  if (b.size() != lower.rows()) {
    throw ShapeMismatch("SpdFactor::solve: rhs length " +
                        std::to_string(b.size()) + " vs dimension " +
                        std::to_string(lower.rows()));
  }
  Vector y = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix symmetrized(MatrixRef M, double tol) {
  if (M.rows() != M.cols()) {
    throw ShapeMismatch("symmetrized: matrix is " + std::to_string(M.rows()) +
                        "x" + std::to_string(M.cols()));
  }
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw NotSymmetric("symmetrized: asymmetry " + std::to_string(asym) +
                       " exceeds tolerance");
  }
  return 0.5 * (M + M.transpose());
}

SpdFactor cholesky_logdet(MatrixRef M) {
  const Matrix S = symmetrized(M);
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("cholesky_logdet: non-positive pivot");
  }
  SpdFactor f;
  f.lower = llt.matrixL();
  // A zero pivot can slip past LLT's info() on some sizes; logdet would be
  // -inf, so check explicitly.
  if ((f.lower.diagonal().array() <= 0.0).any()) {
    throw NotPositiveDefinite("cholesky_logdet: non-positive pivot");
  }
  f.log_det = 2.0 * f.lower.diagonal().array().log().sum();
  return f;
}

Vector solve_direct(MatrixRef M, VectorRef b) {
  const SpdFactor f = cholesky_logdet(M);
  Vector x = f.solve(b);
  // One refinement sweep tightens the residual to near roundoff.
  Vector r = b - M * x;
  x += f.solve(r);
  return x;
}

Matrix invert_spd(MatrixRef M) {
  const SpdFactor f = cholesky_logdet(M);
  const Matrix id = Matrix::Identity(M.rows(), M.cols());
  Matrix X = f.lower.triangularView<Eigen::Lower>().solve(id);
  X = f.lower.transpose().triangularView<Eigen::Upper>().solve(X);
  // Refinement, then re-symmetrize: the exact inverse is symmetric.
  X += f.lower.transpose().triangularView<Eigen::Upper>().solve(
      Matrix(f.lower.triangularView<Eigen::Lower>().solve(Matrix(id - M * X))));
  return 0.5 * (X + X.transpose());
}

Matrix hadamard(MatrixRef A, MatrixRef B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw ShapeMismatch("hadamard: " + std::to_string(A.rows()) + "x" +
                        std::to_string(A.cols()) + " vs " +
                        std::to_string(B.rows()) + "x" +
                        std::to_string(B.cols()));
  }
  return A.cwiseProduct(B);
}

}  // namespace sensel
