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

#ifndef SENSEL_BARRIER_HPP
#define SENSEL_BARRIER_HPP

#include "sensel/gabp.hpp"
#include "sensel/types.hpp"

namespace sensel {

// Which inequality set the log barrier smooths.
//   kBox01:      0 < z_i < 1  (sensor selection)
//   kLowerOnly:  0 < z_i      (ellipsoid dual, weights may exceed 1)
enum class BarrierKind { kBox01, kLowerOnly };

// A sensor-selection instance: row i of A is measurement vector a_i. The
// smoothed objective, maximized over {z interior, sum z = k}, is
//   f(z) = log det(A^T diag(z) A) + kappa * sum_i phi(z_i)
// with phi the log barrier of the active inequality set.
struct SensorProblem {
  Matrix A;
  Index k = 0;
  double kappa = 1e-3;
  BarrierKind barrier = BarrierKind::kBox01;

  Index num_sensors() const { return A.rows(); }  // m
  Index num_params() const { return A.cols(); }   // n

  // Default weight. At 1/m the smoothed problem stays well conditioned:
  // Newton converges in a handful of steps and the truncated backend's
  // decrement reaches its stopping test instead of flooring on the gradient
  // approximation error. Smaller weights tighten the 2 m kappa bound slack
  // but slow every solver down; configurable per run.
  static double default_kappa(Index m) { return 1.0 / static_cast<double>(m); }

  // Checks m > k >= n >= 1, kappa > 0, and that no column of A is all zero.
  void validate() const;
};

bool is_interior(const SensorProblem& p, VectorRef z);

// A^T diag(z) A, symmetrized against roundoff drift.
Matrix weighted_gram(MatrixRef A, VectorRef z);

// f(z) as defined above. Throws DomainError outside the barrier domain and
// NotPositiveDefinite when A^T diag(z) A is not positive definite.
double objective(const SensorProblem& p, VectorRef z);

struct GradientExact {
  Vector g;  // g_i = a_i^T X a_i + kappa * phi'(z_i)
  Matrix X;  // (A^T diag(z) A)^{-1}, cached for the Hessian
};

GradientExact gradient_exact(const SensorProblem& p, VectorRef z);

// H = -(A X A^T) o (A X A^T) - kappa diag(phi''-magnitudes); negative
// definite at interior points. X must be the inverse returned by
// gradient_exact for the same z.
Matrix hessian_exact(const SensorProblem& p, VectorRef z, MatrixRef X);

// The (n+m) x (n+m) symmetric saddle embedding
//   [ 0    A^T        ]
//   [ A   -diag(1/z)  ]
// whose inverse has lower-right diagonal Y_ii = -z_i + z_i^2 (A X A^T)_ii,
// so leverage values can be read off one matrix inverse.
Matrix saddle_matrix(const SensorProblem& p, VectorRef z);

enum class ApproxPath {
  kSaddleGabp,       // GaBP variances on the saddle embedding
  kEnforcedColumns,  // per-column enforced solves of the embedding
};

struct GradientApproxResult {
  Vector g;
  NetworkMetrics metrics;
  int enforcement_outer = 0;  // max over columns; 0 on the fast path
  ApproxPath path = ApproxPath::kSaddleGabp;
};

struct ApproxConfig {
  GabpOptions gabp;  // budget for the fast saddle run
  double enforce_outer_tol = 1e-6;
  int enforce_max_outer = 2000;
  // Inner round budget of the fallback's loaded solves; independent of the
  // fast path's budget, which may be starved deliberately.
  long long enforce_inner_max_rounds = 20000;
};

// Estimates the gradient from the saddle embedding: GaBP variances on it
// approximate diag(Y), and
//   g_i = (Y_ii + z_i) / z_i^2 + kappa * phi'(z_i).
// The embedding is indefinite, so the GaBP estimates may be poor or the run
// may diverge; no clamping is applied. If the fast path fails, the needed
// diagonal entries are extracted exactly by enforced column solves
// (E r = e_{n+i}, read component n+i). Throws ApproximationUnavailable when
// both paths fail.
GradientApproxResult gradient_approx(const SensorProblem& p, VectorRef z,
                                     const ApproxConfig& config);

// Truncated curvature: d_i = -(g~_i)^2 - kappa (phi''-magnitude)_i, the
// diagonal-only Hessian surrogate built from the approximate gradient
// (squaring all of g~, barrier term included). Strictly negative for
// kappa > 0.
Vector hessian_diag_approx(const SensorProblem& p, VectorRef g_approx,
                           VectorRef z);

// Barrier derivative helpers shared with the Newton loop.
Vector barrier_gradient(const SensorProblem& p, VectorRef z);   // phi'(z)
Vector barrier_curvature(const SensorProblem& p, VectorRef z);  // |phi''(z)|

}  // namespace sensel

#endif  // SENSEL_BARRIER_HPP
