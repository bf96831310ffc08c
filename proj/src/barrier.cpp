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

#include "sensel/barrier.hpp"

#include <cmath>
#include <string>

#include "sensel/dense.hpp"
#include "sensel/errors.hpp"

namespace sensel {

void SensorProblem::validate() const {
  const Index m = num_sensors();
  const Index n = num_params();
  if (n < 1 || m < n) {
    throw DomainError("problem: need m >= n >= 1, got m=" + std::to_string(m) +
                      " n=" + std::to_string(n));
  }
  if (k < n || k >= m) {
    throw InfeasibleBudget("problem: budget k=" + std::to_string(k) +
                           " outside [n, m-1] = [" + std::to_string(n) + ", " +
                           std::to_string(m - 1) + "]");
  }
  if (kappa <= 0.0) {
    throw DomainError("problem: kappa must be positive");
  }
  for (Index j = 0; j < n; ++j) {
    if (A.col(j).cwiseAbs().maxCoeff() == 0.0) {
      throw DomainError("problem: column " + std::to_string(j) +
                        " of A is all zero");
    }
  }
}

bool is_interior(const SensorProblem& p, VectorRef z) {
  if (p.barrier == BarrierKind::kBox01) {
    return (z.array() > 0.0).all() && (z.array() < 1.0).all();
  }
  return (z.array() > 0.0).all();
}

namespace {

void require_interior(const SensorProblem& p, VectorRef z) {
  if (z.size() != p.num_sensors()) {
    throw ShapeMismatch("z has length " + std::to_string(z.size()) +
                        ", problem has m=" + std::to_string(p.num_sensors()));
  }
  if (!is_interior(p, z)) {
    throw DomainError("z is not strictly inside the barrier domain");
  }
}

}  // namespace

Matrix weighted_gram(MatrixRef A, VectorRef z) {
  Matrix Q = A.transpose() * z.asDiagonal() * A;
  return 0.5 * (Q + Q.transpose());
}

Vector barrier_gradient(const SensorProblem& p, VectorRef z) {
  if (p.barrier == BarrierKind::kBox01) {
    return (1.0 / z.array() - 1.0 / (1.0 - z.array())).matrix();
  }
  return z.cwiseInverse();
}

Vector barrier_curvature(const SensorProblem& p, VectorRef z) {
  if (p.barrier == BarrierKind::kBox01) {
    return (1.0 / z.array().square() + 1.0 / (1.0 - z.array()).square())
        .matrix();
  }
  return z.array().square().inverse().matrix();
}

double objective(const SensorProblem& p, VectorRef z) {
  require_interior(p, z);
  const double log_det = cholesky_logdet(weighted_gram(p.A, z)).log_det;
  double phi = z.array().log().sum();
  if (p.barrier == BarrierKind::kBox01) {
    phi += (1.0 - z.array()).log().sum();
  }
  return log_det + p.kappa * phi;
}

GradientExact gradient_exact(const SensorProblem& p, VectorRef z) {
  require_interior(p, z);
  GradientExact out;
  out.X = invert_spd(weighted_gram(p.A, z));
  const Matrix W = p.A * out.X;
  // g_i = a_i^T X a_i + kappa * phi'(z_i), i.e. diag(A X A^T) plus barrier.
  out.g = W.cwiseProduct(p.A).rowwise().sum() +
          p.kappa * barrier_gradient(p, z);
  return out;
}

Matrix hessian_exact(const SensorProblem& p, VectorRef z, MatrixRef X) {
  require_interior(p, z);
  if (X.rows() != p.num_params() || X.cols() != p.num_params()) {
    throw ShapeMismatch("hessian_exact: X must be n x n");
  }
  const Matrix B = p.A * X * p.A.transpose();
  Matrix H = -B.cwiseProduct(B);
  H.diagonal() -= p.kappa * barrier_curvature(p, z);
  return 0.5 * (H + H.transpose());
}

Matrix saddle_matrix(const SensorProblem& p, VectorRef z) {
  if (z.size() != p.num_sensors()) {
    throw ShapeMismatch("saddle_matrix: z length mismatch");
  }
  if ((z.array() <= 0.0).any()) {
    throw DomainError("saddle_matrix: z must be strictly positive");
  }
  const Index m = p.num_sensors();
  const Index n = p.num_params();
  Matrix E = Matrix::Zero(n + m, n + m);
  E.topRightCorner(n, m) = p.A.transpose();
  E.bottomLeftCorner(m, n) = p.A;
  E.bottomRightCorner(m, m).diagonal() = -z.cwiseInverse();
  return E;
}

GradientApproxResult gradient_approx(const SensorProblem& p, VectorRef z,
                                     const ApproxConfig& config) {
  require_interior(p, z);
  const Index m = p.num_sensors();
  const Index n = p.num_params();
  const Matrix E = saddle_matrix(p, z);

  GradientApproxResult out;
  Vector y_diag(m);
  bool fast_ok = false;
  try {
    GabpGraph graph = GabpGraph::from_dense(E, Vector::Zero(n + m));
    const GabpResult r = run_gabp(graph, config.gabp);
    if (r.converged) {
      y_diag = r.variances.tail(m);
      out.metrics = r.metrics();
      out.path = ApproxPath::kSaddleGabp;
      fast_ok = true;
    }
  } catch (const ZeroPivot&) {
    // fall through to the enforced path
  }

  if (!fast_ok) {
    out.path = ApproxPath::kEnforcedColumns;
    out.metrics = {};
    GabpOptions inner = config.gabp;
    inner.max_rounds = config.enforce_inner_max_rounds;
    for (Index i = 0; i < m; ++i) {
      Vector e = Vector::Zero(n + m);
      e[n + i] = 1.0;
      EnforcedResult er;
      try {
        er = enforced_solve(E, e, inner, config.enforce_outer_tol,
                            config.enforce_max_outer);
      } catch (const ConvergenceError& ex) {
        throw ApproximationUnavailable(
            "gradient_approx: saddle GaBP failed and enforced column " +
            std::to_string(i) + " failed too: " + ex.what());
      }
      y_diag[i] = er.x[n + i];
      // Columns run logically in parallel: max rounds, summed traffic.
      out.metrics.rounds = std::max(out.metrics.rounds, er.metrics.rounds);
      out.metrics.messages += er.metrics.messages;
      out.metrics.payload_scalars += er.metrics.payload_scalars;
      out.enforcement_outer =
          std::max(out.enforcement_outer, er.outer_iterations);
    }
  }

  out.g = ((y_diag.array() + z.array()) / z.array().square()).matrix() +
          p.kappa * barrier_gradient(p, z);
  return out;
}

Vector hessian_diag_approx(const SensorProblem& p, VectorRef g_approx,
                           VectorRef z) {
  require_interior(p, z);
  if (g_approx.size() != z.size()) {
    throw ShapeMismatch("hessian_diag_approx: gradient/z length mismatch");
  }
  return -g_approx.array().square().matrix() -
         p.kappa * barrier_curvature(p, z);
}

}  // namespace sensel
