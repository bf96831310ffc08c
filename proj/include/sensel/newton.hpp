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

#ifndef SENSEL_NEWTON_HPP
#define SENSEL_NEWTON_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sensel/barrier.hpp"
#include "sensel/gabp.hpp"
#include "sensel/types.hpp"

namespace sensel {

// How each Newton step obtains its gradient, curvature and direction.
//   kReferenceDense: centralized dense algebra end to end (baseline).
//   kExact:          X from per-column enforced GaBP solves of
//                    (A^T diag(z) A) r = e_i, full Hessian, both direction
//                    systems by enforced GaBP. Solves the same problem as the
//                    baseline, over the simulated network.
//   kTruncated:      approximate gradient from the saddle embedding, diagonal
//                    Hessian surrogate, O(m) direction.
enum class Backend { kReferenceDense, kExact, kTruncated };

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

struct NewtonConfig {
  double tolerance = 1e-3;  // stop once decrement/2 <= tolerance
  int max_iterations = 50;
  double ls_alpha = 0.01;           // Armijo fraction, in (0, 0.5)
  double ls_beta = 0.5;             // backtracking factor, in (0, 1)
  double boundary_fraction = 0.99;  // fraction of the distance to the box edge
  Backend backend = Backend::kReferenceDense;
  GabpOptions gabp;                 // message threshold default 1e-8
  double enforce_outer_tol = 1e-6;  // residual tolerance of enforced solves
  int enforce_max_outer = 2000;
  // When set, every step also evaluates the dense gradient and records the
  // relative error of the backend's gradient against it.
  bool gradient_oracle = false;

  void validate() const;
};

struct NewtonIteration {
  int iter = 0;
  double objective_value = 0.0;  // f(z) at the start of the iteration
  double decrement = 0.0;        // lambda^2 = g . dz
  double step_size = 0.0;        // 0 for the terminating iteration
  double gradient_rel_error =
      std::numeric_limits<double>::quiet_NaN();  // oracle only
  long long gabp_rounds = 0;
  long long gabp_messages = 0;
  int enforcement_outer = 0;  // max outer-loop count seen this iteration
  bool fallback_direction = false;  // projected gradient used instead
  ApproxPath approx_path = ApproxPath::kSaddleGabp;
  Vector z_after;  // iterate after the update (== previous z on termination)
};

struct SolveTrace {
  Backend backend = Backend::kReferenceDense;
  std::vector<NewtonIteration> iterations;
  long long total_rounds = 0;
  long long total_messages = 0;
  int max_enforcement_outer = 0;
  bool converged = false;
  std::string error;  // empty when the decrement test was met
  std::vector<std::string> notes;

  int newton_iterations() const {
    return static_cast<int>(iterations.size());
  }
};

struct NewtonResult {
  Vector z;
  SolveTrace trace;
};

// Uniform starting point z = (k/m) 1: strictly interior, sums to k.
Vector feasible_init(Index m, Index k);

enum class DirectionSolver { kDense, kGabpEnforced };

struct DirectionResult {
  Vector dz;
  NetworkMetrics metrics;     // zero for the dense solver
  int enforcement_outer = 0;  // max over the two solves
};

// Equality-constrained Newton direction from the full Hessian:
//   dz = -H^{-1} g + (1^T H^{-1} g / 1^T H^{-1} 1) H^{-1} 1,
// which satisfies 1^T dz = 0. Solves the two linear systems either densely
// or by enforced GaBP.
DirectionResult search_direction_full(MatrixRef H, VectorRef g,
                                      DirectionSolver solver,
                                      const GabpOptions& gabp_options = {},
                                      double outer_tol = 1e-6,
                                      int max_outer = 2000);

// Same direction formula with a diagonal Hessian, applied elementwise.
// Templated on the scalar so tests can instantiate a counting type and
// verify the O(m) cost; runs in one pass over the vectors.
template <typename Scalar>
std::vector<Scalar> search_direction_diag_impl(const std::vector<Scalar>& d,
                                               const std::vector<Scalar>& g);

Vector search_direction_diag(VectorRef hessian_diag, VectorRef g);

// Backtracking line search for the maximization: caps the step strictly
// inside the barrier domain (boundary_fraction of the distance), starts at
// min(1, cap) and halves until
//   f(z + t dz) >= f(z) + ls_alpha * t * (g . dz).
// Throws NotAscentDirection when g . dz <= 0 and LineSearchStall when t
// underflows.
double line_search(const SensorProblem& p, VectorRef z, VectorRef dz,
                   VectorRef g, const NewtonConfig& config);

// The equality-constrained Newton loop. Convergence issues are reported in
// the trace (converged flag and error string) rather than thrown, so callers
// always get the iterate history; input errors still throw.
NewtonResult newton_solve(const SensorProblem& p, const NewtonConfig& config);

// --- template definition ---

template <typename Scalar>
std::vector<Scalar> search_direction_diag_impl(const std::vector<Scalar>& d,
                                               const std::vector<Scalar>& g) {
  const size_t m = d.size();
  std::vector<Scalar> u(m), v(m), dz(m);
  Scalar sum_u(0.0), sum_v(0.0);
  for (size_t i = 0; i < m; ++i) {
    u[i] = g[i] / d[i];
    v[i] = Scalar(1.0) / d[i];
    sum_u = sum_u + u[i];
    sum_v = sum_v + v[i];
  }
  const Scalar ratio = sum_u / sum_v;
  for (size_t i = 0; i < m; ++i) {
    dz[i] = ratio * v[i] - u[i];
  }
  return dz;
}

}  // namespace sensel

#endif  // SENSEL_NEWTON_HPP
