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

#include "sensel/check.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "sensel/dense.hpp"
#include "sensel/errors.hpp"
#include "sensel/newton.hpp"

namespace sensel {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

CheckReport run_instance_checks(const SensorProblem& p) {
  CheckReport report;
  p.validate();
  const Index m = p.num_sensors();
  const Vector z0 = feasible_init(m, p.k);

  // Finite-difference gradient check.
  {
    const double step = 1e-5;
    const Vector g = gradient_exact(p, z0).g;
    double worst = 0.0;
    for (Index i = 0; i < m; ++i) {
      Vector zp = z0, zm = z0;
      zp[i] += step;
      zm[i] -= step;
      const double fd = (objective(p, zp) - objective(p, zm)) / (2.0 * step);
      worst = std::max(worst, std::abs(fd - g[i]));
    }
    const double rel = worst / std::max(1.0, g.cwiseAbs().maxCoeff());
    report.items.push_back(
        {"gradient-vs-finite-difference", rel <= 1e-5, "rel err " + fmt(rel)});
  }

  // Finite-difference Hessian check (differences of the gradient).
  {
    const double step = 1e-5;
    const GradientExact ge = gradient_exact(p, z0);
    const Matrix H = hessian_exact(p, z0, ge.X);
    double worst = 0.0;
    for (Index i = 0; i < m; ++i) {
      Vector zp = z0, zm = z0;
      zp[i] += step;
      zm[i] -= step;
      const Vector col =
          (gradient_exact(p, zp).g - gradient_exact(p, zm).g) / (2.0 * step);
      worst = std::max(worst, (col - H.col(i)).cwiseAbs().maxCoeff());
    }
    const double rel = worst / H.cwiseAbs().maxCoeff();
    report.items.push_back(
        {"hessian-vs-finite-difference", rel <= 1e-4, "rel err " + fmt(rel)});
  }

  // Saddle-embedding identity: the exact lower-right diagonal of E^{-1}
  // reproduces the dense gradient through the estimation formula.
  {
    const Matrix E = saddle_matrix(p, z0);
    const Matrix Einv = Eigen::PartialPivLU<Matrix>(E).inverse();
    const Vector y = Einv.diagonal().tail(m);
    const Vector g_via_saddle =
        ((y.array() + z0.array()) / z0.array().square()).matrix() +
        p.kappa * barrier_gradient(p, z0);
    const Vector g = gradient_exact(p, z0).g;
    const double err = (g_via_saddle - g).cwiseAbs().maxCoeff() /
                       std::max(1.0, g.cwiseAbs().maxCoeff());
    report.items.push_back(
        {"saddle-diagonal-identity", err <= 1e-8, "rel err " + fmt(err)});
  }

  // Enforced GaBP solve against the dense answer on A^T diag(z) A.
  {
    const Matrix Q = weighted_gram(p.A, z0);
    const Vector b = Vector::Ones(Q.rows());
    const EnforcedResult er = enforced_solve(Q, b, GabpOptions{}, 1e-8, 5000);
    const Vector x = solve_direct(Q, b);
    const double err = (er.x - x).cwiseAbs().maxCoeff() /
                       std::max(1.0, x.cwiseAbs().maxCoeff());
    report.items.push_back({"enforced-gabp-vs-dense", err <= 1e-6,
                            "rel err " + fmt(err) + ", outer " +
                                std::to_string(er.outer_iterations)});
  }

  // Feasible start: sums to k, strictly interior.
  {
    const double sum_err = std::abs(z0.sum() - static_cast<double>(p.k));
    const bool interior = is_interior(p, z0);
    report.items.push_back({"feasible-start", sum_err <= 1e-9 && interior,
                            "sum err " + fmt(sum_err)});
  }

  // Newton direction stays on the constraint plane.
  {
    const GradientExact ge = gradient_exact(p, z0);
    const Matrix H = hessian_exact(p, z0, ge.X);
    const Vector dz =
        search_direction_full(H, ge.g, DirectionSolver::kDense).dz;
    const double drift =
        std::abs(dz.sum()) / std::max(1e-30, dz.cwiseAbs().sum());
    report.items.push_back(
        {"direction-zero-sum", drift <= 1e-9, "1^T dz / |dz|_1 " + fmt(drift)});
  }

  return report;
}

}  // namespace sensel
