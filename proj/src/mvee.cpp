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

#include "sensel/mvee.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "sensel/dense.hpp"
#include "sensel/errors.hpp"

namespace sensel {

MveeResult mvee_solve(MatrixRef points, double kappa, double tol,
                      Backend backend) {
  const Index m = points.rows();
  const Index n = points.cols();
  if (m <= n) {
    throw DegeneratePoints("mvee: need more points than dimensions, got m=" +
                           std::to_string(m) + " n=" + std::to_string(n));
  }
  {
    Eigen::LLT<Matrix> llt(Matrix(points.transpose() * points));
    if (llt.info() != Eigen::Success) {
      throw DegeneratePoints("mvee: points do not span the space");
    }
  }

  SensorProblem p;
  p.A = points;
  p.k = n;
  p.kappa = kappa;
  p.barrier = BarrierKind::kLowerOnly;

  NewtonConfig config;
  config.tolerance = tol;
  config.backend = backend;

  NewtonResult nr = newton_solve(p, config);
  if (!nr.trace.converged) {
    throw NoConvergence("mvee: dual solve failed: " + nr.trace.error);
  }

  MveeResult result;
  result.weights = std::move(nr.z);
  result.ellipsoid.M = invert_spd(weighted_gram(points, result.weights));
  result.trace = std::move(nr.trace);
  return result;
}

EnclosureReport enclosure_check(const Ellipsoid& e, MatrixRef points,
                                double tol) {
  if (points.cols() != e.M.rows()) {
    throw ShapeMismatch("enclosure_check: points are " +
                        std::to_string(points.cols()) + "-dimensional, M is " +
                        std::to_string(e.M.rows()) + "x" +
                        std::to_string(e.M.cols()));
  }
  EnclosureReport report;
  const Matrix W = points * e.M;
  report.ratios = W.cwiseProduct(points).rowwise().sum();
  report.max_ratio = report.ratios.maxCoeff();
  for (Index i = 0; i < report.ratios.size(); ++i) {
    if (report.ratios[i] > 1.0 + tol) {
      report.violations.push_back(i);
    }
  }
  return report;
}

}  // namespace sensel
