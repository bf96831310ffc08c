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

#include "sensel/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "sensel/dense.hpp"
#include "sensel/errors.hpp"

namespace sensel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::kReferenceDense:
      return "reference-dense";
    case Backend::kExact:
      return "exact";
    case Backend::kTruncated:
      return "truncated";
  }
  return "unknown";
}

Backend backend_from_name(const std::string& name) {
  if (name == "reference-dense") return Backend::kReferenceDense;
  if (name == "exact") return Backend::kExact;
  if (name == "truncated") return Backend::kTruncated;
  throw InputError("unknown backend '" + name +
                   "' (expected reference-dense | exact | truncated)");
}

void NewtonConfig::validate() const {
  if (tolerance <= 0.0) throw DomainError("newton: tolerance must be positive");
  if (ls_alpha <= 0.0 || ls_alpha >= 0.5) {
    throw DomainError("newton: ls_alpha must lie in (0, 0.5)");
  }
  if (ls_beta <= 0.0 || ls_beta >= 1.0) {
    throw DomainError("newton: ls_beta must lie in (0, 1)");
  }
  if (boundary_fraction <= 0.0 || boundary_fraction >= 1.0) {
    throw DomainError("newton: boundary_fraction must lie in (0, 1)");
  }
  if (max_iterations < 1) throw DomainError("newton: max_iterations < 1");
}

Vector feasible_init(Index m, Index k) {
  if (k < 1 || k >= m) {
    throw InfeasibleBudget("feasible_init: k=" + std::to_string(k) +
                           " not in [1, m-1] with m=" + std::to_string(m));
  }
  return Vector::Constant(m, static_cast<double>(k) / static_cast<double>(m));
}

DirectionResult search_direction_full(MatrixRef H, VectorRef g,
                                      DirectionSolver solver,
                                      const GabpOptions& gabp_options,
                                      double outer_tol, int max_outer) {
  if (H.rows() != H.cols() || H.rows() != g.size()) {
    throw ShapeMismatch("search_direction_full: H is " +
                        std::to_string(H.rows()) + "x" +
                        std::to_string(H.cols()) + ", g has " +
                        std::to_string(g.size()));
  }
  const Index m = g.size();
  const Vector ones = Vector::Ones(m);
  DirectionResult out;
  Vector u, v;
  if (solver == DirectionSolver::kDense) {
    Eigen::LDLT<Matrix> ldlt(H);
    u = ldlt.solve(g);
    v = ldlt.solve(ones);
    // refinement pass
    u += ldlt.solve(Vector(g - H * u));
    v += ldlt.solve(Vector(ones - H * v));
    const double scale = 1.0 + g.cwiseAbs().maxCoeff();
    if (!u.allFinite() || !v.allFinite() ||
        (H * u - g).cwiseAbs().maxCoeff() > 1e-8 * scale) {
      throw SingularHessian("search_direction_full: dense solve failed");
    }
  } else {
    // The two systems are independent; a network would run them in parallel,
    // so rounds aggregate as max and traffic as sum.
    const EnforcedResult ru =
        enforced_solve(H, g, gabp_options, outer_tol, max_outer);
    const EnforcedResult rv =
        enforced_solve(H, ones, gabp_options, outer_tol, max_outer);
    u = ru.x;
    v = rv.x;
    out.metrics.rounds = std::max(ru.metrics.rounds, rv.metrics.rounds);
    out.metrics.messages = ru.metrics.messages + rv.metrics.messages;
    out.metrics.payload_scalars =
        ru.metrics.payload_scalars + rv.metrics.payload_scalars;
    out.enforcement_outer = std::max(ru.outer_iterations, rv.outer_iterations);
  }
  const double denom = v.sum();
  if (std::abs(denom) < 1e-14) {
    throw DegenerateProjection("search_direction_full: 1^T H^{-1} 1 is zero");
  }
  out.dz = (u.sum() / denom) * v - u;
  return out;
}

Vector search_direction_diag(VectorRef hessian_diag, VectorRef g) {
  if (hessian_diag.size() != g.size()) {
    throw ShapeMismatch("search_direction_diag: length mismatch");
  }
  if ((hessian_diag.array() == 0.0).any()) {
    throw ZeroDiagonal("search_direction_diag: zero Hessian diagonal entry");
  }
  std::vector<double> d(hessian_diag.data(), hessian_diag.data() + hessian_diag.size());
  std::vector<double> gv(g.data(), g.data() + g.size());
  const std::vector<double> dz = search_direction_diag_impl(d, gv);
  return Eigen::Map<const Vector>(dz.data(), static_cast<Index>(dz.size()));
}

namespace {

// Objective that treats factorization failure at a trial point as -inf so
// backtracking simply rejects the step.
double objective_or_reject(const SensorProblem& p, const Vector& z) {
  try {
    return objective(p, z);
  } catch (const NotPositiveDefinite&) {
    return -kInf;
  } catch (const DomainError&) {
    return -kInf;
  }
}

}  // namespace

double line_search(const SensorProblem& p, VectorRef z, VectorRef dz,
                   VectorRef g, const NewtonConfig& config) {
  const double slope = g.dot(dz);
  if (!(slope > 0.0)) {
    throw NotAscentDirection("line_search: g . dz = " + std::to_string(slope));
  }
  if (dz.cwiseAbs().maxCoeff() == 0.0) {
    throw NotAscentDirection("line_search: zero direction");
  }
  // Largest step keeping z + t dz strictly inside the barrier domain.
  double t_sup = kInf;
  for (Index i = 0; i < z.size(); ++i) {
    if (dz[i] > 0.0 && p.barrier == BarrierKind::kBox01) {
      t_sup = std::min(t_sup, (1.0 - z[i]) / dz[i]);
    } else if (dz[i] < 0.0) {
      t_sup = std::min(t_sup, z[i] / -dz[i]);
    }
  }
  double t = std::isfinite(t_sup)
                 ? std::min(1.0, config.boundary_fraction * t_sup)
                 : 1.0;
  const double f0 = objective(p, z);
  while (t > 1e-12) {
    const Vector trial = z + t * dz;
    if (objective_or_reject(p, trial) >=
        f0 + config.ls_alpha * t * slope) {
      return t;
    }
    t *= config.ls_beta;
  }
  throw LineSearchStall("line_search: step size underflow");
}

namespace {

// X columns from enforced solves of (A^T diag(z) A) r_i = e_i, run logically
// in parallel across the n right-hand sides.
struct InverseEstimate {
  Matrix X;
  NetworkMetrics metrics;
  int enforcement_outer = 0;
};

InverseEstimate enforced_inverse(const Matrix& Q, const NewtonConfig& config) {
  const Index n = Q.rows();
  InverseEstimate out;
  out.X = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    const EnforcedResult r = enforced_solve(
        Q, e, config.gabp, config.enforce_outer_tol, config.enforce_max_outer);
    out.X.col(i) = r.x;
    out.metrics.rounds = std::max(out.metrics.rounds, r.metrics.rounds);
    out.metrics.messages += r.metrics.messages;
    out.metrics.payload_scalars += r.metrics.payload_scalars;
    out.enforcement_outer = std::max(out.enforcement_outer, r.outer_iterations);
  }
  const Matrix sym = 0.5 * (out.X + out.X.transpose());
  out.X = sym;
  return out;
}

struct StepData {
  Vector g;
  Vector dz;
  NetworkMetrics metrics;
  int enforcement_outer = 0;
  ApproxPath approx_path = ApproxPath::kSaddleGabp;
};

StepData compute_step(const SensorProblem& p, const Vector& z,
                      const NewtonConfig& config) {
  StepData s;
  switch (config.backend) {
    case Backend::kReferenceDense: {
      const GradientExact ge = gradient_exact(p, z);
      const Matrix H = hessian_exact(p, z, ge.X);
      s.g = ge.g;
      s.dz = search_direction_full(H, s.g, DirectionSolver::kDense).dz;
      break;
    }
    case Backend::kExact: {
      const Matrix Q = weighted_gram(p.A, z);
      const InverseEstimate inv = enforced_inverse(Q, config);
      s.metrics += inv.metrics;
      s.enforcement_outer = inv.enforcement_outer;
      const Matrix W = p.A * inv.X;
      s.g = W.cwiseProduct(p.A).rowwise().sum() +
            p.kappa * barrier_gradient(p, z);
      const Matrix H = hessian_exact(p, z, inv.X);
      DirectionResult dir = search_direction_full(
          H, s.g, DirectionSolver::kGabpEnforced, config.gabp,
          config.enforce_outer_tol, config.enforce_max_outer);
      s.metrics += dir.metrics;
      s.enforcement_outer = std::max(s.enforcement_outer, dir.enforcement_outer);
      s.dz = std::move(dir.dz);
      break;
    }
    case Backend::kTruncated: {
      ApproxConfig ac;
      ac.gabp = config.gabp;
      ac.enforce_outer_tol = config.enforce_outer_tol;
      ac.enforce_max_outer = config.enforce_max_outer;
      GradientApproxResult ga = gradient_approx(p, z, ac);
      s.metrics += ga.metrics;
      s.enforcement_outer = ga.enforcement_outer;
      s.approx_path = ga.path;
      s.g = std::move(ga.g);
      const Vector d = hessian_diag_approx(p, s.g, z);
      s.dz = search_direction_diag(d, s.g);
      break;
    }
  }
  return s;
}

Vector projected_gradient(const Vector& g) {
  return g - Vector::Constant(g.size(), g.mean());
}

}  // namespace

NewtonResult newton_solve(const SensorProblem& p, const NewtonConfig& config) {
  p.validate();
  config.validate();

  NewtonResult result;
  result.trace.backend = config.backend;
  if (config.backend == Backend::kTruncated) {
    result.trace.notes.push_back(
        "hessian-diag surrogate squares the full approximate gradient, "
        "barrier term included");
  }
  result.z = feasible_init(p.num_sensors(), p.k);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    NewtonIteration rec;
    rec.iter = iter;
    rec.objective_value = objective(p, result.z);
    try {
      StepData s = compute_step(p, result.z, config);
      rec.gabp_rounds = s.metrics.rounds;
      rec.gabp_messages = s.metrics.messages;
      rec.enforcement_outer = s.enforcement_outer;
      rec.approx_path = s.approx_path;
      if (config.gradient_oracle) {
        const Vector g_ref = gradient_exact(p, result.z).g;
        const double scale = std::max(g_ref.cwiseAbs().maxCoeff(), 1e-300);
        rec.gradient_rel_error =
            (s.g - g_ref).cwiseAbs().maxCoeff() / scale;
      }

      double decrement = s.g.dot(s.dz);
      if (decrement <= 0.0 && config.backend == Backend::kTruncated) {
        // The surrogate direction failed to be an ascent direction for its
        // own gradient; fall back to the projected gradient.
        s.dz = projected_gradient(s.g);
        decrement = s.g.dot(s.dz);
        rec.fallback_direction = true;
      }
      rec.decrement = decrement;
      if (decrement / 2.0 <= config.tolerance) {
        rec.z_after = result.z;
        result.trace.iterations.push_back(rec);
        result.trace.converged = true;
        break;
      }

      double t;
      try {
        t = line_search(p, result.z, s.dz, s.g, config);
      } catch (const LineSearchStall&) {
        if (config.backend == Backend::kTruncated && !rec.fallback_direction) {
          // Retry along the projected gradient before giving up.
          s.dz = projected_gradient(s.g);
          rec.fallback_direction = true;
          rec.decrement = s.g.dot(s.dz);
          if (rec.decrement / 2.0 <= config.tolerance) {
            rec.z_after = result.z;
            result.trace.iterations.push_back(rec);
            result.trace.converged = true;
            break;
          }
          t = line_search(p, result.z, s.dz, s.g, config);
        } else {
          throw;
        }
      }
      rec.step_size = t;
      result.z += t * s.dz;
      rec.z_after = result.z;
      result.trace.iterations.push_back(rec);
    } catch (const ConvergenceError& ex) {
      rec.z_after = result.z;
      result.trace.iterations.push_back(rec);
      result.trace.error = ex.what();
      break;
    }
  }

  if (!result.trace.converged && result.trace.error.empty()) {
    result.trace.error = "max Newton iterations (" +
                         std::to_string(config.max_iterations) +
                         ") without meeting the decrement test";
  }
  for (const auto& it : result.trace.iterations) {
    result.trace.total_rounds += it.gabp_rounds;
    result.trace.total_messages += it.gabp_messages;
    result.trace.max_enforcement_outer =
        std::max(result.trace.max_enforcement_outer, it.enforcement_outer);
  }
  return result;
}

}  // namespace sensel
