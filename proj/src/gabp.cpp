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

#include "sensel/gabp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "sensel/dense.hpp"
#include "sensel/errors.hpp"

namespace sensel {

namespace {

constexpr double kPivotTol = 1e-14;

// Half-edge adjacency in CSR form. Entry t under node v describes the
// directed pair between v and entries_nbr[t]: the slot of the incoming
// message (nbr -> v) and of the outgoing one (v -> nbr). Entries are sorted
// by neighbor index so every reduction runs in ascending node order.
struct Adjacency {
  std::vector<Index> offsets;
  std::vector<Index> nbr;
  std::vector<Index> in_slot;
  std::vector<Index> out_slot;
  std::vector<double> weight;

  explicit Adjacency(const GabpGraph& g) {
    const Index n = g.node_count();
    const Index e = static_cast<Index>(g.edges.size());
    offsets.assign(static_cast<size_t>(n) + 1, 0);
    for (const auto& ed : g.edges) {
      ++offsets[static_cast<size_t>(ed.i) + 1];
      ++offsets[static_cast<size_t>(ed.j) + 1];
    }
    for (Index v = 0; v < n; ++v) {
      offsets[static_cast<size_t>(v) + 1] += offsets[static_cast<size_t>(v)];
    }
    nbr.resize(2 * static_cast<size_t>(e));
    in_slot.resize(2 * static_cast<size_t>(e));
    out_slot.resize(2 * static_cast<size_t>(e));
    weight.resize(2 * static_cast<size_t>(e));
    std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
    for (Index k = 0; k < e; ++k) {
      const auto& ed = g.edges[static_cast<size_t>(k)];
      // slot 2k carries i -> j, slot 2k+1 carries j -> i
      Index t = cursor[static_cast<size_t>(ed.i)]++;
      nbr[static_cast<size_t>(t)] = ed.j;
      in_slot[static_cast<size_t>(t)] = 2 * k + 1;
      out_slot[static_cast<size_t>(t)] = 2 * k;
      weight[static_cast<size_t>(t)] = ed.w;
      t = cursor[static_cast<size_t>(ed.j)]++;
      nbr[static_cast<size_t>(t)] = ed.i;
      in_slot[static_cast<size_t>(t)] = 2 * k;
      out_slot[static_cast<size_t>(t)] = 2 * k + 1;
      weight[static_cast<size_t>(t)] = ed.w;
    }
    // Sort each node's range by neighbor index.
    for (Index v = 0; v < n; ++v) {
      const Index lo = offsets[static_cast<size_t>(v)];
      const Index hi = offsets[static_cast<size_t>(v) + 1];
      std::vector<Index> order(static_cast<size_t>(hi - lo));
      for (Index t = 0; t < hi - lo; ++t) order[static_cast<size_t>(t)] = lo + t;
      std::sort(order.begin(), order.end(), [this](Index a, Index b) {
        return nbr[static_cast<size_t>(a)] < nbr[static_cast<size_t>(b)];
      });
      apply_order(nbr, order, lo);
      apply_order(in_slot, order, lo);
      apply_order(out_slot, order, lo);
      apply_order(weight, order, lo);
    }
  }

 private:
  template <typename T>
  void apply_order(std::vector<T>& a, const std::vector<Index>& order,
                   Index lo) {
    std::vector<T> tmp(order.size());
    for (size_t t = 0; t < order.size(); ++t) {
      tmp[t] = a[static_cast<size_t>(order[t])];
    }
    std::copy(tmp.begin(), tmp.end(), a.begin() + lo);
  }
};

}  // namespace

GabpGraph GabpGraph::from_dense(MatrixRef J, VectorRef h) {
  const Matrix S = symmetrized(J);
  if (h.size() != S.rows()) {
    throw ShapeMismatch("gabp: potential length " + std::to_string(h.size()) +
                        " vs dimension " + std::to_string(S.rows()));
  }
  GabpGraph g;
  g.diag = S.diagonal();
  g.potential = h;
  for (Index i = 0; i < S.rows(); ++i) {
    for (Index j = i + 1; j < S.cols(); ++j) {
      if (S(i, j) != 0.0) {
        g.edges.push_back({i, j, S(i, j)});
      }
    }
  }
  return g;
}

GabpResult run_gabp(const GabpGraph& graph, const GabpOptions& options) {
  if (options.threshold <= 0.0) {
    throw DomainError("run_gabp: threshold must be positive");
  }
  const Index n = graph.node_count();
  const Index num_edges = static_cast<Index>(graph.edges.size());
  const Index num_slots = 2 * num_edges;
  const Adjacency adj(graph);

  std::vector<double> alpha(static_cast<size_t>(num_slots), 0.0);
  std::vector<double> beta(static_cast<size_t>(num_slots), 0.0);
  std::vector<double> alpha_next(alpha), beta_next(beta);
  std::vector<double> sum_a(static_cast<size_t>(n), 0.0);
  std::vector<double> sum_b(static_cast<size_t>(n), 0.0);
  std::vector<Index> nnz_in(static_cast<size_t>(n), 0);

  GabpResult result;
  GabpStatus status = GabpStatus::kMaxRounds;
  long long round = 0;
  while (round < options.max_rounds) {
    ++round;
    // Node totals from the previous round, ascending neighbor order.
    for (Index v = 0; v < n; ++v) {
      double sa = 0.0, sb = 0.0;
      Index nz = 0;
      for (Index t = adj.offsets[static_cast<size_t>(v)];
           t < adj.offsets[static_cast<size_t>(v) + 1]; ++t) {
        const double a = alpha[static_cast<size_t>(adj.in_slot[static_cast<size_t>(t)])];
        sa += a;
        sb += beta[static_cast<size_t>(adj.in_slot[static_cast<size_t>(t)])];
        if (a != 0.0) ++nz;
      }
      sum_a[static_cast<size_t>(v)] = sa;
      sum_b[static_cast<size_t>(v)] = sb;
      nnz_in[static_cast<size_t>(v)] = nz;
    }
    // All directed messages, simultaneously from previous-round values.
    double delta = 0.0;
    bool diverged = false;
    for (Index v = 0; v < n; ++v) {
      const double jv = graph.diag[v];
      const double hv = graph.potential[v];
      for (Index t = adj.offsets[static_cast<size_t>(v)];
           t < adj.offsets[static_cast<size_t>(v) + 1]; ++t) {
        const size_t in = static_cast<size_t>(adj.in_slot[static_cast<size_t>(t)]);
        const size_t out = static_cast<size_t>(adj.out_slot[static_cast<size_t>(t)]);
        const double a_in = alpha[in];
        const double a_excl = jv + sum_a[static_cast<size_t>(v)] - a_in;
        // A node with zero self-precision and no informative incoming
        // precision (besides the target's own message, which is excluded)
        // cannot form a message yet; it keeps sending the uninformative 0.
        const bool unformed =
            jv == 0.0 && (nnz_in[static_cast<size_t>(v)] == 0 ||
                          (nnz_in[static_cast<size_t>(v)] == 1 && a_in != 0.0));
        if (unformed) {
          alpha_next[out] = alpha[out];
          beta_next[out] = beta[out];
          continue;
        }
        if (std::abs(a_excl) <= kPivotTol) {
          throw ZeroPivot("run_gabp: message denominator hit zero at node " +
                          std::to_string(v) + ", round " +
                          std::to_string(round));
        }
        const double w = adj.weight[static_cast<size_t>(t)];
        const double b_excl = hv + sum_b[static_cast<size_t>(v)] - beta[in];
        const double na = -(w * w) / a_excl;
        const double nb = -w * b_excl / a_excl;
        alpha_next[out] = na;
        beta_next[out] = nb;
        delta = std::max(delta, std::abs(na - alpha[out]));
        delta = std::max(delta, std::abs(nb - beta[out]));
        if (std::abs(na) > options.divergence_guard ||
            std::abs(nb) > options.divergence_guard) {
          diverged = true;
        }
      }
    }
    alpha.swap(alpha_next);
    beta.swap(beta_next);
    if (options.trace != nullptr) {
      for (Index v = 0; v < n; ++v) {
        for (Index t = adj.offsets[static_cast<size_t>(v)];
             t < adj.offsets[static_cast<size_t>(v) + 1]; ++t) {
          const size_t out = static_cast<size_t>(adj.out_slot[static_cast<size_t>(t)]);
          (*options.trace) << "{\"round\":" << round << ",\"from\":" << v
                           << ",\"to\":" << adj.nbr[static_cast<size_t>(t)]
                           << ",\"alpha\":" << alpha[out]
                           << ",\"beta\":" << beta[out] << "}\n";
        }
      }
    }
    if (diverged) {
      status = GabpStatus::kDiverged;
      break;
    }
    if (delta <= options.threshold) {
      status = GabpStatus::kConverged;
      break;
    }
  }

  result.rounds = round;
  result.messages_sent = 2 * static_cast<long long>(num_edges) * round;
  result.status = status;
  result.converged = (status == GabpStatus::kConverged);
  result.means = Vector::Zero(n);
  result.variances = Vector::Zero(n);
  if (result.converged) {
    for (Index v = 0; v < n; ++v) {
      double sa = 0.0, sb = 0.0;
      Index nz = 0;
      for (Index t = adj.offsets[static_cast<size_t>(v)];
           t < adj.offsets[static_cast<size_t>(v) + 1]; ++t) {
        const double a = alpha[static_cast<size_t>(adj.in_slot[static_cast<size_t>(t)])];
        sa += a;
        sb += beta[static_cast<size_t>(adj.in_slot[static_cast<size_t>(t)])];
        if (a != 0.0) ++nz;
      }
      // A zero-self-precision node needs at least two informative neighbors,
      // or some of its outgoing messages never formed and the fixed point is
      // not a solution of J x = h.
      if (graph.diag[v] == 0.0 && nz < 2) {
        throw ZeroPivot("run_gabp: node " + std::to_string(v) +
                        " has zero self-precision and under two informative "
                        "neighbors");
      }
      const double denom = graph.diag[v] + sa;
      if (std::abs(denom) <= kPivotTol) {
        throw ZeroPivot("run_gabp: marginal precision hit zero at node " +
                        std::to_string(v));
      }
      result.variances[v] = 1.0 / denom;
      result.means[v] = (graph.potential[v] + sb) / denom;
    }
  }
  return result;
}

MultiRhsResult solve_multi_rhs(MatrixRef J, MatrixRef B,
                               const GabpOptions& options) {
  MultiRhsResult out;
  out.solutions = Matrix::Zero(J.rows(), B.cols());
  if (B.cols() == 0) {
    return out;
  }
  if (B.rows() != J.rows()) {
    throw ShapeMismatch("solve_multi_rhs: rhs rows " +
                        std::to_string(B.rows()) + " vs dimension " +
                        std::to_string(J.rows()));
  }
  GabpGraph graph = GabpGraph::from_dense(J, Vector::Zero(J.rows()));
  for (Index c = 0; c < B.cols(); ++c) {
    graph.potential = B.col(c);
    const GabpResult r = run_gabp(graph, options);
    if (!r.converged) {
      throw DivergedOrMaxRounds(
          "solve_multi_rhs: instance " + std::to_string(c) +
              (r.status == GabpStatus::kDiverged ? " diverged"
                                                 : " hit max rounds"),
          c);
    }
    out.solutions.col(c) = r.means;
    out.metrics.rounds = std::max(out.metrics.rounds, r.rounds);
    out.metrics.messages += r.messages_sent;
    out.metrics.payload_scalars += 2 * r.messages_sent;
  }
  return out;
}

namespace {

// Gamma = max_i(sum_{j != i} |J_ij| - J_ii); negative means strictly
// diagonally dominant with positive diagonal.
double dominance_defect(const Matrix& J) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < J.rows(); ++i) {
    const double off = J.row(i).cwiseAbs().sum() - std::abs(J(i, i));
    worst = std::max(worst, off - J(i, i));
  }
  return worst;
}

bool is_positive_definite(const Matrix& J) {
  Eigen::LLT<Matrix> llt(J);
  return llt.info() == Eigen::Success;
}

// Richardson outer loop on the loaded system (Jw + Gamma I) x = bw + Gamma x,
// stopping on the residual of the original system J x = b.
EnforcedResult run_loaded_loop(const Matrix& Jw, const Vector& bw,
                               MatrixRef J, VectorRef b,
                               const GabpOptions& gabp_options,
                               double outer_tol, int max_outer) {
  const double defect = dominance_defect(Jw);
  const double gamma = defect < 0.0 ? 0.0 : defect + 1e-6;
  const double target = outer_tol * (1.0 + b.cwiseAbs().maxCoeff());

  GabpOptions inner = gabp_options;
  inner.threshold = std::min(gabp_options.threshold, 1e-3 * outer_tol);
  inner.trace = nullptr;

  Matrix loaded = Jw;
  loaded.diagonal().array() += gamma;
  GabpGraph graph = GabpGraph::from_dense(loaded, bw);

  EnforcedResult out;
  out.x = Vector::Zero(J.rows());
  for (int t = 1; t <= max_outer; ++t) {
    graph.potential = bw + gamma * out.x;
    const GabpResult r = run_gabp(graph, inner);
    if (!r.converged) {
      // The loaded system is strictly diagonally dominant; failure here is an
      // engine bug or an absurd round budget, not an input property.
      throw DivergedOrMaxRounds("enforced_solve: inner solve failed (status " +
                                std::to_string(static_cast<int>(r.status)) +
                                ") on a loaded system");
    }
    out.metrics += r.metrics();
    out.x = r.means;
    out.outer_iterations = t;
    const double residual = (J * out.x - b).cwiseAbs().maxCoeff();
    if (residual <= target) {
      return out;
    }
    if (gamma == 0.0) {
      // The iteration is stationary without loading; more passes cannot
      // tighten the residual.
      break;
    }
  }
  throw MaxOuterExceeded("enforced_solve: residual above " +
                         std::to_string(target) + " after " +
                         std::to_string(out.outer_iterations) +
                         " outer iterations");
}

}  // namespace

EnforcedResult enforced_solve(MatrixRef J, VectorRef b,
                              const GabpOptions& gabp_options,
                              double outer_tol, int max_outer) {
  if (b.size() != J.rows()) {
    throw ShapeMismatch("enforced_solve: rhs length " +
                        std::to_string(b.size()) + " vs dimension " +
                        std::to_string(J.rows()));
  }
  Matrix S = symmetrized(J);
  Vector rhs = b;
  // A predominantly negative diagonal flips sign cleanly: (-J)x = -b.
  if (S.diagonal().sum() < 0.0) {
    S = -S;
    rhs = -rhs;
  }
  if (dominance_defect(S) < 0.0 || is_positive_definite(S)) {
    return run_loaded_loop(S, rhs, J, b, gabp_options, outer_tol, max_outer);
  }
  Matrix neg = -S;
  if (is_positive_definite(neg)) {
    return run_loaded_loop(neg, Vector(-rhs), J, b, gabp_options, outer_tol,
                           max_outer);
  }
  // Indefinite: route through the Gram system (J^2) x = J b, which is
  // positive definite for any symmetric nonsingular J.
  Matrix gram = 0.5 * (S * S + (S * S).transpose());
  Vector gram_rhs = S * rhs;
  return run_loaded_loop(gram, gram_rhs, J, b, gabp_options, outer_tol,
                         max_outer);
}

}  // namespace sensel
