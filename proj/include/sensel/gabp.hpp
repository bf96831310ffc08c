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

#ifndef SENSEL_GABP_HPP
#define SENSEL_GABP_HPP

#include <iosfwd>
#include <vector>

#include "sensel/types.hpp"

namespace sensel {

// Gaussian belief propagation over the model
//   p(x) ~ exp(-1/2 x^T J x + h^T x),
// run as synchronous message-passing rounds on a simulated network. Each
// undirected edge carries two directed messages (alpha_ij, beta_ij); all
// directed messages of a round are computed from the previous round's values,
// which makes the schedule deterministic and gives a clean rounds metric.

// One linear-solve instance: J's diagonal, the potential vector h, and the
// list of nonzero off-diagonal entries stored once per undirected edge.
struct GabpGraph {
  struct Edge {
    Index i;   // smaller endpoint
    Index j;   // larger endpoint
    double w;  // J_ij = J_ji, nonzero
  };

  Vector diag;       // J_ii
  Vector potential;  // h_i
  std::vector<Edge> edges;

  Index node_count() const { return diag.size(); }

  // Builds the graph from a dense symmetric matrix; off-diagonal zeros do not
  // become edges (isolated nodes are solved locally in the first round).
  static GabpGraph from_dense(MatrixRef J, VectorRef h);
};

// Simulated-network cost of a solve. For the synchronous schedule,
// messages = 2 * |edges| * rounds, and each message carries the
// (alpha, beta) pair, so payload_scalars = 2 * messages.
struct NetworkMetrics {
  long long rounds = 0;
  long long messages = 0;
  long long payload_scalars = 0;

  NetworkMetrics& operator+=(const NetworkMetrics& o) {
    rounds += o.rounds;
    messages += o.messages;
    payload_scalars += o.payload_scalars;
    return *this;
  }
};

enum class GabpStatus {
  kConverged,
  kMaxRounds,  // message deltas still above threshold after max_rounds
  kDiverged,   // a message magnitude crossed the divergence guard
};

struct GabpResult {
  Vector means;      // mu_i; solves J mu = h exactly at a fixed point
  Vector variances;  // K_i; approximate on loopy graphs
  long long rounds = 0;
  long long messages_sent = 0;
  bool converged = false;
  GabpStatus status = GabpStatus::kMaxRounds;

  NetworkMetrics metrics() const {
    return {rounds, messages_sent, 2 * messages_sent};
  }
};

struct GabpOptions {
  double threshold = 1e-8;  // max |message delta| accepted as converged
  long long max_rounds = 2000;
  // Messages beyond this magnitude abort the run as diverged.
  double divergence_guard = 1e12;
  // Optional per-round message dump (line-delimited records), for debugging.
  std::ostream* trace = nullptr;
};

// Runs the synchronous message recursion
//   alpha_excl(i,j) = J_ii + sum_{k in N(i)\j} alpha_ki
//   beta_excl(i,j)  = h_i  + sum_{k in N(i)\j} beta_ki
//   alpha_ij = -J_ij^2 / alpha_excl(i,j)
//   beta_ij  = -J_ij * beta_excl(i,j) / alpha_excl(i,j)
// until every |delta| <= threshold, then infers means and variances from
//   K_i = (J_ii + sum alpha_ki)^{-1},  mu_i = K_i (h_i + sum beta_ki).
//
// Nodes with J_ii = 0 (saddle embeddings have a whole zero block) start out
// unable to form an outgoing precision; such a message keeps its
// uninformative initial value (0) until incoming precisions arrive. A
// denominator that lands at zero any other way throws ZeroPivot.
//
// Neighbor sums always accumulate in ascending node order, so identical
// inputs produce bit-identical message streams.
GabpResult run_gabp(const GabpGraph& graph, const GabpOptions& options);

struct MultiRhsResult {
  Matrix solutions;  // column c solves J x = B.col(c)
  // Instances run logically in parallel: rounds is the max over instances,
  // messages the sum.
  NetworkMetrics metrics;
};

// Solves J x = b for every column b of B by independent GaBP instances.
// Throws DivergedOrMaxRounds tagged with the failing column index.
MultiRhsResult solve_multi_rhs(MatrixRef J, MatrixRef B,
                               const GabpOptions& options);

struct EnforcedResult {
  Vector x;
  NetworkMetrics metrics;  // accumulated over all inner runs
  int outer_iterations = 0;
};

// Solves J x = b for symmetric nonsingular J even when plain GaBP diverges,
// by diagonal loading: pick Gamma making J + Gamma I strictly diagonally
// dominant (Gamma = max_i(sum_{j!=i}|J_ij| - J_ii) + 1e-6, or 0 when already
// dominant) and iterate
//   x_{t+1} = gabp_solve(J + Gamma I, b + Gamma x_t)
// until |J x - b|_inf <= outer_tol (1 + |b|_inf). The fixed point satisfies
// J x = b. The loop contracts only for positive definite J, so a system with
// a negative diagonal is negated first and a genuinely indefinite one is
// routed through its Gram system (J^2) x = J b, which is positive definite
// and has the same solution.
EnforcedResult enforced_solve(MatrixRef J, VectorRef b,
                              const GabpOptions& gabp_options,
                              double outer_tol = 1e-6, int max_outer = 1000);

}  // namespace sensel

#endif  // SENSEL_GABP_HPP
