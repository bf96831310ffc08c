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

#include "sensel/selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "sensel/dense.hpp"
#include "sensel/errors.hpp"

namespace sensel {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Matrix subset_gram(MatrixRef A, const std::vector<Index>& chosen) {
  const Index n = A.cols();
  Matrix G = Matrix::Zero(n, n);
  for (const Index i : chosen) {
    G.selfadjointView<Eigen::Lower>().rankUpdate(A.row(i).transpose());
  }
  return Matrix(G.selfadjointView<Eigen::Lower>());
}

double logdet_of_gram(const Matrix& G) {
  try {
    return cholesky_logdet(G).log_det;
  } catch (const NotPositiveDefinite&) {
    return kNegInf;
  }
}

}  // namespace

std::vector<Index> round_topk(VectorRef z, Index k) {
  const Index m = z.size();
  if (k < 0 || k > m) {
    throw DomainError("round_topk: k=" + std::to_string(k) + " with m=" +
                      std::to_string(m));
  }
  std::vector<Index> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&z](Index a, Index b) {
    if (z[a] != z[b]) return z[a] > z[b];
    return a < b;
  });
  std::vector<Index> chosen(order.begin(), order.begin() + k);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

double logdet_selection(MatrixRef A, const std::vector<Index>& chosen) {
  for (const Index i : chosen) {
    if (i < 0 || i >= A.rows()) {
      throw DomainError("logdet_selection: index " + std::to_string(i) +
                        " out of range");
    }
  }
  return logdet_of_gram(subset_gram(A, chosen));
}

namespace {

// Swap gain via the rank-two determinant identity: for G' = G + a_in a_in^T
// - a_out a_out^T,
//   det(G')/det(G) = (1 + u_in)(1 - u_out) + c_in^2,
// with u_i = a_i^T G^{-1} a_i and c_i = a_i^T G^{-1} a_out. Nonpositive
// discriminants mean a singular or indefinite candidate Gram (-inf).
struct SwapScores {
  Matrix W;  // A G^{-1}
  Vector u;  // leverage of every row against the current Gram
};

}  // namespace

LocalSearchResult local_search(MatrixRef A, std::vector<Index> chosen,
                               int max_passes) {
  const Index m = A.rows();
  LocalSearchResult result;
  result.log_det = logdet_selection(A, chosen);

  std::vector<bool> in_set(static_cast<size_t>(m), false);
  for (const Index i : chosen) in_set[static_cast<size_t>(i)] = true;

  // Gains below this are floating-point noise, not improvements.
  constexpr double kMinGain = 1e-9;

  for (int pass = 0; pass < max_passes; ++pass) {
    Index best_out = -1, best_in = -1;
    if (std::isfinite(result.log_det)) {
      const Matrix G = subset_gram(A, chosen);
      SwapScores s;
      s.W = A * invert_spd(G);
      s.u = s.W.cwiseProduct(A).rowwise().sum();
      double best_gain = kMinGain;
      for (const Index out : chosen) {
        const Vector c = s.W * A.row(out).transpose();
        const double u_out = s.u[out];
        for (Index in = 0; in < m; ++in) {
          if (in_set[static_cast<size_t>(in)]) continue;
          const double disc =
              (1.0 + s.u[in]) * (1.0 - u_out) + c[in] * c[in];
          if (disc <= 0.0) continue;
          const double gain = std::log(disc);
          if (gain > best_gain) {
            best_gain = gain;
            best_out = out;
            best_in = in;
          }
        }
      }
    } else {
      // Rank-deficient incumbent: no usable Gram inverse, score each swap
      // from scratch until the search reaches a full-rank selection.
      double best_val = result.log_det;
      for (const Index out : chosen) {
        const Matrix without =
            subset_gram(A, chosen) - A.row(out).transpose() * A.row(out);
        for (Index in = 0; in < m; ++in) {
          if (in_set[static_cast<size_t>(in)]) continue;
          const double val = logdet_of_gram(
              Matrix(without + A.row(in).transpose() * A.row(in)));
          if (val > best_val) {
            best_val = val;
            best_out = out;
            best_in = in;
          }
        }
      }
    }
    if (best_out < 0) break;
    chosen.erase(std::find(chosen.begin(), chosen.end(), best_out));
    chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), best_in),
                  best_in);
    in_set[static_cast<size_t>(best_out)] = false;
    in_set[static_cast<size_t>(best_in)] = true;
    // Re-evaluated from scratch so the reported value is a function of the
    // set alone; the strictly increasing sequence also bounds the swap count.
    result.log_det = logdet_selection(A, chosen);
    ++result.swaps;
  }
  result.chosen = std::move(chosen);
  return result;
}

SelectionBounds compute_bounds(const SensorProblem& p, VectorRef z_star,
                               double best_boolean_logdet) {
  SelectionBounds b;
  const double relaxed =
      cholesky_logdet(weighted_gram(p.A, z_star)).log_det;
  b.upper = relaxed + 2.0 * static_cast<double>(p.num_sensors()) * p.kappa;
  b.lower = best_boolean_logdet;
  b.gap = b.upper - b.lower;
  return b;
}

SelectionResult select_sensors(const SensorProblem& p, VectorRef z_star,
                               int max_passes) {
  SelectionResult r;
  const std::vector<Index> simple = round_topk(z_star, p.k);
  r.logdet_simple = logdet_selection(p.A, simple);
  LocalSearchResult ls = local_search(p.A, simple, max_passes);
  r.chosen = std::move(ls.chosen);
  r.logdet_value = ls.log_det;
  r.swaps = ls.swaps;
  r.relaxed_value = cholesky_logdet(weighted_gram(p.A, z_star)).log_det;
  const SelectionBounds b = compute_bounds(p, z_star, r.logdet_value);
  r.upper_bound = b.upper;
  r.lower_bound = b.lower;
  r.gap = b.gap;
  return r;
}

}  // namespace sensel
