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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sensel/newton.hpp"
#include "sensel/selection.hpp"
#include "sensel/synthetic.hpp"

using namespace sensel;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double exhaustive_optimum(const Matrix& A, Index k,
                          std::vector<Index>* argmax = nullptr) {
  double best = kNegInf;
  oracle::for_each_subset(A.rows(), k, [&](const std::vector<Index>& s) {
    const double v = logdet_selection(A, s);
    if (v > best) {
      best = v;
      if (argmax != nullptr) *argmax = s;
    }
  });
  return best;
}

}  // namespace

TEST_CASE("round_topk picks the largest weights with index tie-breaks") {
  Vector z(4);
  z << 0.9, 0.1, 0.8, 0.2;
  CHECK(round_topk(z, 2) == std::vector<Index>{0, 2});

  const Vector ties = Vector::Constant(5, 0.4);
  CHECK(round_topk(ties, 2) == std::vector<Index>{0, 1});
}

TEST_CASE("round_topk is permutation-equivariant") {
  const Vector z = oracle::random_vector(9, 1201).cwiseAbs();
  const std::vector<Index> chosen = round_topk(z, 4);
  // rotate the entries by 3
  Vector zp(9);
  for (Index i = 0; i < 9; ++i) zp[(i + 3) % 9] = z[i];
  std::vector<Index> expected;
  for (Index i : chosen) expected.push_back((i + 3) % 9);
  std::sort(expected.begin(), expected.end());
  CHECK(round_topk(zp, 4) == expected);
}

TEST_CASE("logdet_selection") {
  const Matrix I3 = Matrix::Identity(3, 3);
  CHECK(logdet_selection(I3, {0, 1, 2}) == doctest::Approx(0.0));

  // duplicated row: rank-deficient selection valued at -inf
  Matrix dup(4, 2);
  dup << 1, 0, 1, 0, 0, 1, 2, 3;
  CHECK(logdet_selection(dup, {0, 1}) == kNegInf);

  const Matrix A = gen_synthetic(7, 2, 3);
  const std::vector<Index> s{1, 4, 6};
  Matrix gram = Matrix::Zero(2, 2);
  for (Index i : s) gram += A.row(i).transpose() * A.row(i);
  const Vector ev = oracle::symmetric_eigenvalues(gram);
  CHECK(logdet_selection(A, s) ==
        doctest::Approx(ev.array().log().sum()).epsilon(1e-10));
}

TEST_CASE("local_search leaves the exhaustive optimum alone") {
  const Matrix A = gen_synthetic(7, 2, 41);
  std::vector<Index> best;
  exhaustive_optimum(A, 3, &best);
  const LocalSearchResult r = local_search(A, best);
  CHECK(r.swaps == 0);
  CHECK(r.chosen == best);
}

TEST_CASE("local_search is monotone and escapes rank-deficient starts") {
  Matrix A(5, 2);
  A << 1, 0, 1, 0, 0, 1, 2, 1, 3, -1;
  const std::vector<Index> start{0, 1};  // rank deficient, -inf
  const double v0 = logdet_selection(A, start);
  const LocalSearchResult r = local_search(A, start);
  CHECK(r.log_det > v0);
  CHECK(std::isfinite(r.log_det));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix B = gen_synthetic(8, 3, 500 + seed);
    const std::vector<Index> s0 = round_topk(Vector::Ones(8), 4);
    const LocalSearchResult lr = local_search(B, s0);
    CHECK(lr.log_det >= logdet_selection(B, s0));
  }
}

TEST_CASE("compute_bounds sandwich against exhaustive enumeration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SensorProblem p;
    p.A = gen_synthetic(7, 2, 600 + seed);
    p.k = 3;
    p.kappa = 1e-3;
    NewtonConfig cfg;
    cfg.tolerance = 1e-8;
    const NewtonResult nr = newton_solve(p, cfg);
    REQUIRE(nr.trace.converged);
    const double bool_opt = exhaustive_optimum(p.A, p.k);
    const SelectionResult sel = select_sensors(p, nr.z);
    CHECK(sel.gap >= 0.0);
    CHECK(sel.lower_bound <= bool_opt + 1e-12);
    CHECK(bool_opt <= sel.upper_bound + 1e-12);
    CHECK(sel.logdet_value >= sel.logdet_simple - 1e-12);
  }
}

TEST_CASE("upper bound tightens to the relaxed optimum as kappa shrinks") {
  SensorProblem p;
  p.A = gen_synthetic(7, 2, 13);
  p.k = 3;
  p.kappa = 1e-6;
  NewtonConfig cfg;
  cfg.tolerance = 1e-10;
  cfg.max_iterations = 200;
  const NewtonResult nr = newton_solve(p, cfg);
  REQUIRE(nr.trace.converged);
  const SelectionResult sel = select_sensors(p, nr.z);
  // 2 m kappa = 1.4e-5: the bound is essentially the relaxed value, and the
  // gap is the integrality gap against the exhaustive Boolean optimum.
  CHECK(sel.upper_bound - sel.relaxed_value ==
        doctest::Approx(2.0 * 7.0 * 1e-6));
  const double bool_opt = exhaustive_optimum(p.A, p.k);
  CHECK(sel.gap == doctest::Approx(sel.relaxed_value - bool_opt)
                       .epsilon(1e-2));
}
