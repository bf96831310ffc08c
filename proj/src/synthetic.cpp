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

#include "sensel/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sensel/errors.hpp"
#include "sensel/prng.hpp"

namespace sensel {

Matrix gen_synthetic(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw DomainError("gen_synthetic: need m >= 1 and n >= 1");
  }
  GaussianStream stream(seed);
  const double sd = std::pow(static_cast<double>(n), -0.25);
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      A(i, j) = sd * stream.next();
    }
  }
  return A;
}

Matrix gen_activity_fixture(Index days, Index links, Index active_links,
                            std::uint64_t seed) {
  if (days < 1 || links < 1 || active_links < 0 || active_links > links) {
    throw DomainError("gen_activity_fixture: invalid shape (days=" +
                      std::to_string(days) + ", links=" +
                      std::to_string(links) + ", active=" +
                      std::to_string(active_links) + ")");
  }
  GaussianStream stream(seed);
  Matrix M(days, links);
  for (Index i = 0; i < days; ++i) {
    for (Index j = 0; j < links; ++j) {
      // Strictly positive utilization-like values.
      M(i, j) = 0.05 + std::abs(stream.next());
    }
  }
  // Pick which columns are inactive, then zero out 1..days/4 of their days.
  SplitMix64 rng(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  std::vector<Index> cols(static_cast<size_t>(links));
  for (Index j = 0; j < links; ++j) cols[static_cast<size_t>(j)] = j;
  for (Index j = links - 1; j > 0; --j) {
    const Index r = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
    std::swap(cols[static_cast<size_t>(j)], cols[static_cast<size_t>(r)]);
  }
  for (Index t = active_links; t < links; ++t) {
    const Index col = cols[static_cast<size_t>(t)];
    const Index gaps =
        1 + static_cast<Index>(rng.next_below(
                static_cast<std::uint64_t>(std::max<Index>(1, days / 4))));
    for (Index u = 0; u < gaps; ++u) {
      const Index day =
          static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(days)));
      M(day, col) = 0.0;
    }
  }
  return M;
}

}  // namespace sensel
