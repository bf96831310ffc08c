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

#ifndef SENSEL_SYNTHETIC_HPP
#define SENSEL_SYNTHETIC_HPP

#include <cstdint>

#include "sensel/types.hpp"

namespace sensel {

// m measurement rows drawn i.i.d. from N(0, (1/sqrt(n)) I): each coordinate
// is an independent Gaussian with standard deviation n^{-1/4}. Entries are
// drawn row-major from a GaussianStream(seed), so the matrix is a pure
// function of (m, n, seed) across platforms.
Matrix gen_synthetic(Index m, Index n, std::uint64_t seed);

// Daily-utilization-shaped fixture: `days` x `links` nonnegative values where
// exactly `active_links` columns are active (strictly positive) on every day
// and the remaining columns have at least one zero day. Stream use, in
// order: all values row-major, then the inactive column draw, then per
// inactive column the zeroed-day draws.
Matrix gen_activity_fixture(Index days, Index links, Index active_links,
                            std::uint64_t seed);

}  // namespace sensel

#endif  // SENSEL_SYNTHETIC_HPP
