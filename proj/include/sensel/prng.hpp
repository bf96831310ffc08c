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

#ifndef SENSEL_PRNG_HPP
#define SENSEL_PRNG_HPP

#include <cmath>
#include <cstdint>

namespace sensel {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std:: engines because the
// byte stream is pinned by the algorithm itself, not by the standard library
// shipped with the compiler: output files generated from a seed must be
// reproducible on any platform. The generator and the normal transform below
// are part of the data-format contract and are documented in the README.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [0, n) by rejection (no modulo bias).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t state_;
};

// Standard normal variates via the Box-Muller transform, consuming exactly
// two uniforms per pair. Non-rejecting, so the stream position after k draws
// is a function of k alone.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = rng_.next_uniform();
    const double u2 = rng_.next_uniform();
    // 1 - u1 in (0, 1] keeps the log argument away from zero.
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sensel

#endif  // SENSEL_PRNG_HPP
