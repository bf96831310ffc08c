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

#ifndef SENSEL_CHECK_HPP
#define SENSEL_CHECK_HPP

#include <string>
#include <vector>

#include "sensel/barrier.hpp"
#include "sensel/types.hpp"

namespace sensel {

struct CheckReport {
  struct Item {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Item> items;

  bool all_pass() const {
    for (const auto& i : items) {
      if (!i.pass) return false;
    }
    return true;
  }
};

// Self-diagnosis on one instance: finite-difference gradient and Hessian
// checks, the saddle-embedding diagonal identity, an enforced GaBP solve
// against the dense answer, starting-point feasibility, and the zero-sum
// property of the Newton direction.
CheckReport run_instance_checks(const SensorProblem& p);

}  // namespace sensel

#endif  // SENSEL_CHECK_HPP
