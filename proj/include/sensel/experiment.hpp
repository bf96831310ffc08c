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

#ifndef SENSEL_EXPERIMENT_HPP
#define SENSEL_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sensel/newton.hpp"
#include "sensel/types.hpp"

namespace sensel {

// One sweep: for each k in k_values and each backend, solve the relaxation,
// round, local-search and bound. Results go to a line-delimited record
// stream; per-cell Newton traces optionally go to trace_dir.
struct ExperimentConfig {
  enum class Mode { kSynthetic, kCsv };

  Mode mode = Mode::kSynthetic;
  Index m = 100;
  Index n = 20;
  std::uint64_t seed = 1;
  std::string input_path;      // csv mode
  bool standardize = false;    // csv mode: per-column unit-RMS scaling
  double min_activity = 1.0;   // csv mode: activity filter threshold
  std::vector<Index> k_values;
  std::vector<Backend> backends;
  double kappa = -1.0;  // negative selects SensorProblem::default_kappa(m)
  NewtonConfig newton;  // backend field is overridden per cell
  int local_search_passes = 1000;
  bool timings = false;  // emit wall_time_ms values (otherwise null)
};

// Builds the measurement matrix for a config (synthetic draw, or CSV load +
// activity filter + optional standardization).
Matrix experiment_matrix(const ExperimentConfig& config);

// Runs every (k, backend) cell, appending one JSON record per cell to
// `results` as soon as it finishes. A failed cell carries an error tag and
// does not stop the sweep. Returns the number of failed or non-converged
// cells (0 means every cell converged).
int run_experiment(const ExperimentConfig& config, std::ostream& results,
                   const std::string& trace_dir = "");

// Serialization of a Newton trace as line-delimited records (one line per
// iteration plus one totals line).
void write_trace(const SolveTrace& trace, std::ostream& out);

}  // namespace sensel

#endif  // SENSEL_EXPERIMENT_HPP
