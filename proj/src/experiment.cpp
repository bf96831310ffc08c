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

#include "sensel/experiment.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "sensel/errors.hpp"
#include "sensel/io.hpp"
#include "sensel/selection.hpp"
#include "sensel/synthetic.hpp"

namespace sensel {

using json = nlohmann::ordered_json;

Matrix experiment_matrix(const ExperimentConfig& config) {
  if (config.mode == ExperimentConfig::Mode::kSynthetic) {
    return gen_synthetic(config.m, config.n, config.seed);
  }
  Matrix M = load_csv_matrix(config.input_path);
  M = preprocess_activity(M, config.min_activity).matrix;
  if (config.standardize) {
    M = standardize_columns(M);
  }
  return M;
}

void write_trace(const SolveTrace& trace, std::ostream& out) {
  for (const auto& it : trace.iterations) {
    json rec;
    rec["iter"] = it.iter;
    rec["objective"] = it.objective_value;
    rec["decrement"] = it.decrement;
    rec["step"] = it.step_size;
    if (std::isnan(it.gradient_rel_error)) {
      rec["gradient_rel_error"] = nullptr;
    } else {
      rec["gradient_rel_error"] = it.gradient_rel_error;
    }
    rec["gabp_rounds"] = it.gabp_rounds;
    rec["gabp_messages"] = it.gabp_messages;
    rec["enforcement_outer"] = it.enforcement_outer;
    if (trace.backend == Backend::kTruncated) {
      rec["approx_path"] = it.approx_path == ApproxPath::kSaddleGabp
                               ? "saddle-gabp"
                               : "enforced-columns";
      rec["fallback_direction"] = it.fallback_direction;
    }
    out << rec.dump() << '\n';
  }
  json totals;
  totals["backend"] = backend_name(trace.backend);
  totals["newton_iterations"] = trace.newton_iterations();
  totals["total_rounds"] = trace.total_rounds;
  totals["total_messages"] = trace.total_messages;
  totals["max_enforcement_outer"] = trace.max_enforcement_outer;
  totals["converged"] = trace.converged;
  totals["error"] = trace.error.empty() ? json(nullptr) : json(trace.error);
  if (!trace.notes.empty()) {
    totals["notes"] = trace.notes;
  }
  out << totals.dump() << '\n';
}

int run_experiment(const ExperimentConfig& config, std::ostream& results,
                   const std::string& trace_dir) {
  const Matrix A = experiment_matrix(config);
  const Index m = A.rows();
  const double kappa =
      config.kappa > 0.0 ? config.kappa : SensorProblem::default_kappa(m);

  int failures = 0;
  for (const Index k : config.k_values) {
    for (const Backend backend : config.backends) {
      json rec;
      rec["k"] = k;
      rec["backend"] = backend_name(backend);
      rec["m"] = m;
      rec["n"] = A.cols();
      rec["kappa"] = kappa;
      rec["seed"] = config.seed;
      // Every row carries the full field set; cells that fail hard keep
      // nulls in the value fields.
      for (const char* field :
           {"relaxed_objective", "barrier_objective", "logdet_simple",
            "logdet_local_search", "upper_bound", "lower_bound", "gap",
            "gap_simple", "local_search_swaps", "newton_iterations",
            "gabp_rounds", "gabp_messages", "enforcement_outer_max"}) {
        rec[field] = nullptr;
      }

      SensorProblem p;
      p.A = A;
      p.k = k;
      p.kappa = kappa;
      NewtonConfig nc = config.newton;
      nc.backend = backend;

      const auto start = std::chrono::steady_clock::now();
      bool cell_ok = false;
      try {
        const NewtonResult nr = newton_solve(p, nc);
        if (!trace_dir.empty()) {
          std::ofstream tf(trace_dir + "/trace_k" + std::to_string(k) + "_" +
                           backend_name(backend) + ".jsonl");
          write_trace(nr.trace, tf);
        }
        const SelectionResult sel =
            select_sensors(p, nr.z, config.local_search_passes);
        rec["relaxed_objective"] = sel.relaxed_value;
        rec["barrier_objective"] = objective(p, nr.z);
        rec["logdet_simple"] = sel.logdet_simple;
        rec["logdet_local_search"] = sel.logdet_value;
        rec["upper_bound"] = sel.upper_bound;
        rec["lower_bound"] = sel.lower_bound;
        rec["gap"] = sel.gap;
        // Figure-of-merit against the plain top-k rounding, before local
        // search improves the lower bound.
        rec["gap_simple"] = sel.upper_bound - sel.logdet_simple;
        rec["local_search_swaps"] = sel.swaps;
        rec["newton_iterations"] = nr.trace.newton_iterations();
        rec["gabp_rounds"] = nr.trace.total_rounds;
        rec["gabp_messages"] = nr.trace.total_messages;
        rec["enforcement_outer_max"] = nr.trace.max_enforcement_outer;
        rec["converged"] = nr.trace.converged;
        rec["error"] =
            nr.trace.error.empty() ? json(nullptr) : json(nr.trace.error);
        cell_ok = nr.trace.converged;
      } catch (const Error& ex) {
        rec["converged"] = false;
        rec["error"] = std::string(ex.what());
      }
      if (!cell_ok) ++failures;
      if (config.timings) {
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        rec["wall_time_ms"] = elapsed.count();
      } else {
        rec["wall_time_ms"] = nullptr;
      }
      // Append-only emission: each cell is flushed as soon as it finishes so
      // a later failure cannot corrupt earlier rows.
      results << rec.dump() << '\n';
      results.flush();
    }
  }
  return failures;
}

}  // namespace sensel
