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

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sensel/check.hpp"
#include "sensel/dense.hpp"
#include "sensel/errors.hpp"
#include "sensel/experiment.hpp"
#include "sensel/io.hpp"
#include "sensel/mvee.hpp"
#include "sensel/selection.hpp"
#include "sensel/synthetic.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sensel;

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 1;
constexpr int kExitInputError = 2;

struct DataOpts {
  std::string input;
  Index m = 100;
  Index n = 20;
  std::uint64_t seed = 1;
  bool standardize = false;
  double min_activity = 1.0;
};

void add_data_options(CLI::App* cmd, DataOpts* d) {
  cmd->add_option("--input", d->input,
                  "CSV matrix (rows = observations); synthetic draw if absent");
  cmd->add_option("--m", d->m, "synthetic: number of measurement rows");
  cmd->add_option("--n", d->n, "synthetic: number of parameters");
  cmd->add_option("--seed", d->seed, "random seed");
  cmd->add_flag("--standardize", d->standardize,
                "scale each column to unit RMS after loading");
  cmd->add_option("--min-activity", d->min_activity,
                  "drop columns active on less than this fraction of rows")
      ->check(CLI::Range(0.0, 1.0));
}

Matrix load_data(const DataOpts& d) {
  if (d.input.empty()) {
    return gen_synthetic(d.m, d.n, d.seed);
  }
  Matrix M = load_csv_matrix(d.input);
  M = preprocess_activity(M, d.min_activity).matrix;
  if (d.standardize) M = standardize_columns(M);
  return M;
}

struct SolveOpts {
  double kappa = -1.0;
  double newton_tol = 1e-3;
  double gabp_tol = 1e-8;
  long long gabp_max_rounds = 2000;
  double enforce_outer_tol = 1e-6;
  int enforce_max_outer = 2000;
  int max_newton = 50;
  bool oracle = false;
  std::string backend = "reference-dense";
};

void add_solve_options(CLI::App* cmd, SolveOpts* s) {
  cmd->add_option("--kappa", s->kappa, "barrier weight (default: 1/m)");
  cmd->add_option("--newton-tol", s->newton_tol,
                  "Newton decrement tolerance");
  cmd->add_option("--gabp-tol", s->gabp_tol, "GaBP message threshold");
  cmd->add_option("--gabp-max-rounds", s->gabp_max_rounds,
                  "GaBP round budget per run");
  cmd->add_option("--enforce-outer-tol", s->enforce_outer_tol,
                  "residual tolerance of enforced solves");
  cmd->add_option("--enforce-max-outer", s->enforce_max_outer,
                  "outer iteration budget of enforced solves");
  cmd->add_option("--max-newton", s->max_newton, "Newton iteration budget");
  cmd->add_flag("--oracle", s->oracle,
                "record per-step gradient error against the dense gradient");
  cmd->add_option("--backend", s->backend,
                  "reference-dense | exact | truncated");
}

NewtonConfig make_newton_config(const SolveOpts& s) {
  NewtonConfig c;
  c.tolerance = s.newton_tol;
  c.max_iterations = s.max_newton;
  c.gabp.threshold = s.gabp_tol;
  c.gabp.max_rounds = s.gabp_max_rounds;
  c.enforce_outer_tol = s.enforce_outer_tol;
  c.enforce_max_outer = s.enforce_max_outer;
  c.gradient_oracle = s.oracle;
  c.backend = backend_from_name(s.backend);
  return c;
}

std::unique_ptr<std::ostream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;  // caller falls back to stdout
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw InputError("cannot open output file '" + path + "'");
  return f;
}

std::ostream& out_or_stdout(const std::unique_ptr<std::ostream>& f) {
  return f ? *f : std::cout;
}

void emit_solve_record(json& rec, const SensorProblem& p,
                       const NewtonResult& nr) {
  rec["m"] = p.num_sensors();
  rec["n"] = p.num_params();
  rec["k"] = p.k;
  rec["kappa"] = p.kappa;
  rec["backend"] = backend_name(nr.trace.backend);
  rec["converged"] = nr.trace.converged;
  rec["error"] =
      nr.trace.error.empty() ? json(nullptr) : json(nr.trace.error);
  rec["newton_iterations"] = nr.trace.newton_iterations();
  rec["gabp_rounds"] = nr.trace.total_rounds;
  rec["gabp_messages"] = nr.trace.total_messages;
  rec["enforcement_outer_max"] = nr.trace.max_enforcement_outer;
  if (nr.trace.converged) {
    rec["barrier_objective"] = objective(p, nr.z);
    rec["relaxed_objective"] =
        cholesky_logdet(weighted_gram(p.A, nr.z)).log_det;
  }
}

int cmd_synth(const DataOpts& d, bool activity, Index days, Index links,
              Index active, const std::string& out_path) {
  Matrix M;
  if (activity) {
    M = gen_activity_fixture(days, links, active, d.seed);
  } else {
    M = gen_synthetic(d.m, d.n, d.seed);
  }
  const auto f = open_out(out_path);
  write_csv(M, out_or_stdout(f));
  return kExitOk;
}

int cmd_solve(const DataOpts& d, const SolveOpts& s, Index k,
              const std::string& out_path, const std::string& trace_path) {
  SensorProblem p;
  p.A = load_data(d);
  p.k = k;
  p.kappa = s.kappa > 0.0 ? s.kappa
                          : SensorProblem::default_kappa(p.num_sensors());
  const NewtonResult nr = newton_solve(p, make_newton_config(s));
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    write_trace(nr.trace, tf);
  }
  json rec;
  emit_solve_record(rec, p, nr);
  const auto f = open_out(out_path);
  out_or_stdout(f) << rec.dump() << '\n';
  return nr.trace.converged ? kExitOk : kExitNoConvergence;
}

int cmd_select(const DataOpts& d, const SolveOpts& s, Index k, int passes,
               const std::string& out_path, const std::string& trace_path) {
  SensorProblem p;
  p.A = load_data(d);
  p.k = k;
  p.kappa = s.kappa > 0.0 ? s.kappa
                          : SensorProblem::default_kappa(p.num_sensors());
  const NewtonResult nr = newton_solve(p, make_newton_config(s));
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    write_trace(nr.trace, tf);
  }
  json rec;
  emit_solve_record(rec, p, nr);
  if (nr.trace.converged) {
    const SelectionResult sel = select_sensors(p, nr.z, passes);
    rec["chosen"] = sel.chosen;
    rec["logdet_simple"] = sel.logdet_simple;
    rec["logdet_local_search"] = sel.logdet_value;
    rec["local_search_swaps"] = sel.swaps;
    rec["upper_bound"] = sel.upper_bound;
    rec["lower_bound"] = sel.lower_bound;
    rec["gap"] = sel.gap;
    rec["gap_simple"] = sel.upper_bound - sel.logdet_simple;
  }
  const auto f = open_out(out_path);
  out_or_stdout(f) << rec.dump() << '\n';
  return nr.trace.converged ? kExitOk : kExitNoConvergence;
}

int cmd_sweep(const DataOpts& d, const SolveOpts& s, Index k_min, Index k_max,
              Index k_step, const std::vector<std::string>& backends,
              int passes, bool timings, const std::string& out_path,
              const std::string& trace_dir) {
  ExperimentConfig cfg;
  cfg.mode = d.input.empty() ? ExperimentConfig::Mode::kSynthetic
                             : ExperimentConfig::Mode::kCsv;
  cfg.m = d.m;
  cfg.n = d.n;
  cfg.seed = d.seed;
  cfg.input_path = d.input;
  cfg.standardize = d.standardize;
  cfg.min_activity = d.min_activity;
  cfg.kappa = s.kappa;
  cfg.newton = make_newton_config(s);
  cfg.local_search_passes = passes;
  cfg.timings = timings;
  if (k_step < 1) throw InputError("sweep: --k-step must be >= 1");
  for (Index k = k_min; k <= k_max; k += k_step) cfg.k_values.push_back(k);
  if (cfg.k_values.empty()) throw InputError("sweep: empty k range");
  for (const auto& b : backends) {
    cfg.backends.push_back(backend_from_name(b));
  }
  const auto f = open_out(out_path);
  const int failures = run_experiment(cfg, out_or_stdout(f), trace_dir);
  return failures == 0 ? kExitOk : kExitNoConvergence;
}

int cmd_mvee(const DataOpts& d, double kappa, double tol,
             double enclosure_tol, const std::string& backend,
             const std::string& out_path) {
  const Matrix P = d.input.empty() ? gen_synthetic(d.m, d.n, d.seed)
                                   : load_csv_matrix(d.input);
  const MveeResult r = mvee_solve(P, kappa, tol, backend_from_name(backend));
  const EnclosureReport rep = enclosure_check(r.ellipsoid, P, enclosure_tol);
  json rec;
  rec["m"] = P.rows();
  rec["n"] = P.cols();
  rec["kappa"] = kappa;
  rec["weight_sum"] = r.weights.sum();
  rec["max_ratio"] = rep.max_ratio;
  rec["violations"] = rep.violations;
  rec["newton_iterations"] = r.trace.newton_iterations();
  std::vector<std::vector<double>> M(static_cast<size_t>(P.cols()));
  for (Index i = 0; i < P.cols(); ++i) {
    for (Index j = 0; j < P.cols(); ++j) {
      M[static_cast<size_t>(i)].push_back(r.ellipsoid.M(i, j));
    }
  }
  rec["shape_matrix"] = M;
  std::vector<double> w(r.weights.data(), r.weights.data() + r.weights.size());
  rec["weights"] = w;
  const auto f = open_out(out_path);
  out_or_stdout(f) << rec.dump() << '\n';
  return rep.violations.empty() ? kExitOk : kExitNoConvergence;
}

int cmd_check(const DataOpts& d, Index k, double kappa) {
  SensorProblem p;
  p.A = load_data(d);
  p.k = k;
  p.kappa =
      kappa > 0.0 ? kappa : SensorProblem::default_kappa(p.num_sensors());
  const CheckReport report = run_instance_checks(p);
  for (const auto& item : report.items) {
    std::cout << (item.pass ? "[PASS] " : "[FAIL] ") << item.name << " ("
              << item.detail << ")\n";
  }
  return report.all_pass() ? kExitOk : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sensel: sensor-subset selection by log-det maximization, with "
      "simulated message-passing solvers and an enclosing-ellipsoid mode"};
  app.require_subcommand(1);
  app.set_config("--config");

  DataOpts data;
  SolveOpts solve_opts;
  Index k = 0;
  Index k_min = 0, k_max = 0, k_step = 5;
  Index days = 153, links = 97, active = 89;
  bool activity = false;
  bool timings = false;
  int passes = 1000;
  double mvee_kappa = 1e-4, mvee_tol = 1e-6, enclosure_tol = 5e-2;
  std::string out_path, trace_path, trace_dir;
  std::string mvee_backend = "reference-dense";
  std::vector<std::string> backends{"reference-dense"};

  CLI::App* synth = app.add_subcommand("synth", "emit a data matrix as CSV");
  add_data_options(synth, &data);
  synth->add_flag("--activity", activity,
                  "utilization-shaped fixture instead of Gaussian rows");
  synth->add_option("--days", days, "activity fixture: rows");
  synth->add_option("--links", links, "activity fixture: columns");
  synth->add_option("--active", active,
                    "activity fixture: columns active on every day");
  synth->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* solve = app.add_subcommand("solve", "one relaxed solve");
  add_data_options(solve, &data);
  add_solve_options(solve, &solve_opts);
  solve->add_option("--k", k, "selection budget")->required();
  solve->add_option("--out", out_path, "record file (default stdout)");
  solve->add_option("--trace", trace_path, "per-iteration trace file");

  CLI::App* select =
      app.add_subcommand("select", "solve + round + local search + bounds");
  add_data_options(select, &data);
  add_solve_options(select, &solve_opts);
  select->add_option("--k", k, "selection budget")->required();
  select->add_option("--passes", passes, "local search pass budget");
  select->add_option("--out", out_path, "record file (default stdout)");
  select->add_option("--trace", trace_path, "per-iteration trace file");

  CLI::App* sweep =
      app.add_subcommand("sweep", "k-range experiment over backends");
  add_data_options(sweep, &data);
  add_solve_options(sweep, &solve_opts);
  sweep->add_option("--k-min", k_min, "first budget")->required();
  sweep->add_option("--k-max", k_max, "last budget")->required();
  sweep->add_option("--k-step", k_step, "budget stride");
  sweep->add_option("--backends", backends,
                    "backends to run per k (space separated)");
  sweep->add_option("--passes", passes, "local search pass budget");
  sweep->add_flag("--timings", timings,
                  "emit wall_time_ms values (breaks byte-reproducibility)");
  sweep->add_option("--out", out_path, "record file (default stdout)");
  sweep->add_option("--trace-dir", trace_dir, "directory for per-cell traces");

  CLI::App* mvee = app.add_subcommand(
      "mvee", "minimum-volume origin-centered enclosing ellipsoid");
  add_data_options(mvee, &data);
  mvee->add_option("--kappa", mvee_kappa, "barrier weight");
  mvee->add_option("--tol", mvee_tol, "Newton decrement tolerance");
  mvee->add_option("--enclosure-tol", enclosure_tol,
                   "acceptable enclosure slack (ratio above 1)");
  mvee->add_option("--backend", mvee_backend,
                   "reference-dense | exact | truncated");
  mvee->add_option("--out", out_path, "record file (default stdout)");

  CLI::App* check =
      app.add_subcommand("check", "run the invariant suite on an instance");
  add_data_options(check, &data);
  check->add_option("--k", k, "selection budget")->required();
  check->add_option("--kappa", solve_opts.kappa, "barrier weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (synth->parsed()) {
      return cmd_synth(data, activity, days, links, active, out_path);
    }
    if (solve->parsed()) {
      return cmd_solve(data, solve_opts, k, out_path, trace_path);
    }
    if (select->parsed()) {
      return cmd_select(data, solve_opts, k, passes, out_path, trace_path);
    }
    if (sweep->parsed()) {
      return cmd_sweep(data, solve_opts, k_min, k_max, k_step, backends,
                       passes, timings, out_path, trace_dir);
    }
    if (mvee->parsed()) {
      return cmd_mvee(data, mvee_kappa, mvee_tol, enclosure_tol, mvee_backend,
                      out_path);
    }
    if (check->parsed()) {
      return cmd_check(data, k, solve_opts.kappa);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}
