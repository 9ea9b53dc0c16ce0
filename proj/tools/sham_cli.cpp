// Copyright 2026 The SHAM Authors
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

// Command-line front end: generate, solve, benchmark and verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sham/sham.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitBudget = 2, kExitNumerical = 3 };

struct Settings {
  std::string instance;
  std::string out;
  std::size_t n = 20;
  std::size_t m = 50;
  double mu = 0.0;
  std::uint64_t seed = 1;
  bool seed_from_config = false;
  std::optional<std::uint64_t> gen_seed;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<double> gammas;
  std::vector<double> mus;
  double beta = 0.96;
  double gamma = 1.0;
  std::string schedule = "auto";
  double alpha0 = 0.0;
  std::uint64_t max_iters = 100000;
  std::uint64_t record_every = 1;
  bool no_stop = false;
  double feas_tol = 1e-2;
  double gap_tol = 1e-2;
  double stagnation_tol = 1e-3;
  std::uint32_t window_m = 10;
  std::string format = "csv";
  std::string oracle = "none";
  std::uint64_t baseline_iters = 1000000;
  std::size_t grid_points = 101;
  double grid_radius = 10.0;
  std::size_t theory_samples = 200;
  bool wall_time = false;
  std::vector<double> betas{0.5, 0.96, 1.5};
  bool no_rate_runs = false;
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

int exit_code_for(sham_status st) {
  switch (st) {
    case SHAM_OK: return kExitOk;
    case SHAM_ERR_NUMERICAL: return kExitNumerical;
    case SHAM_ERR_INVALID_INPUT:
    case SHAM_ERR_INVALID_CONFIG:
    case SHAM_ERR_INVALID_DATA:
    case SHAM_ERR_IO:
    case SHAM_ERR_UNSUPPORTED_DIMENSION: return kExitUsage;
    default: return kExitNumerical;
  }
}

void check(sham_status st, const char* what) {
  if (st == SHAM_OK) return;
  throw CliError(exit_code_for(st), std::string(what) + ": " +
                                        sham_status_string(st) + ": " +
                                        sham_last_error());
}

struct InstanceDeleter {
  void operator()(sham_instance* p) const { sham_instance_free(p); }
};
struct RunDeleter {
  void operator()(sham_run* p) const { sham_run_free(p); }
};
using InstancePtr = std::unique_ptr<sham_instance, InstanceDeleter>;
using RunPtr = std::unique_ptr<sham_run, RunDeleter>;

// ---- config file ---------------------------------------------------------

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key) && !j[key].is_null()) field = j[key].get<T>();
}

void apply_config_file(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitUsage, "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw CliError(kExitUsage, "config file " + path + ": " + e.what());
  }
  if (!j.is_object())
    throw CliError(kExitUsage, "config file " + path + ": expected an object");
  // The effective-config block printed by every command nests its values.
  if (j.contains("effective_config")) j = j["effective_config"];
  try {
    take(j, "instance", s.instance);
    take(j, "out", s.out);
    take(j, "n", s.n);
    take(j, "m", s.m);
    take(j, "mu", s.mu);
    take(j, "seed", s.seed);
    s.seed_from_config = j.contains("seed");
    if (j.contains("gen_seed") && !j["gen_seed"].is_null())
      s.gen_seed = j["gen_seed"].get<std::uint64_t>();
    take(j, "seeds", s.seeds);
    take(j, "gammas", s.gammas);
    take(j, "mus", s.mus);
    take(j, "beta", s.beta);
    take(j, "gamma", s.gamma);
    take(j, "schedule", s.schedule);
    take(j, "alpha0", s.alpha0);
    take(j, "max_iters", s.max_iters);
    take(j, "record_every", s.record_every);
    take(j, "no_stop", s.no_stop);
    take(j, "feas_tol", s.feas_tol);
    take(j, "gap_tol", s.gap_tol);
    take(j, "stagnation_tol", s.stagnation_tol);
    take(j, "window_m", s.window_m);
    take(j, "format", s.format);
    take(j, "oracle", s.oracle);
    take(j, "baseline_iters", s.baseline_iters);
    take(j, "grid_points", s.grid_points);
    take(j, "grid_radius", s.grid_radius);
    take(j, "theory_samples", s.theory_samples);
    take(j, "wall_time", s.wall_time);
    take(j, "betas", s.betas);
    take(j, "no_rate_runs", s.no_rate_runs);
  } catch (const json::exception& e) {
    throw CliError(kExitUsage, "config file " + path + ": " + e.what());
  }
}

// Config values must be in place before CLI11 parses the flags, so that
// explicit flags win.
std::optional<std::string> find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

// ---- helpers -------------------------------------------------------------

fs::path output_dir(const Settings& s) {
  fs::path dir = s.out.empty() ? fs::path(".") : fs::path(s.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw CliError(kExitUsage, "cannot create output directory " +
                                   dir.string() + ": " + ec.message());
  return dir;
}

std::string resolved_out(const Settings& s) {
  return s.out.empty() ? std::string(".") : s.out;
}

void write_atomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CliError(kExitUsage, "cannot write " + tmp.string());
    f << text;
    if (!f) throw CliError(kExitUsage, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw CliError(kExitUsage, "cannot rename onto " + path.string() + ": " +
                                   ec.message());
}

json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

const std::map<std::string, sham_schedule>& schedule_names() {
  static const std::map<std::string, sham_schedule> names{
      {"auto", SHAM_SCHEDULE_AUTO},
      {"choice1_k2", SHAM_SCHEDULE_CHOICE1_K2},
      {"choice1_k1_paperV", SHAM_SCHEDULE_CHOICE1_K1_PAPERV},
      {"choice2", SHAM_SCHEDULE_CHOICE2},
      {"switching", SHAM_SCHEDULE_SWITCHING},
  };
  return names;
}

// "auto" picks the switching schedule when mu > 0 and the log-damped
// choice otherwise.
std::string resolve_schedule(const std::string& name, double mu) {
  if (!schedule_names().count(name))
    throw CliError(kExitUsage, "unknown schedule '" + name + "'");
  if (name != "auto") return name;
  return mu > 0.0 ? "switching" : "choice1_k1_paperV";
}

sham_record_format parse_format(const std::string& f) {
  if (f == "csv") return SHAM_FORMAT_CSV;
  if (f == "jsonl") return SHAM_FORMAT_JSONL;
  throw CliError(kExitUsage, "unknown record format '" + f + "'");
}

struct InstanceInfo {
  std::size_t n = 0;
  std::size_t m = 0;
  double mu = 0.0;
  double L_f = 0.0;
  std::uint64_t seed = 0;
};

InstanceInfo info_of(const sham_instance* inst) {
  InstanceInfo i;
  check(sham_instance_info(inst, &i.n, &i.m, &i.mu, &i.L_f, &i.seed),
        "instance info");
  return i;
}

InstancePtr generate(std::size_t n, std::size_t m, double mu,
                     std::uint64_t seed) {
  sham_instance* raw = nullptr;
  check(sham_instance_generate(n, m, mu, seed, &raw), "generate");
  return InstancePtr(raw);
}

InstancePtr obtain_instance(const Settings& s) {
  if (!s.instance.empty()) {
    sham_instance* raw = nullptr;
    check(sham_instance_load(s.instance.c_str(), &raw), "load instance");
    return InstancePtr(raw);
  }
  return generate(s.n, s.m, s.mu, s.gen_seed.value_or(s.seed));
}

// Attaches f* from the requested oracle; returns a description for the
// summary.
json attach_oracle(const Settings& s, sham_instance* inst) {
  json out;
  out["method"] = s.oracle;
  if (s.oracle == "none") {
    int has = 0;
    double fstar = 0.0;
    check(sham_instance_get_fstar(inst, &has, &fstar), "fstar");
    out["fstar"] = has ? json(fstar) : json(nullptr);
    out["source"] = has ? "instance file" : "unavailable";
    return out;
  }
  const InstanceInfo info = info_of(inst);
  sham_oracle_result r{};
  if (s.oracle == "baseline") {
    check(sham_oracle_baseline(inst, s.baseline_iters, &r, nullptr, info.n),
          "baseline oracle");
  } else if (s.oracle == "grid") {
    const std::vector<double> lo(info.n, -s.grid_radius);
    const std::vector<double> hi(info.n, s.grid_radius);
    check(sham_oracle_grid(inst, lo.data(), hi.data(), info.n, s.grid_points,
                           &r, nullptr),
          "grid oracle");
  } else {
    throw CliError(kExitUsage, "unknown oracle '" + s.oracle + "'");
  }
  check(sham_instance_set_fstar(inst, r.fstar), "set fstar");
  out["fstar"] = r.fstar;
  out["certified_tolerance"] = r.certified_tolerance;
  out["source"] = "computed";
  return out;
}

sham_options make_options(const Settings& s, const std::string& schedule,
                          double alpha0, std::uint64_t seed, double gamma) {
  sham_options o;
  sham_options_default(&o);
  o.beta = s.beta;
  o.gamma = gamma;
  o.schedule = schedule_names().at(schedule);
  o.alpha0 = alpha0;
  o.max_iterations = s.max_iters;
  o.seed = seed;
  o.record_every = s.record_every;
  o.stopping_enabled = s.no_stop ? 0 : 1;
  o.feas_tol = s.feas_tol;
  o.gap_tol = s.gap_tol;
  o.stagnation_tol = s.stagnation_tol;
  o.window_m = s.window_m;
  o.record_wall_time = s.wall_time ? 1 : 0;
  return o;
}

const char* reason_name(sham_stop_reason r) {
  switch (r) {
    case SHAM_STOP_CONVERGED: return "stop_converged";
    case SHAM_STOP_STAGNATED: return "stop_stagnated";
    case SHAM_STOP_BUDGET_EXHAUSTED: return "budget_exhausted";
  }
  return "unknown";
}

// Every value the run depends on, with defaults expanded.
json effective_solver_config(const Settings& s, const InstanceInfo& info,
                             const std::string& schedule, double alpha0) {
  json c;
  if (!s.instance.empty()) {
    c["instance"] = s.instance;
  } else {
    c["n"] = s.n;
    c["m"] = s.m;
    c["mu"] = s.mu;
    c["gen_seed"] = s.gen_seed.value_or(s.seed);
  }
  c["seed"] = s.seed;
  c["beta"] = s.beta;
  c["gamma"] = s.gamma;
  c["schedule"] = schedule;
  c["alpha0"] = alpha0;
  c["L_f"] = info.L_f;
  c["max_iters"] = s.max_iters;
  c["record_every"] = s.record_every;
  c["no_stop"] = s.no_stop;
  c["feas_tol"] = s.feas_tol;
  c["gap_tol"] = s.gap_tol;
  c["stagnation_tol"] = s.stagnation_tol;
  c["window_m"] = s.window_m;
  c["format"] = s.format;
  c["oracle"] = s.oracle;
  c["baseline_iters"] = s.baseline_iters;
  c["grid_points"] = s.grid_points;
  c["grid_radius"] = s.grid_radius;
  c["theory_samples"] = s.theory_samples;
  c["wall_time"] = s.wall_time;
  c["out"] = resolved_out(s);
  return c;
}

void print_block(const char* name, const json& value) {
  json wrapper;
  wrapper[name] = value;
  std::cout << wrapper.dump(2) << "\n";
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

// ---- commands ------------------------------------------------------------

int cmd_generate(const Settings& s) {
  const std::uint64_t seed = s.gen_seed.value_or(s.seed);
  json c;
  c["n"] = s.n;
  c["m"] = s.m;
  c["mu"] = s.mu;
  c["gen_seed"] = seed;
  c["out"] = resolved_out(s);
  fs::path path;
  if (!s.instance.empty()) {
    path = s.instance;
    c["instance"] = s.instance;
  } else {
    std::ostringstream name;
    name << "instance_n" << s.n << "_m" << s.m << "_mu" << s.mu << "_s" << seed
         << ".json";
    path = output_dir(s) / name.str();
  }
  print_block("effective_config", c);

  InstancePtr inst = generate(s.n, s.m, s.mu, seed);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  check(sham_instance_save(inst.get(), path.string().c_str(), 1),
        "save instance");
  const InstanceInfo info = info_of(inst.get());
  json r;
  r["instance"] = path.string();
  r["sidecar"] = path.string() + ".meta.json";
  r["n"] = info.n;
  r["m"] = info.m;
  r["mu"] = info.mu;
  r["L_f"] = info.L_f;
  r["seed"] = info.seed;
  print_block("generated", r);
  return kExitOk;
}

int cmd_solve(const Settings& s) {
  InstancePtr inst = obtain_instance(s);
  const InstanceInfo info = info_of(inst.get());
  const sham_record_format format = parse_format(s.format);
  const std::string schedule = resolve_schedule(s.schedule, info.mu);
  const double alpha0 = s.alpha0 > 0.0 ? s.alpha0 : 1.0 / info.L_f;
  const fs::path dir = output_dir(s);
  const json config = effective_solver_config(s, info, schedule, alpha0);
  print_block("effective_config", config);

  const json oracle = attach_oracle(s, inst.get());
  if (!s.no_stop && oracle["fstar"].is_null())
    warn("no f* available; using the stagnation stopping rule instead of the "
         "gap rule");

  const sham_options opts =
      make_options(s, schedule, alpha0, s.seed, s.gamma);
  sham_run* raw = nullptr;
  check(sham_solve(inst.get(), &opts, nullptr, info.n, &raw), "solve");
  RunPtr run(raw);

  sham_run_summary sum{};
  check(sham_run_summary_get(run.get(), &sum), "summary");
  std::size_t n_records = 0;
  check(sham_run_record_count(run.get(), &n_records), "record count");
  const fs::path records =
      dir / (format == SHAM_FORMAT_CSV ? "records.csv" : "records.jsonl");
  check(sham_run_write_records(run.get(), records.string().c_str(), format),
        "write records");

  json theory;
  sham_theory_constants tc{};
  const sham_status tst =
      sham_run_theory_constants(run.get(), s.theory_samples, s.seed, &tc);
  if (tst == SHAM_OK) {
    theory["B_f_emp"] = tc.B_f_emp;
    theory["B_h_emp"] = tc.B_h_emp;
    theory["c_emp"] = tc.c_emp;
    theory["rho"] = tc.rho;
    theory["B_sq"] = number_or_null(tc.B_sq);
    theory["theta"] = tc.theta;
    theory["k0"] = tc.has_k0 ? json(tc.k0) : json(nullptr);
  } else {
    theory["unavailable"] = sham_last_error();
  }

  json summary;
  summary["stop_reason"] = reason_name(sum.reason);
  summary["iterations"] = sum.iterations;
  summary["epochs"] = double(sum.iterations) / double(info.m);
  summary["f_last"] = sum.f_last;
  summary["feas_sq_last"] = sum.feas_sq_last;
  summary["max_viol_last"] = sum.max_viol_last;
  summary["f_avg"] = number_or_null(sum.f_avg);
  summary["feas_sq_avg"] = number_or_null(sum.feas_sq_avg);
  summary["grad_norm_max"] = sum.grad_norm_max;
  summary["subgrad_norm_max"] = sum.subgrad_norm_max;
  summary["outside_theory"] = sum.outside_theory != 0;
  summary["oracle"] = oracle;
  summary["theory_constants"] = theory;
  summary["records"] = records.string();
  summary["record_count"] = n_records;
  if (s.wall_time) summary["wall_ns"] = sum.wall_ns;
  if (sum.outside_theory)
    warn("beta outside (0, 1): the rate guarantees do not apply");

  json file;
  file["effective_config"] = config;
  file["summary"] = summary;
  write_atomically(dir / "summary.json", file.dump(2) + "\n");
  print_block("summary", summary);
  return sum.reason == SHAM_STOP_BUDGET_EXHAUSTED ? kExitBudget : kExitOk;
}

struct Stats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
  void add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
    sum += v;
    ++count;
  }
  double mean() const { return count ? sum / double(count) : 0.0; }
};

int cmd_benchmark(const Settings& s) {
  if (s.seeds.empty()) throw CliError(kExitUsage, "benchmark needs >= 1 seed");
  const std::vector<double> gammas =
      s.gammas.empty() ? std::vector<double>{s.gamma} : s.gammas;
  const std::vector<double> mus =
      s.mus.empty() ? std::vector<double>{s.mu} : s.mus;
  if (!s.instance.empty())
    throw CliError(kExitUsage,
                   "benchmark generates one instance per seed; drop --instance");
  parse_format(s.format);
  const fs::path dir = output_dir(s);

  json c;
  c["n"] = s.n;
  c["m"] = s.m;
  c["mus"] = mus;
  c["gammas"] = gammas;
  c["seeds"] = s.seeds;
  c["beta"] = s.beta;
  c["schedule"] = s.schedule;
  c["alpha0"] = s.alpha0 > 0.0 ? json(s.alpha0) : json("1/L_f");
  c["max_iters"] = s.max_iters;
  c["record_every"] = s.record_every;
  c["no_stop"] = s.no_stop;
  c["feas_tol"] = s.feas_tol;
  c["gap_tol"] = s.gap_tol;
  c["stagnation_tol"] = s.stagnation_tol;
  c["window_m"] = s.window_m;
  c["oracle"] = s.oracle;
  c["baseline_iters"] = s.baseline_iters;
  c["out"] = resolved_out(s);
  print_block("effective_config", c);

  struct Cell {
    double mu;
    double gamma;
    Stats iters;
    Stats wall_ms;
    std::size_t budget_hits = 0;
    std::size_t failures = 0;
    std::string error;
  };
  std::vector<Cell> cells;
  for (double mu : mus)
    for (double g : gammas) cells.push_back(Cell{mu, g, {}, {}, 0, 0, {}});

  std::size_t m = s.m;
  for (double mu : mus) {
    for (std::uint64_t seed : s.seeds) {
      InstancePtr inst;
      std::string inst_error;
      try {
        inst = generate(s.n, s.m, mu, seed);
        attach_oracle(s, inst.get());
      } catch (const CliError& e) {
        inst_error = e.what();
      }
      for (Cell& cell : cells) {
        if (cell.mu != mu) continue;
        if (!inst) {
          ++cell.failures;
          cell.error = inst_error;
          continue;
        }
        const InstanceInfo info = info_of(inst.get());
        m = info.m;
        const std::string sched = resolve_schedule(s.schedule, mu);
        const double alpha0 = s.alpha0 > 0.0 ? s.alpha0 : 1.0 / info.L_f;
        const sham_options opts = make_options(s, sched, alpha0, seed, cell.gamma);
        sham_run* raw = nullptr;
        const sham_status st =
            sham_solve(inst.get(), &opts, nullptr, info.n, &raw);
        if (st != SHAM_OK) {
          ++cell.failures;
          cell.error = sham_last_error();
          continue;
        }
        RunPtr run(raw);
        sham_run_summary sum{};
        check(sham_run_summary_get(run.get(), &sum), "summary");
        cell.iters.add(double(sum.iterations));
        cell.wall_ms.add(double(sum.wall_ns) * 1e-6);
        if (sum.reason == SHAM_STOP_BUDGET_EXHAUSTED) ++cell.budget_hits;
      }
    }
  }

  std::ostringstream csv;
  csv << "mu,gamma,runs,failures,budget_hits,iters_min,iters_mean,iters_max,"
         "epochs_mean,wall_ms_min,wall_ms_mean,wall_ms_max\n";
  std::printf("%-8s %-6s %5s %6s %6s %10s %12s %10s %9s %10s %10s %10s\n", "mu",
              "gamma", "runs", "failed", "budget", "iters_min", "iters_mean",
              "iters_max", "epochs", "ms_min", "ms_mean", "ms_max");
  bool any_failure = false;
  bool any_budget = false;
  for (const Cell& cell : cells) {
    any_failure |= cell.failures > 0;
    any_budget |= cell.budget_hits > 0;
    const bool empty = cell.iters.count == 0;
    std::printf("%-8g %-6g %5zu %6zu %6zu", cell.mu, cell.gamma,
                cell.iters.count, cell.failures, cell.budget_hits);
    if (empty) {
      std::printf(" %10s %12s %10s %9s %10s %10s %10s\n", "-", "-", "-", "-",
                  "-", "-", "-");
    } else {
      std::printf(" %10.0f %12.1f %10.0f %9.2f %10.2f %10.2f %10.2f\n",
                  cell.iters.min, cell.iters.mean(), cell.iters.max,
                  cell.iters.mean() / double(m), cell.wall_ms.min,
                  cell.wall_ms.mean(), cell.wall_ms.max);
    }
    if (cell.failures > 0)
      std::printf("  failed: %s\n", cell.error.c_str());
    csv << cell.mu << ',' << cell.gamma << ',' << cell.iters.count << ','
        << cell.failures << ',' << cell.budget_hits << ',';
    if (empty) {
      csv << ",,,,,,\n";
    } else {
      csv << cell.iters.min << ',' << cell.iters.mean() << ','
          << cell.iters.max << ',' << cell.iters.mean() / double(m) << ','
          << cell.wall_ms.min << ',' << cell.wall_ms.mean() << ','
          << cell.wall_ms.max << '\n';
    }
  }
  write_atomically(dir / "benchmark.csv", csv.str());
  if (any_failure) return kExitNumerical;
  return any_budget ? kExitBudget : kExitOk;
}

struct VerifyTally {
  int failed = 0;
};

void on_suite(const char* suite, int passed, const char* detail,
              double seconds, void* user) {
  auto* tally = static_cast<VerifyTally*>(user);
  if (!passed) ++tally->failed;
  std::printf("%s %-24s %8.2fs  %s\n", passed ? "PASS" : "FAIL", suite,
              seconds, detail);
  std::fflush(stdout);
}

int cmd_verify(const Settings& s) {
  json c;
  c["seed"] = s.seed;
  c["betas"] = s.betas;
  c["no_rate_runs"] = s.no_rate_runs;
  print_block("effective_config", c);
  VerifyTally tally;
  int all = 0;
  check(sham_verify(s.seed, s.betas.data(), s.betas.size(),
                    s.no_rate_runs ? 0 : 1, on_suite, &tally, &all),
        "verify");
  std::printf("%s: %d suite(s) failed\n", all ? "ALL PASSED" : "FAILED",
              tally.failed);
  return all ? kExitOk : kExitNumerical;
}

// ---- option wiring -------------------------------------------------------

void add_problem_options(CLI::App* app, Settings& s) {
  app->add_option("--n", s.n, "Dimension")->check(CLI::Range(2, 1 << 20));
  app->add_option("--m", s.m, "Number of constraints")
      ->check(CLI::Range(1, 1 << 24));
  app->add_option("--mu", s.mu, "Strong convexity added to Q_f")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--gen-seed", s.gen_seed,
                  "Instance generator seed (defaults to --seed)");
  app->add_option("--out", s.out, "Output directory (default $SHAM_OUT_DIR or .)");
}

void add_solver_options(CLI::App* app, Settings& s) {
  app->add_option("--beta", s.beta, "Relaxation parameter in (0, 2)");
  app->add_option("--gamma", s.gamma, "Anchor weight in [0, 1]");
  std::vector<std::string> names;
  for (const auto& [k, v] : schedule_names()) names.push_back(k);
  app->add_option("--schedule", s.schedule, "Stepsize schedule")
      ->check(CLI::IsMember(names));
  app->add_option("--alpha0", s.alpha0,
                  "Initial stepsize for the convex schedules (default 1/L_f)");
  app->add_option("--max-iters", s.max_iters, "Iteration budget");
  app->add_option("--record-every", s.record_every, "Record stride");
  app->add_flag("--no-stop", s.no_stop, "Disable the stopping rules");
  app->add_option("--feas-tol", s.feas_tol, "Feasibility tolerance");
  app->add_option("--gap-tol", s.gap_tol, "Optimality gap tolerance");
  app->add_option("--stagnation-tol", s.stagnation_tol,
                  "Step-length stagnation tolerance");
  app->add_option("--window-m", s.window_m, "Stagnation window length");
  app->add_option("--format", s.format, "Record format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  app->add_option("--oracle", s.oracle, "Source of f*: none, baseline, grid")
      ->check(CLI::IsMember({"none", "baseline", "grid"}));
  app->add_option("--baseline-iters", s.baseline_iters,
                  "Iterations of the baseline oracle");
  app->add_option("--grid-points", s.grid_points,
                  "Grid oracle points per axis");
  app->add_option("--grid-radius", s.grid_radius,
                  "Grid oracle half-width around the origin");
  app->add_flag("--wall-time", s.wall_time,
                "Record wall-clock time (records are then not reproducible)");
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  if (const char* env = std::getenv("SHAM_OUT_DIR")) s.out = env;

  CLI::App app{"Stochastic halfspace approximation method"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sham_version()));
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; explicit flags override it");

  CLI::App* gen = app.add_subcommand("generate", "Generate a random instance");
  add_problem_options(gen, s);
  gen->add_option("--seed", s.seed, "Generator seed");
  gen->add_option("--instance", s.instance, "Output instance path");
  gen->add_option("--config", config_path, "JSON config file");

  CLI::App* solve = app.add_subcommand("solve", "Run the method once");
  add_problem_options(solve, s);
  add_solver_options(solve, s);
  solve->add_option("--seed", s.seed, "Solver seed");
  solve->add_option("--instance", s.instance, "Instance file to solve")
      ->check(CLI::ExistingFile);
  solve->add_option("--theory-samples", s.theory_samples,
                    "Samples for the empirical constants");
  solve->add_option("--config", config_path, "JSON config file");

  CLI::App* bench = app.add_subcommand("benchmark", "Multi-seed table");
  add_problem_options(bench, s);
  add_solver_options(bench, s);
  bench->add_option("--seeds", s.seeds, "Seeds (one instance and run each)")
      ->delimiter(',');
  bench->add_option("--gammas", s.gammas, "Gamma values, e.g. 0,1")
      ->delimiter(',');
  bench->add_option("--mus", s.mus, "Mu values, e.g. 0,1")->delimiter(',');
  bench->add_option("--config", config_path, "JSON config file");

  CLI::App* ver = app.add_subcommand("verify", "Run the property suites");
  ver->add_option("--seed", s.seed, "Suite seed");
  ver->add_option("--betas", s.betas, "Betas for the distance checks")
      ->delimiter(',');
  ver->add_flag("--no-rate-runs", s.no_rate_runs,
                "Skip the end-to-end rate runs");
  ver->add_option("--config", config_path, "JSON config file");

  try {
    if (auto path = find_config_path(argc, argv)) apply_config_file(*path, s);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(s);
    if (*solve) return cmd_solve(s);
    if (*bench) return cmd_benchmark(s);
    if (*ver) {
      // The suites have their own default seed.
      if (ver->count("--seed") == 0 && !s.seed_from_config) s.seed = 2024;
      return cmd_verify(s);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
