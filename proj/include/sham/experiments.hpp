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

#pragma once

#include "sham/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sham {

/// Termination thresholds. With fstar known the run stops once
/// ||max(0, h(x))||^2 <= feas_tol and |f(x) - fstar| <= gap_tol; without it
/// the run stops when the last window_M squared step lengths are all
/// <= stagnation_tol.
struct StoppingCriteria {
  double feas_tol = 1e-2;
  double gap_tol = 1e-2;
  double stagnation_tol = 1e-3;
  std::size_t window_M = 10;
  std::optional<double> fstar;

  void validate() const;
};

enum class StopDecision { kContinue, kConverged, kStagnated };

const char* to_string(StopDecision decision);

/// Everything stopping_check looks at. `recent_step_norms_sq` is ordered
/// oldest first; only its last window_M entries are consulted.
struct StoppingInput {
  double feas_sq = 0.0;
  double f_value = 0.0;
  std::span<const double> recent_step_norms_sq;
};

StopDecision stopping_check(const StoppingInput& input,
                            const StoppingCriteria& criteria);

/// One row of the per-iteration trace. `k` counts completed iterations, so
/// the row describes x_k after the step that used alpha_{k-1} and sampled
/// constraint `sampled_j` (zero based). The *_avg fields refer to the
/// averaged iterate and are NaN while its accumulator is still empty.
struct RunRecord {
  std::uint64_t k = 0;
  double f_last = 0.0;
  double f_avg = 0.0;
  double feas_sq_last = 0.0;
  double feas_sq_avg = 0.0;
  double max_viol_last = 0.0;
  double alpha_k = 0.0;
  std::uint64_t sampled_j = 0;
  double step_norm_sq = 0.0;
  std::int64_t wall_ns = 0;

  bool operator==(const RunRecord&) const = default;
};

/// sum_j ((h_j(x))_+)^2.
double feasibility_sq(const ProblemInstance& instance, const Vector& x);

enum class RecordFormat { kCsv, kJsonl };

inline constexpr const char* kRecordCsvHeader =
    "k,f_last,f_avg,feas_sq_last,feas_sq_avg,max_viol_last,alpha_k,sampled_j,"
    "step_norm_sq,wall_ns";

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

std::string format_records(std::span<const RunRecord> records,
                           RecordFormat format);
std::vector<RunRecord> parse_records(const std::string& text,
                                     RecordFormat format);

/// Writes via a temporary file and rename so readers never see a partial file.
void emit_records(std::span<const RunRecord> records,
                  const std::filesystem::path& path, RecordFormat format);
std::vector<RunRecord> read_records(const std::filesystem::path& path,
                                    RecordFormat format);

void write_file_atomically(const std::filesystem::path& path,
                           const std::string& contents);

enum class RateQuantity { kGapAvg, kFeasSqAvg };

/// Least-squares slope of log(value) against log(k) over points with
/// k >= k_min. Needs at least 10 such points, all with value > 0.
double rate_fit(std::span<const std::uint64_t> ks,
                std::span<const double> values, std::uint64_t k_min);

/// Same fit on a record stream. The gap is |f_avg - fstar|, so `fstar` is
/// required for kGapAvg.
double rate_fit(std::span<const RunRecord> records, RateQuantity quantity,
                std::uint64_t k_min, std::optional<double> fstar = {});

inline constexpr std::uint64_t kDefaultRateBurnIn = 50;

}  // namespace sham
