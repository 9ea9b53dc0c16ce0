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

#include "sham/experiments.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sham {

void StoppingCriteria::validate() const {
  require(feas_tol > 0.0 && gap_tol > 0.0 && stagnation_tol > 0.0,
          ErrorCode::kInvalidConfig, "stopping tolerances must be positive");
  require(window_M >= 1, ErrorCode::kInvalidConfig, "window_M must be >= 1");
}

const char* to_string(StopDecision decision) {
  switch (decision) {
    case StopDecision::kContinue: return "continue";
    case StopDecision::kConverged: return "stop_converged";
    case StopDecision::kStagnated: return "stop_stagnated";
  }
  return "unknown";
}

StopDecision stopping_check(const StoppingInput& input,
                            const StoppingCriteria& criteria) {
  if (criteria.fstar) {
    if (input.feas_sq <= criteria.feas_tol &&
        std::abs(input.f_value - *criteria.fstar) <= criteria.gap_tol)
      return StopDecision::kConverged;
    return StopDecision::kContinue;
  }
  const auto& steps = input.recent_step_norms_sq;
  if (steps.size() < criteria.window_M) return StopDecision::kContinue;
  const auto window = steps.subspan(steps.size() - criteria.window_M);
  if (*std::max_element(window.begin(), window.end()) <=
      criteria.stagnation_tol)
    return StopDecision::kStagnated;
  return StopDecision::kContinue;
}

double feasibility_sq(const ProblemInstance& instance, const Vector& x) {
  double sum = 0.0;
  for (std::size_t j = 0; j < instance.constraint_count(); ++j) {
    const double h = positive_part(instance.constraints->value(j, x));
    sum += h * h;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Record I/O

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc() && res.ptr == s.data() + s.size(),
          ErrorCode::kInvalidData, "bad number '" + std::string(s) + "'");
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc() && res.ptr == s.data() + s.size(),
          ErrorCode::kInvalidData, "bad integer '" + std::string(s) + "'");
  return v;
}

std::string json_number(double v) {
  return std::isfinite(v) ? format_double(v) : "null";
}

double json_double(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : j.get<double>();
}

}  // namespace

std::string format_records(std::span<const RunRecord> records,
                           RecordFormat format) {
  std::ostringstream out;
  if (format == RecordFormat::kCsv) {
    out << kRecordCsvHeader << '\n';
    for (const auto& r : records) {
      out << r.k << ',' << format_double(r.f_last) << ','
          << format_double(r.f_avg) << ',' << format_double(r.feas_sq_last)
          << ',' << format_double(r.feas_sq_avg) << ','
          << format_double(r.max_viol_last) << ',' << format_double(r.alpha_k)
          << ',' << r.sampled_j << ',' << format_double(r.step_norm_sq) << ','
          << r.wall_ns << '\n';
    }
  } else {
    for (const auto& r : records) {
      out << "{\"k\":" << r.k << ",\"f_last\":" << json_number(r.f_last)
          << ",\"f_avg\":" << json_number(r.f_avg)
          << ",\"feas_sq_last\":" << json_number(r.feas_sq_last)
          << ",\"feas_sq_avg\":" << json_number(r.feas_sq_avg)
          << ",\"max_viol_last\":" << json_number(r.max_viol_last)
          << ",\"alpha_k\":" << json_number(r.alpha_k)
          << ",\"sampled_j\":" << r.sampled_j
          << ",\"step_norm_sq\":" << json_number(r.step_norm_sq)
          << ",\"wall_ns\":" << r.wall_ns << "}\n";
    }
  }
  return out.str();
}

std::vector<RunRecord> parse_records(const std::string& text,
                                     RecordFormat format) {
  std::vector<RunRecord> records;
  std::istringstream in(text);
  std::string line;
  if (format == RecordFormat::kCsv) {
    require(static_cast<bool>(std::getline(in, line)) &&
                line == kRecordCsvHeader,
            ErrorCode::kInvalidData, "record CSV: missing or wrong header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string_view> f;
      std::string_view rest(line);
      for (;;) {
        const auto pos = rest.find(',');
        f.push_back(rest.substr(0, pos));
        if (pos == std::string_view::npos) break;
        rest.remove_prefix(pos + 1);
      }
      require(f.size() == 10, ErrorCode::kInvalidData,
              "record CSV: expected 10 fields");
      RunRecord r;
      r.k = parse_int<std::uint64_t>(f[0]);
      r.f_last = parse_double(f[1]);
      r.f_avg = parse_double(f[2]);
      r.feas_sq_last = parse_double(f[3]);
      r.feas_sq_avg = parse_double(f[4]);
      r.max_viol_last = parse_double(f[5]);
      r.alpha_k = parse_double(f[6]);
      r.sampled_j = parse_int<std::uint64_t>(f[7]);
      r.step_norm_sq = parse_double(f[8]);
      r.wall_ns = parse_int<std::int64_t>(f[9]);
      records.push_back(r);
    }
  } else {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        RunRecord r;
        r.k = j.at("k").get<std::uint64_t>();
        r.f_last = json_double(j.at("f_last"));
        r.f_avg = json_double(j.at("f_avg"));
        r.feas_sq_last = json_double(j.at("feas_sq_last"));
        r.feas_sq_avg = json_double(j.at("feas_sq_avg"));
        r.max_viol_last = json_double(j.at("max_viol_last"));
        r.alpha_k = json_double(j.at("alpha_k"));
        r.sampled_j = j.at("sampled_j").get<std::uint64_t>();
        r.step_norm_sq = json_double(j.at("step_norm_sq"));
        r.wall_ns = j.at("wall_ns").get<std::int64_t>();
        records.push_back(r);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidData,
                    std::string("record JSONL: ") + e.what());
      }
    }
  }
  return records;
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::kIo,
            "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    require(static_cast<bool>(out), ErrorCode::kIo,
            "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::kIo,
          "cannot rename " + tmp.string() + " to " + path.string() + ": " +
              ec.message());
}

void emit_records(std::span<const RunRecord> records,
                  const std::filesystem::path& path, RecordFormat format) {
  write_file_atomically(path, format_records(records, format));
}

std::vector<RunRecord> read_records(const std::filesystem::path& path,
                                    RecordFormat format) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo,
          "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_records(ss.str(), format);
}

// ---------------------------------------------------------------------------
// Rate fitting

double rate_fit(std::span<const std::uint64_t> ks,
                std::span<const double> values, std::uint64_t k_min) {
  require(ks.size() == values.size(), ErrorCode::kInvalidData,
          "rate_fit: k and value counts differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < k_min || ks[i] == 0) continue;
    require(values[i] > 0.0 && std::isfinite(values[i]),
            ErrorCode::kInvalidData,
            "rate_fit: nonpositive value at k = " + std::to_string(ks[i]));
    lx.push_back(std::log(static_cast<double>(ks[i])));
    ly.push_back(std::log(values[i]));
  }
  require(lx.size() >= 10, ErrorCode::kInvalidData,
          "rate_fit: need at least 10 points with k >= k_min");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  require(sxx > 0.0, ErrorCode::kInvalidData,
          "rate_fit: all points share the same k");
  return sxy / sxx;
}

double rate_fit(std::span<const RunRecord> records, RateQuantity quantity,
                std::uint64_t k_min, std::optional<double> fstar) {
  require(quantity != RateQuantity::kGapAvg || fstar.has_value(),
          ErrorCode::kInvalidData, "rate_fit: gap needs fstar");
  std::vector<std::uint64_t> ks;
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.k < k_min) continue;
    ks.push_back(r.k);
    values.push_back(quantity == RateQuantity::kGapAvg
                         ? std::abs(r.f_avg - *fstar)
                         : r.feas_sq_avg);
  }
  return rate_fit(ks, values, k_min);
}

}  // namespace sham
