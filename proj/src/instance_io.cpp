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

#include "sham/instance_io.hpp"

#include "sham/experiments.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace sham {

namespace {

using nlohmann::json;

void write_vector(std::ostringstream& out, const Vector& v) {
  out << '[';
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_double(v(i));
  }
  out << ']';
}

void write_matrix(std::ostringstream& out, const Matrix& M) {
  out << '[';
  for (Index r = 0; r < M.rows(); ++r) {
    if (r) out << ',';
    write_vector(out, M.row(r).transpose());
  }
  out << ']';
}

Vector read_vector(const json& j, const char* what) {
  require(j.is_array(), ErrorCode::kInvalidData,
          std::string("instance: ") + what + " must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

Matrix read_matrix(const json& j, Index cols, const char* what) {
  require(j.is_array(), ErrorCode::kInvalidData,
          std::string("instance: ") + what + " must be an array of rows");
  Matrix M(static_cast<Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = read_vector(j[r], what);
    require(row.size() == cols, ErrorCode::kInvalidData,
            std::string("instance: ragged rows in ") + what);
    M.row(static_cast<Index>(r)) = row.transpose();
  }
  return M;
}

}  // namespace

std::string instance_to_json(const QcqpData& d) {
  std::ostringstream out;
  out << "{\n  \"schema\": \"sham-instance\",\n  \"schema_version\": "
      << kInstanceSchemaVersion << ",\n  \"dimension\": " << d.dimension
      << ",\n  \"m\": " << d.constraints.size()
      << ",\n  \"mu\": " << format_double(d.mu)
      << ",\n  \"L_f\": " << format_double(d.L_f)
      << ",\n  \"objective_scaling\": " << format_double(d.objective_scaling)
      << ",\n  \"generator_version\": " << d.generator_version
      << ",\n  \"seed\": " << d.seed << ",\n  \"Q_f\": ";
  write_matrix(out, d.Q_f);
  out << ",\n  \"q_f\": ";
  write_vector(out, d.q_f);
  out << ",\n  \"constraints\": [";
  for (std::size_t i = 0; i < d.constraints.size(); ++i) {
    const auto& c = d.constraints[i];
    out << (i ? ",\n    " : "\n    ") << "{\"Q\": ";
    write_matrix(out, c.Q);
    out << ", \"a\": ";
    write_vector(out, c.a);
    out << ", \"q\": ";
    write_vector(out, c.q);
    out << ", \"b\": " << format_double(c.b) << '}';
  }
  out << "\n  ],\n  \"box_lo\": ";
  write_vector(out, d.box_lo);
  out << ",\n  \"box_hi\": ";
  write_vector(out, d.box_hi);
  if (d.fstar) out << ",\n  \"fstar\": " << format_double(*d.fstar);
  out << "\n}\n";
  return out.str();
}

QcqpData instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidData,
                std::string("instance: not valid JSON: ") + e.what());
  }
  try {
    require(j.value("schema", std::string()) == "sham-instance",
            ErrorCode::kInvalidData, "instance: unknown schema");
    const int version = j.at("schema_version").get<int>();
    require(version == kInstanceSchemaVersion, ErrorCode::kInvalidData,
            "instance: unsupported schema_version " + std::to_string(version));
    QcqpData d;
    d.dimension = j.at("dimension").get<Index>();
    require(d.dimension >= 1, ErrorCode::kInvalidData,
            "instance: dimension must be positive");
    d.mu = j.at("mu").get<double>();
    d.L_f = j.at("L_f").get<double>();
    d.objective_scaling = j.value("objective_scaling", 0.0);
    d.generator_version = j.value("generator_version", kGeneratorVersion);
    d.seed = j.at("seed").get<std::uint64_t>();
    d.Q_f = read_matrix(j.at("Q_f"), d.dimension, "Q_f");
    d.q_f = read_vector(j.at("q_f"), "q_f");
    require(d.Q_f.rows() == d.dimension && d.q_f.size() == d.dimension,
            ErrorCode::kInvalidData, "instance: objective dimension mismatch");
    const auto m = j.at("m").get<std::size_t>();
    const json& cs = j.at("constraints");
    require(cs.is_array() && cs.size() == m, ErrorCode::kInvalidData,
            "instance: constraint count differs from m");
    for (const auto& cj : cs) {
      SocConstraintData c;
      c.Q = read_matrix(cj.at("Q"), d.dimension, "Q");
      c.a = read_vector(cj.at("a"), "a");
      c.q = read_vector(cj.at("q"), "q");
      c.b = cj.at("b").get<double>();
      require(c.a.size() == c.Q.rows() && c.q.size() == d.dimension,
              ErrorCode::kInvalidData, "instance: constraint size mismatch");
      d.constraints.push_back(std::move(c));
    }
    d.box_lo = read_vector(j.at("box_lo"), "box_lo");
    d.box_hi = read_vector(j.at("box_hi"), "box_hi");
    require(d.box_lo.size() == d.dimension && d.box_hi.size() == d.dimension,
            ErrorCode::kInvalidData, "instance: box dimension mismatch");
    if (j.contains("fstar") && !j.at("fstar").is_null())
      d.fstar = j.at("fstar").get<double>();
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidData,
                std::string("instance: malformed field: ") + e.what());
  }
}

void save_instance(const QcqpData& data, const std::filesystem::path& path) {
  write_file_atomically(path, instance_to_json(data));
}

QcqpData load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo,
          "cannot open instance " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return instance_from_json(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& instance_path) {
  auto p = instance_path;
  p += ".meta.json";
  return p;
}

void save_instance_sidecar(const QcqpData& data,
                           const std::filesystem::path& instance_path) {
  std::ostringstream out;
  out << "{\"seed\": " << data.seed
      << ", \"generator_version\": " << data.generator_version
      << ", \"L_f\": " << format_double(data.L_f)
      << ", \"objective_scaling\": " << format_double(data.objective_scaling)
      << "}\n";
  write_file_atomically(sidecar_path(instance_path), out.str());
}

}  // namespace sham
