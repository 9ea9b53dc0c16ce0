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

#include <filesystem>
#include <string>

namespace sham {

inline constexpr int kInstanceSchemaVersion = 1;

/// Self-describing JSON encoding of a generated QCQP. Every double is written
/// in shortest round-trip form, so write followed by read is bit exact.
std::string instance_to_json(const QcqpData& data);
QcqpData instance_from_json(const std::string& text);

void save_instance(const QcqpData& data, const std::filesystem::path& path);
QcqpData load_instance(const std::filesystem::path& path);

/// Small metadata file next to an instance: seed, generator version, L_f.
std::filesystem::path sidecar_path(const std::filesystem::path& instance_path);
void save_instance_sidecar(const QcqpData& data,
                           const std::filesystem::path& instance_path);

}  // namespace sham
