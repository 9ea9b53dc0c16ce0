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

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sham {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ErrorCode {
  kInvalidInput = 1,
  kInvalidConfig,
  kNumericalFailure,
  kNotReady,
  kUnsupportedDimension,
  kInfeasibleGrid,
  kOracleFailure,
  kDegenerateSample,
  kDegenerateConstant,
  kInvalidData,
  kIo,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the C
// layer can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Numerical failure with the iteration at which it happened.
class NumericalError : public Error {
 public:
  NumericalError(std::uint64_t iteration, const std::string& quantity)
      : Error(ErrorCode::kNumericalFailure,
              "non-finite " + quantity + " at iteration " +
                  std::to_string(iteration)),
        iteration_(iteration),
        quantity_(quantity) {}

  std::uint64_t iteration() const noexcept { return iteration_; }
  const std::string& quantity() const noexcept { return quantity_; }

 private:
  std::uint64_t iteration_;
  std::string quantity_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

inline double positive_part(double a) { return a > 0.0 ? a : 0.0; }

}  // namespace sham
