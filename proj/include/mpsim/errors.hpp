// Copyright 2026 The mpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpsim {

/// Extents of paired or grouped axes do not agree.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A tensor of the wrong rank was passed (e.g. a rank-3 tensor to svd).
struct RankError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Gate matrix is not unitary or its targets are invalid.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested size exceeds what the dense simulator will allocate.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Linear-algebra backend failed (non-convergence, NaN/Inf in the result).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed OpenQASM input. Carries a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Syntactically valid OpenQASM that uses a feature the simulator excludes
/// (mid-circuit measurement, classical control, reset, opaque gates).
class UnsupportedFeatureError : public std::runtime_error {
public:
    UnsupportedFeatureError(const std::string& feature, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) +
                             ": unsupported feature: " + feature),
          feature_(feature), line_(line) {}

    const std::string& feature() const noexcept { return feature_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string feature_;
    std::size_t line_;
};

} // namespace mpsim
