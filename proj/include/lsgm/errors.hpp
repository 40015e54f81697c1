// Copyright 2026 The LSGM Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsgm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments: sizes that do not agree, out-of-range values, etc.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input files. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// A non-positive eigenvalue appeared among the requested top-d eigenpairs.
class EmbeddingRankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Procrustes alignment was requested with an empty seed set.
class SeedlessAlignmentError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Degenerate input to clustering (e.g. a zero row under spherical k-means).
class DegenerateInputError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace lsgm
