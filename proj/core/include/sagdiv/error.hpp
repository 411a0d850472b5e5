// Copyright 2026 The sagdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace sagdiv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, non-finite values, out-of-domain inputs.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Data that cannot support the requested fit (identical points, rank-deficient designs).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// A factorization or linear solve failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The regularization search found no candidate with a finite objective.
class SearchFailure : public Error {
 public:
  using Error::Error;
};

/// The gradient loop produced a non-finite or runaway quantity.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class UnsupportedScenario : public Error {
 public:
  using Error::Error;
};

/// Configuration files that do not match the documented key schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// CSV input that cannot be parsed into a numeric table.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, long row) : Error(what), row_(row) {}
  long row() const noexcept { return row_; }

 private:
  long row_;
};

}  // namespace sagdiv
