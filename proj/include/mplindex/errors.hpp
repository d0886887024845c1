// Copyright 2026 The mplindex Authors. All Rights Reserved.
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

#ifndef MPLINDEX_ERRORS_HPP_
#define MPLINDEX_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mplindex {

// Bad input data or shapes. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The data is well formed but the estimator cannot produce a result.
// The CLI maps these to exit code 2.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateObservation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InconsistentCell : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class FormatError : public ValidationError {
 public:
  FormatError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyBasket : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BasketViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidDimension : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularSystem : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class UndefinedVariance : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class DegenerateDeflator : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class DegenerateForm : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class UnidentifiedModel : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class InvalidPrice : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class RedrawExhausted : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

}  // namespace mplindex

#endif  // MPLINDEX_ERRORS_HPP_
