// Copyright 2026 The Sensel Authors
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

#ifndef SENSEL_ERRORS_HPP
#define SENSEL_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sensel/types.hpp"

namespace sensel {

// Base class for all sensel failures. Subclasses distinguish input/domain
// problems (exit code 2 at the CLI) from convergence problems (exit code 1).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// --- Linear algebra ---

class ShapeMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NotSymmetric : public InputError {
 public:
  using InputError::InputError;
};

class NotPositiveDefinite : public InputError {
 public:
  using InputError::InputError;
};

// --- GaBP engine ---

class ZeroPivot : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// Thrown by multi-instance solves; carries which right-hand side failed.
class DivergedOrMaxRounds : public ConvergenceError {
 public:
  DivergedOrMaxRounds(const std::string& what, Index instance = -1)
      : ConvergenceError(what), instance_(instance) {}
  Index instance() const { return instance_; }

 private:
  Index instance_;
};

class MaxOuterExceeded : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// --- Barrier / Newton ---

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class InfeasibleBudget : public InputError {
 public:
  using InputError::InputError;
};

class SingularHessian : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class ZeroDiagonal : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateProjection : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class NotAscentDirection : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class LineSearchStall : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class MaxIterations : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class ApproximationUnavailable : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// --- MVEE ---

class DegeneratePoints : public InputError {
 public:
  using InputError::InputError;
};

class NoConvergence : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// --- I/O ---

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, Index row, Index col)
      : InputError(what), row_(row), col_(col) {}
  Index row() const { return row_; }
  Index col() const { return col_; }

 private:
  Index row_;
  Index col_;
};

class RaggedRows : public InputError {
 public:
  RaggedRows(const std::string& what, Index row)
      : InputError(what), row_(row) {}
  Index row() const { return row_; }

 private:
  Index row_;
};

class AllColumnsDropped : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace sensel

#endif  // SENSEL_ERRORS_HPP
