// Copyright 2026 The freebound Authors
//
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

#include <stdexcept>
#include <string>
#include <vector>

namespace fb {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (e.g. p outside (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Point where a quantity is not defined (u0'' at t <= 0).
class UndefinedPointError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A ball or rescaled grid leaves the sampled box.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// ODE integration produced a nonfinite state.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Nonfinite value met while sampling or reading a field.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::size_t node) : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// The minimizer produced NaN/Inf.
class DivergedError : public Error {
 public:
  using Error::Error;
};

/// Iterative linear solver missed its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// A diagnostic's modelling hypothesis fails on the given data.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Barrier inequality violated; carries the condition name.
class VerificationFailure : public Error {
 public:
  VerificationFailure(const std::string& what, std::string condition)
      : Error(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

class NoConstantsFound : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed file, config or command line.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace fb
