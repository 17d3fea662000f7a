// Copyright 2026 The qmeta Authors
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

namespace qmeta {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A domain type invariant or operation precondition was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The qubit gap lies above the mode frequency; E(flux) never reaches omega.
class NoCrossing : public Error {
 public:
  using Error::Error;
};

/// Effective cavity damping has non-positive real part.
class UnstableRegime : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// The dispersive closed form is singular on resonance.
class ZeroDetuning : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian kernel is not one-dimensional.
class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

/// Errors raised by the estimation layer. The CLI maps all of these to exit
/// code 2.
class FitError : public Error {
 public:
  using Error::Error;
};

class MaxIterations : public FitError {
 public:
  using FitError::FitError;
};

class SingularJacobian : public FitError {
 public:
  using FitError::FitError;
};

class NoPeak : public FitError {
 public:
  using FitError::FitError;
};

class FeatureNotFound : public FitError {
 public:
  using FitError::FitError;
};

class UnderDetermined : public FitError {
 public:
  using FitError::FitError;
};

class ResonantContamination : public FitError {
 public:
  using FitError::FitError;
};

/// Malformed configuration or trace file. `line()` is 1-based, 0 if the
/// problem is not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

  /// Same error, with `source` (usually a file name) prepended to the message.
  static FormatError in_source(const std::string& source, const FormatError& e) {
    return FormatError(source + ": " + e.what(), e.line_, 0);
  }

 private:
  FormatError(const std::string& what, std::size_t line, int) : Error(what), line_(line) {}

  std::size_t line_;
};

}  // namespace qmeta
