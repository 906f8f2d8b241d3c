// Copyright 2026 The thz Authors
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

namespace thz {

// Exit codes used by the command line front end.
enum class ExitCode : int { Ok = 0, Config = 2, Numeric = 3, Infeasible = 4 };

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode code() const { return ExitCode::Numeric; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::Config; }
};

// Bad arguments to a library call (shape mismatch, negative rate, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::Config; }
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class MultistabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::Infeasible; }
};

class SingularDetectorError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace thz
