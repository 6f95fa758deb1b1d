// Copyright 2026 The qbattery Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qbattery {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A scalar argument is outside its documented domain.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// E_J/E_C below the transmon guard.
class TransmonRegimeError : public ParameterError {
  public:
    using ParameterError::ParameterError;
};

/// Level frequencies are not strictly increasing.
class OrderingError : public ParameterError {
  public:
    using ParameterError::ParameterError;
};

/// Drives inconsistent with the requested protocol kind.
class ProtocolError : public Error {
  public:
    using Error::Error;
};

/// Requested time step too coarse for the frame.
class ResolutionError : public Error {
  public:
    using Error::Error;
};

/// Norm drift exceeded the failure threshold.
class IntegrationError : public Error {
  public:
    using Error::Error;
};

class NormalizationError : public Error {
  public:
    using Error::Error;
};

/// The energy curve never reached the requested threshold.
class NotChargedError : public Error {
  public:
    NotChargedError(const std::string &what, double max_fraction)
        : Error(what), max_fraction_(max_fraction)
    {
    }

    /// Largest E/full_scale attained on the curve.
    [[nodiscard]] double max_fraction() const noexcept { return max_fraction_; }

  private:
    double max_fraction_;
};

/// Probabilities do not form a distribution.
class DistributionError : public Error {
  public:
    using Error::Error;
};

class TrainingError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent run configuration. The message starts with the
/// offending field path, e.g. `device.E_C`.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace qbattery
