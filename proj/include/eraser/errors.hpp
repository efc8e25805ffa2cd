// Copyright 2026 The eraser-sim Authors
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

#ifndef ERASER_ERRORS_HPP
#define ERASER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eraser {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid dimension, shape mismatch, or out-of-range factor index.
struct DimensionError : Error {
  using Error::Error;
};

/// Physical-parameter or argument domain violation (k_c > k, t < 0, ...).
struct DomainError : Error {
  using Error::Error;
};

/// Projector set does not resolve the identity.
struct CompletenessError : Error {
  using Error::Error;
};

/// Pulse sequence left population where the protocol requires vacuum.
struct SequencingError : Error {
  using Error::Error;
};

/// Malformed configuration file or unknown key/flag.
struct ConfigError : Error {
  using Error::Error;
};

/// Measurement records cannot be paired as required by an estimator.
struct PairingError : Error {
  using Error::Error;
};

/// The requested fit has no information about the parameter.
struct UnidentifiableError : Error {
  using Error::Error;
};

}  // namespace eraser

#endif  // ERASER_ERRORS_HPP
