// Copyright 2026 The ghzqkd Authors
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

#include <stdexcept>
#include <string>

namespace ghzqkd {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A subsystem label that does not exist in the state, or a repeated label.
class LabelError : public Error {
  public:
    using Error::Error;
};

/// A gate, probe vector, attack or probability failed a numeric check.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent session / run configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Identity registry failures: duplicates, unknown users, counter exhaustion.
class RegistryError : public Error {
  public:
    using Error::Error;
};

/// A keystream request that would reuse an already consumed counter.
class ReplayError : public RegistryError {
  public:
    using RegistryError::RegistryError;
};

}  // namespace ghzqkd
