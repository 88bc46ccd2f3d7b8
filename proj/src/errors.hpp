// Copyright 2026 The Parley Authors
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

#ifndef PARLEY_ERRORS_HPP
#define PARLEY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parley {

/// Invalid negotiation data: malformed bids, profiles, or domains.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An agent violated the alternating-offers protocol.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(const std::string& what, char offender)
      : std::runtime_error(what), offender_(offender) {}
  char offender() const { return offender_; }

 private:
  char offender_;
};

/// Numerical failure (e.g. a Gram matrix that cannot be factorized).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation applied to an object in the wrong state.
class StateError : public std::runtime_error {
 public:
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration value (CLI flags, agent spec strings, config files).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace parley

#endif  // PARLEY_ERRORS_HPP
