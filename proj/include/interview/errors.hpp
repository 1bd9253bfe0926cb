// Copyright 2026 The Interview Eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace interview {

// Base of every error raised by the library. Sessions catch this type and
// record the failure in the transcript instead of propagating it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transport failure or timeout after all network retries were used.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// The endpoint answered, but the body did not follow the chat protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Credential missing or rejected (HTTP 401/403).
class AuthError : public Error {
 public:
  using Error::Error;
};

class ScriptExhausted : public Error {
 public:
  using Error::Error;
};

// No usable JSON object after the configured number of re-asks. Keeps every
// raw reply so the transcript log can show what the judge actually said.
class StructuredOutputError : public Error {
 public:
  StructuredOutputError(const std::string& what, std::vector<std::string> raw_replies)
      : Error(what), raw_replies_(std::move(raw_replies)) {}

  const std::vector<std::string>& raw_replies() const { return raw_replies_; }

 private:
  std::vector<std::string> raw_replies_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class EmptyDecomposition : public Error {
 public:
  using Error::Error;
};

class CardinalityError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class NoMatchingFollowups : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateVariance : public Error {
 public:
  using Error::Error;
};

class MissingCell : public Error {
 public:
  using Error::Error;
};

class InsufficientRepetitions : public Error {
 public:
  using Error::Error;
};

class KeyMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace interview
