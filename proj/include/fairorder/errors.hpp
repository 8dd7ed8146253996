// Copyright 2026 The fairorder Authors
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

namespace fairorder {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs whose shapes disagree (feature count vs. partition, etc.).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Numeric parameters outside their domain (lambda <= 0, b <= 0, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Malformed scenario, noise spec, replica set or predicate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Illegal engine transition (unknown or duplicate delivery).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A request that should have been ordered never was.
class LivenessError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Caller used the wrong certifier for the pair (non-adjacent under plain OE).
class MisuseError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairorder
