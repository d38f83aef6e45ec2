// Copyright 2026 The unmixkit Authors
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

namespace unmixkit {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

// A requested coordinate falls outside the available grid.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// Catch-all for violated call preconditions that have no dedicated type.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularNormalMatrix : public Error {
 public:
  using Error::Error;
};

// More library spectra than bands: the normal matrix cannot be inverted.
class Underdetermined : public Error {
 public:
  using Error::Error;
};

class MaxIterationsExceeded : public Error {
 public:
  using Error::Error;
};

class TooFewBands : public Error {
 public:
  using Error::Error;
};

class InvalidDegreesOfFreedom : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class EmptyCube : public Error {
 public:
  using Error::Error;
};

class InvalidThreshold : public Error {
 public:
  using Error::Error;
};

class InvalidK : public Error {
 public:
  using Error::Error;
};

// File-format errors carry enough location to point at the offending input.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : Error(std::move(message) + " (line " + std::to_string(line) +
              ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NegativeReflectance : public Error {
 public:
  NegativeReflectance(std::string message, std::size_t line)
      : Error(std::move(message) + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateName : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedDataType : public Error {
 public:
  using Error::Error;
};

class HeaderSyntax : public Error {
 public:
  using Error::Error;
};

class InvalidSparsity : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace unmixkit
