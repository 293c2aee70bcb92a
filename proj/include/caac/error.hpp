// Copyright 2026 The CAAC Authors.
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
#include <utility>
#include <vector>

namespace caac {

// Root of every error the engine raises. Each subclass corresponds to one
// failure category that callers (CLI, HTTP layer) map to an exit code or
// status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSL source text does not match the grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, int line, int column,
              std::vector<std::string> expected = {})
      : Error(Format(message, line, column, expected)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string Format(const std::string& message, int line, int column,
                            const std::vector<std::string>& expected) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) +
                      ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i != 0) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  int line_;
  int column_;
  std::vector<std::string> expected_;
};

// A user-defined relational operator that is not registered (strict parse).
class UnknownOperatorError : public Error {
 public:
  using Error::Error;
};

// Evaluation hit a user-defined operator with no registered callback.
class UnregisteredOperator : public Error {
 public:
  using Error::Error;
};

// An expression references an entity role absent from the bindings.
class UnboundEntityRole : public Error {
 public:
  using Error::Error;
};

// Value kinds do not fit together (string vs number ordering, list fact for
// a scalar comparison, fact type differing from its attribute declaration).
class TypeMismatch : public Error {
 public:
  using Error::Error;
};

// A derived function was called with the wrong number of arguments.
class ArityMismatch : public Error {
 public:
  using Error::Error;
};

// Policy or context file is not valid JSON, or a condition does not parse.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Document is well-formed but violates the schema (missing/duplicate keys,
// wrong value kinds, invalid decision values).
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ReferentialIntegrityError : public Error {
 public:
  using Error::Error;
};

class CycleError : public Error {
 public:
  CycleError(std::string message, std::vector<std::string> cycle)
      : Error(std::move(message)), cycle_(std::move(cycle)) {}
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

// Mutation or lookup names an entity that does not exist.
class UnknownTarget : public Error {
 public:
  using Error::Error;
};

class UnknownUser : public UnknownTarget {
 public:
  using UnknownTarget::UnknownTarget;
};

class UnknownRole : public UnknownTarget {
 public:
  using UnknownTarget::UnknownTarget;
};

class UnknownResource : public UnknownTarget {
 public:
  using UnknownTarget::UnknownTarget;
};

// Strict-mode removal of an entity that policies still reference.
class ReferencedEntityError : public Error {
 public:
  using Error::Error;
};

// Derivation rule set violates its load-time constraints.
class RuleError : public Error {
 public:
  using Error::Error;
};

}  // namespace caac
