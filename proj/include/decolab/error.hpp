// Copyright 2026 The decolab Authors
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

namespace decolab {

/// Coarse failure classes. The CLI maps each class to its own exit code.
enum class ErrorKind {
  input,      ///< malformed or inconsistent input (exit 2)
  numerical,  ///< numerical breakdown or ill-posed split (exit 3)
  invariant,  ///< an internal invariant did not hold (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorKind::input, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::invariant, what) {}
};

/// Peripheral and interior spectrum are not separated by a usable gap.
class NotGappedError : public NumericalError {
 public:
  explicit NotGappedError(const std::string& what) : NumericalError(what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input:
      return 2;
    case ErrorKind::numerical:
      return 3;
    case ErrorKind::invariant:
      return 4;
  }
  return 4;
}

}  // namespace decolab
