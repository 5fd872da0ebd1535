// Copyright 2026 The Sensordep Authors. All rights reserved.
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

#ifndef SENSORDEP_ERROR_H_
#define SENSORDEP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sensordep {

// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  kInvalidArgument,
  kIo,
  kParse,
  kEmptyInput,
  kOverflow,
  kValidation,
};

std::string_view ErrorKindName(ErrorKind kind);

class SensorError : public std::runtime_error {
 public:
  SensorError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw SensorError(kind, message);
}

}  // namespace sensordep

#endif  // SENSORDEP_ERROR_H_
