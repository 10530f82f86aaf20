// Copyright 2026 The FAN Authors
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

#ifndef FAN_ERROR_H_
#define FAN_ERROR_H_

#include <stdexcept>
#include <string>

namespace fan {

// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kShape,
  kInput,
  kConfig,
  kData,
  kTraining,
  kAudit,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ShapeError(const std::string& m) { return {ErrorKind::kShape, m}; }
inline Error InputError(const std::string& m) { return {ErrorKind::kInput, m}; }
inline Error ConfigError(const std::string& m) {
  return {ErrorKind::kConfig, m};
}
inline Error DataError(const std::string& m) { return {ErrorKind::kData, m}; }
inline Error TrainingError(const std::string& m) {
  return {ErrorKind::kTraining, m};
}
inline Error AuditError(const std::string& m) { return {ErrorKind::kAudit, m}; }
inline Error IoError(const std::string& m) { return {ErrorKind::kIo, m}; }

}  // namespace fan

#endif  // FAN_ERROR_H_
