// Copyright 2026 The amdlv authors
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

#ifndef AMDLV_ERROR_H_
#define AMDLV_ERROR_H_

#include <stdexcept>
#include <string>

namespace amdlv {

// Failure categories surfaced by the loaders and the CLI.
enum class ErrorKind {
  kSyntax,
  kUnknownRelation,
  kArity,
  kUnboundField,
  kUnresolvedConstant,
  kSort,
  kSchema,
  kDanglingEndpoint,
  kNonBidirected,
  kMissingProgram,
  kIo,
  kUsage,
  kValidation,
  kShape,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int line = 0,
        int column = 0);

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorKind kind_;
  int line_;
  int column_;
};

}  // namespace amdlv

#endif  // AMDLV_ERROR_H_
