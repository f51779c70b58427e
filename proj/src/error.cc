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

#include "amdlv/error.h"

#include <string>

namespace amdlv {
namespace {

std::string Decorate(ErrorKind kind, const std::string& message, int line,
                     int column) {
  std::string out = ErrorKindName(kind);
  if (line > 0) {
    out += " at " + std::to_string(line) + ":" + std::to_string(column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSyntax: return "syntax error";
    case ErrorKind::kUnknownRelation: return "unknown relation";
    case ErrorKind::kArity: return "arity mismatch";
    case ErrorKind::kUnboundField: return "unbound field";
    case ErrorKind::kUnresolvedConstant: return "unresolved constant";
    case ErrorKind::kSort: return "sort mismatch";
    case ErrorKind::kSchema: return "schema violation";
    case ErrorKind::kDanglingEndpoint: return "dangling endpoint";
    case ErrorKind::kNonBidirected: return "non-bidirected";
    case ErrorKind::kMissingProgram: return "missing program";
    case ErrorKind::kIo: return "io error";
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kShape: return "shape mismatch";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message, int line, int column)
    : std::runtime_error(Decorate(kind, message, line, column)),
      kind_(kind),
      line_(line),
      column_(column) {}

}  // namespace amdlv
