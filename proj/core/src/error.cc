// core/src/error.cc

// Copyright 2026  asreval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "asreval/error.h"

namespace asreval {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kOrdering: return "ordering error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kDuplicate: return "duplicate error";
    case ErrorKind::kContiguity: return "contiguity error";
    case ErrorKind::kJoin: return "join error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kValue: return "value error";
    case ErrorKind::kAmbiguity: return "ambiguity error";
    case ErrorKind::kReport: return "report error";
    case ErrorKind::kIncomparable: return "incomparable reports";
    case ErrorKind::kDegenerate: return "degenerate component";
    case ErrorKind::kThreshold: return "threshold error";
    case ErrorKind::kArgument: return "argument error";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

static std::string Decorate(ErrorKind kind, const std::string &message,
                            std::size_t line) {
  std::string out = ErrorKindName(kind);
  if (line != 0) out += " at line " + std::to_string(line);
  out += ": ";
  out += message;
  return out;
}

Error::Error(ErrorKind kind, const std::string &message, std::size_t line)
    : std::runtime_error(Decorate(kind, message, line)),
      kind_(kind), message_(message), line_(line) {}

}  // namespace asreval
