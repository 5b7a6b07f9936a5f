// asreval/error.h

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

#ifndef ASREVAL_ERROR_H_
#define ASREVAL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asreval {

enum class ErrorKind {
  kParse,          // malformed record
  kOrdering,       // times out of order within a stream
  kRange,          // value outside its legal interval
  kDuplicate,      // repeated key
  kContiguity,     // n-best ranks not 1..n
  kJoin,           // side data with no matching primary record
  kFormat,         // structural file error (e.g. ARPA counts)
  kValue,          // illegal numeric value or parameter
  kAmbiguity,      // overlapping reference segments
  kReport,         // report cannot be computed (no reference words)
  kIncomparable,   // reports over different references
  kDegenerate,     // LM component useless for EM
  kThreshold,      // strict/relaxed threshold ordering
  kArgument,       // precondition on call arguments
  kIo,             // file system failure
  kInternal        // broken invariant inside the toolkit
};

const char *ErrorKindName(ErrorKind kind);

/// Every failure raised by the library. `line()` is 1-based and 0 when the
/// error is not tied to an input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message, std::size_t line = 0);

  ErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  /// The message without the kind and line decoration of what().
  const std::string &message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::size_t line_;
};

}  // namespace asreval

#endif  // ASREVAL_ERROR_H_
