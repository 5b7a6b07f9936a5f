// asreval/atomic_file.h

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

#ifndef ASREVAL_ATOMIC_FILE_H_
#define ASREVAL_ATOMIC_FILE_H_

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace asreval {

/// Runs `writer` against a temporary file next to `path` and renames it
/// into place only if the writer returns normally.  On any exception the
/// temporary is removed and the exception propagates, so `path` is either
/// untouched or complete.
void WriteFileAtomically(const std::filesystem::path &path,
                         const std::function<void(std::ostream &)> &writer);

/// Opens for reading or throws Error(kIo).
std::ifstream OpenInput(const std::filesystem::path &path);

}  // namespace asreval

#endif  // ASREVAL_ATOMIC_FILE_H_
