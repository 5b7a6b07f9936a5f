// tools/cli.h

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

#ifndef ASREVAL_TOOLS_CLI_H_
#define ASREVAL_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace asreval {
namespace cli {

enum ExitCode { kExitOk = 0, kExitInput = 1, kExitInternal = 2 };

/// Runs one command line.  `args` excludes the program name, e.g.
/// {"score", "--stm", "ref.stm", "--ctm", "hyp.ctm"}.  Results that are
/// not sent to files go to `out`; diagnostics and usage go to `err`.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

/// Reads "key = value" lines (blank lines and '#' comments ignored) and
/// returns them as "--key=value" arguments.
std::vector<std::string> ReadConfigArgs(const std::string &path);

}  // namespace cli
}  // namespace asreval

#endif  // ASREVAL_TOOLS_CLI_H_
