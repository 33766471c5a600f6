// Copyright 2026 The xlrep Authors.
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

#ifndef XLREP_TOOLS_CLI_H_
#define XLREP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace xlrep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;

// Runs one subcommand. `args` excludes the program name. The JSON summary
// goes to `out`; diagnostics and usage text go to `err`.
int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err);

// Rounds to 10 significant digits, the precision of every JSON number.
double Round10(double value);

}  // namespace xlrep::cli

#endif  // XLREP_TOOLS_CLI_H_
