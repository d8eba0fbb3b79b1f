// Copyright 2026 The sphloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The sphloc command line: simulate, test, zone, calibrate, power and
// limits-quantile.

#ifndef SPHLOC_CLI_H_
#define SPHLOC_CLI_H_

#include <ostream>

namespace sphloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

// Replicate count used by --fast.
inline constexpr int kFastReplicates = 2000;

// Parses and runs one command. Results go to `out`, diagnostics and the
// seed echo to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphloc::cli

#endif  // SPHLOC_CLI_H_
