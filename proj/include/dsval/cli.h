// Copyright 2026 The dsval Authors
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

// Command-line front end. RunCli holds the whole program so tests can drive
// it in-process; tools/dsval_main.cc only forwards argv.

#ifndef DSVAL_CLI_H_
#define DSVAL_CLI_H_

#include <ostream>

namespace dsval {

// Exit codes: 0 success, 1 usage error, 2 computation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dsval

#endif  // DSVAL_CLI_H_
