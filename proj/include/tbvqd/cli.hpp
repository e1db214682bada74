// Copyright 2026 The tbvqd Authors
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

// Command-line front end: bands, bench, validate, dump-hamiltonian.
// Exit codes: 0 success, 1 computational failure, 2 usage or config error.

#pragma once

#include <string>
#include <vector>

namespace tbvqd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, char** argv);
/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

const char* version_string();

}  // namespace tbvqd
