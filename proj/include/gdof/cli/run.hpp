// SPDX-License-Identifier: Apache-2.0
//
// gdof-lab: GDoF laboratory for the MISO broadcast channel with partial CSIT
// Copyright (C) 2026 The gdof-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GDOF_CLI_RUN_HPP
#define GDOF_CLI_RUN_HPP

#include <ostream>
#include <string>
#include <vector>

namespace gdof::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAssertion = 3;

// Entry point shared by the gdof_lab binary and the tests. args excludes
// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gdof::cli

#endif
