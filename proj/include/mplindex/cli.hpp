// Copyright 2026 The mplindex Authors. All Rights Reserved.
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

#ifndef MPLINDEX_CLI_HPP_
#define MPLINDEX_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace mplindex {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitEstimation = 2,
  kExitUsage = 3,
};

// args excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mplindex

#endif  // MPLINDEX_CLI_HPP_
