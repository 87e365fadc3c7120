/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
// Command-line front end: `ope_kit <example1|example2|uci|sweep|selftest>`.
// Exit status is 0 on success, 2 for a configuration error and 1 for a
// failure while loading, running or writing.
#ifndef OPEKIT_CLI_H_
#define OPEKIT_CLI_H_

#include <ostream>

namespace opekit {

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opekit

#endif  // OPEKIT_CLI_H_
