// Copyright 2026 The gadtparam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <ostream>

namespace gadtparam {

// Exit codes: 0 answered / passed, 1 property violated, 2 usage or parse
// error, 3 type or kind error, 4 cap exceeded.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

// Source used by `demo`.
extern const char *const kSeqSource;

}  // namespace gadtparam
