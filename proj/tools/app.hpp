// Copyright 2026 The qmeta Authors
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

#pragma once

#include <iosfwd>

namespace qmeta::app {

/// Runs the qmeta command line. Logs go to `log`; data goes to files.
/// Returns 0 on success, 1 on validation or format errors and 2 when a fit
/// fails or a reproduced value misses its tolerance.
int run(int argc, const char* const* argv, std::ostream& log);

}  // namespace qmeta::app
