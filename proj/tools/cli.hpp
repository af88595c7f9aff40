// Copyright 2026 The maskstore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace maskstore::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kIntegrity = 3,
  kEnvironment = 4,
  kProtocol = 5,
};

/// Runs one `maskstore` invocation. `args` excludes the program name.
/// Standard input is only read by commands given `--in -`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// Left-pads an all-digit field with zeros to `width` so byte order matches
/// numeric order. Other fields pass through. Throws ValueError when a
/// number is wider than `width`.
std::string pad_numeric(std::string_view field, std::size_t width);

std::string hex_encode(std::string_view bytes);
/// Throws ConfigError on odd length or a non-hex digit.
std::string hex_decode(std::string_view hex);

}  // namespace maskstore::cli
