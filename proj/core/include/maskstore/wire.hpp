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

#include <string>
#include <string_view>
#include <vector>

namespace maskstore::wire {

/// Protocol version carried by HELLO.
inline constexpr std::string_view kProtocolVersion = "1";

// client -> server
inline constexpr std::string_view kHello = "HELLO";
inline constexpr std::string_view kInsertBegin = "INSERT_BEGIN";
inline constexpr std::string_view kDir = "DIR";
inline constexpr std::string_view kPut = "PUT";
inline constexpr std::string_view kLookup = "LOOKUP";
inline constexpr std::string_view kRange = "RANGE";
inline constexpr std::string_view kRebalance = "REBALANCE";
inline constexpr std::string_view kBye = "BYE";

// server -> client
inline constexpr std::string_view kNode = "NODE";
inline constexpr std::string_view kEmpty = "EMPTY";
inline constexpr std::string_view kOk = "OK";
inline constexpr std::string_view kFound = "FOUND";
inline constexpr std::string_view kRangeItem = "RANGE_ITEM";
inline constexpr std::string_view kRangeEnd = "RANGE_END";
inline constexpr std::string_view kRemapBegin = "REMAP_BEGIN";
inline constexpr std::string_view kRemap = "REMAP";
inline constexpr std::string_view kRemapEnd = "REMAP_END";
inline constexpr std::string_view kErr = "ERR";

// ERR codes. MALFORMED, PROTOCOL, VERSION and AUTH close the session.
inline constexpr std::string_view kErrMalformed = "MALFORMED";
inline constexpr std::string_view kErrProtocol = "PROTOCOL";
inline constexpr std::string_view kErrVersion = "VERSION";
inline constexpr std::string_view kErrAuth = "AUTH";
inline constexpr std::string_view kErrNotFound = "NOT_FOUND";
inline constexpr std::string_view kErrArgument = "ARGUMENT";
inline constexpr std::string_view kErrConflict = "CONFLICT";
inline constexpr std::string_view kErrCapacity = "CAPACITY";

/// One newline-delimited frame: a verb followed by tab-separated fields.
struct Frame {
  std::string verb;
  std::vector<std::string> fields;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Splits one line (without its trailing LF) on TAB. Throws ProtocolError on
/// an empty line or an embedded LF/CR.
Frame parse(std::string_view line);

/// Joins verb and fields with TAB, no trailing LF. Throws ProtocolError when
/// a field contains TAB or LF.
std::string serialize(const Frame& frame);
std::string serialize(std::string_view verb, std::initializer_list<std::string_view> fields = {});

}  // namespace maskstore::wire
