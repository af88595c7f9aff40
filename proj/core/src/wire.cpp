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


#include "maskstore/wire.hpp"

#include "maskstore/errors.hpp"

namespace maskstore::wire {

Frame parse(std::string_view line) {
  if (line.empty()) throw ProtocolError("empty frame");
  if (line.find_first_of("\r\n") != std::string_view::npos) {
    throw ProtocolError("frame contains a line break");
  }
  Frame frame;
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const auto tab = line.find('\t', start);
    const auto part = line.substr(start, tab == std::string_view::npos ? tab : tab - start);
    if (first) {
      frame.verb = std::string(part);
      first = false;
    } else {
      frame.fields.emplace_back(part);
    }
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (frame.verb.empty()) throw ProtocolError("frame has no verb");
  return frame;
}

namespace {

void append_field(std::string& out, std::string_view field) {
  if (field.find_first_of("\t\r\n") != std::string_view::npos) {
    throw ProtocolError("frame field contains TAB or a line break");
  }
  out.append(field);
}

}  // namespace

std::string serialize(const Frame& frame) {
  std::string out;
  append_field(out, frame.verb);
  for (const auto& f : frame.fields) {
    out.push_back('\t');
    append_field(out, f);
  }
  return out;
}

std::string serialize(std::string_view verb, std::initializer_list<std::string_view> fields) {
  std::string out;
  append_field(out, verb);
  for (auto f : fields) {
    out.push_back('\t');
    append_field(out, f);
  }
  return out;
}

}  // namespace maskstore::wire
