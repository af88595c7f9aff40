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


#include "maskstore/base64.hpp"

#include <array>

#include "maskstore/errors.hpp"

namespace maskstore::base64 {
namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<std::int8_t, 256> make_reverse() {
  std::array<std::int8_t, 256> table{};
  for (auto& v : table) v = -1;
  for (int i = 0; i < 64; ++i) {
    table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<std::int8_t>(i);
  }
  return table;
}

constexpr auto kReverse = make_reverse();

}  // namespace

std::string encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.resize(encoded_size(bytes.size()));
  std::size_t o = 0;
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) |
                            (std::uint32_t{bytes[i + 1]} << 8) | bytes[i + 2];
    out[o++] = kAlphabet[(v >> 18) & 0x3f];
    out[o++] = kAlphabet[(v >> 12) & 0x3f];
    out[o++] = kAlphabet[(v >> 6) & 0x3f];
    out[o++] = kAlphabet[v & 0x3f];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    out[o++] = kAlphabet[(v >> 18) & 0x3f];
    out[o++] = kAlphabet[(v >> 12) & 0x3f];
    out[o++] = '=';
    out[o++] = '=';
  } else if (rest == 2) {
    const std::uint32_t v =
        (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8);
    out[o++] = kAlphabet[(v >> 18) & 0x3f];
    out[o++] = kAlphabet[(v >> 12) & 0x3f];
    out[o++] = kAlphabet[(v >> 6) & 0x3f];
    out[o++] = '=';
  }
  return out;
}

std::string encode(std::string_view bytes) {
  return encode(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()),
                          bytes.size()));
}

std::vector<std::uint8_t> decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw FormatError("base64 length " + std::to_string(text.size()) +
                      " is not a multiple of 4");
  }
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;

  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        if (!last || j < 4 - padding) throw FormatError("misplaced base64 padding");
        v <<= 6;
        continue;
      }
      const auto d = kReverse[static_cast<unsigned char>(c)];
      if (d < 0) throw FormatError("invalid base64 character");
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    // Unused bits must be zero so each byte string has exactly one encoding.
    if (last && ((padding == 2 && (v & 0xffff) != 0) || (padding == 1 && (v & 0xff) != 0))) {
      throw FormatError("non-canonical base64 padding bits");
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (!last || padding < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (!last || padding < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

}  // namespace maskstore::base64
