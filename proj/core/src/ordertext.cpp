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


#include "maskstore/ordertext.hpp"

#include "maskstore/errors.hpp"

namespace maskstore {

OrderText OrderText::parse(std::string_view bits, std::size_t width) {
  if (bits.size() != width) {
    throw FormatError("ordertext has width " + std::to_string(bits.size()) + ", expected " +
                      std::to_string(width));
  }
  for (char c : bits) {
    if (c != '0' && c != '1') throw FormatError("ordertext must contain only '0' and '1'");
  }
  return OrderText(std::string(bits));
}

OrderText OrderText::all_zeros(std::size_t width) { return OrderText(std::string(width, '0')); }
OrderText OrderText::all_ones(std::size_t width) { return OrderText(std::string(width, '1')); }

bool OrderText::is_node_encoding() const { return bits_.find_last_of('1') != std::string::npos; }

std::string OrderText::path() const {
  const auto last = bits_.find_last_of('1');
  if (last == std::string::npos) throw FormatError("bit string is not a node ordertext");
  return bits_.substr(0, last);
}

OrderText encode_path(std::string_view path, std::size_t width) {
  if (width == 0) throw ArgumentError("ordertext width must be positive");
  if (path.size() > width - 1) {
    throw DepthExceeded("path of length " + std::to_string(path.size()) +
                        " does not fit an ordertext of width " + std::to_string(width));
  }
  std::string bits;
  bits.reserve(width);
  bits.append(path);
  bits.push_back('1');
  bits.resize(width, '0');
  return OrderText::parse(bits, width);
}

std::vector<std::uint8_t> pack(const OrderText& text) {
  std::vector<std::uint8_t> out((text.width() + 7) / 8, 0);
  for (std::size_t i = 0; i < text.width(); ++i) {
    if (text.bits()[i] == '1') out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

OrderText unpack(std::span<const std::uint8_t> bytes, std::size_t width) {
  if (bytes.size() != (width + 7) / 8) throw FormatError("packed ordertext has the wrong size");
  std::string bits(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if (bytes[i / 8] & (0x80u >> (i % 8))) bits[i] = '1';
  }
  return OrderText::parse(bits, width);
}

}  // namespace maskstore
