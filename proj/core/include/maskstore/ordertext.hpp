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

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maskstore {

inline constexpr std::size_t kDefaultOrdertextWidth = 16;
/// Width of the bit-packed variant: 16 bytes.
inline constexpr std::size_t kPackedOrdertextWidth = 128;

/// A fixed-width string over {0,1}. Ordertexts produced by the OPE tree
/// have the form path || "1" || "0"*; range bounds may be any bit string of
/// the same width (e.g. all zeros / all ones).
///
/// Ordering is lexicographic on the bit string, which equals the in-order
/// position of the encoded node in the tree.
class OrderText {
 public:
  OrderText() = default;

  /// Validates the alphabet and that the length equals `width`. Throws FormatError.
  static OrderText parse(std::string_view bits, std::size_t width);
  static OrderText all_zeros(std::size_t width);
  static OrderText all_ones(std::size_t width);

  const std::string& bits() const { return bits_; }
  std::size_t width() const { return bits_.size(); }

  /// True when the bits have the node-encoding shape path || "1" || "0"*.
  bool is_node_encoding() const;
  /// The tree path of a node encoding (bits before the final '1'). Throws
  /// FormatError when this is not a node encoding.
  std::string path() const;

  friend auto operator<=>(const OrderText&, const OrderText&) = default;
  friend bool operator==(const OrderText&, const OrderText&) = default;

 private:
  explicit OrderText(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

/// path || "1" || zero padding to `width`. Throws DepthExceeded when
/// |path| > width - 1 and FormatError when path holds anything but 0/1.
OrderText encode_path(std::string_view path, std::size_t width = kDefaultOrdertextWidth);

/// Bit-packed variant: MSB-first into ceil(width / 8) bytes, trailing bits
/// zero. Byte-wise comparison of packed values matches OrderText ordering.
std::vector<std::uint8_t> pack(const OrderText& text);
OrderText unpack(std::span<const std::uint8_t> bytes, std::size_t width);

/// Old -> new ordertext assignment emitted by a tree rebalance.
using Remap = std::map<OrderText, OrderText>;

}  // namespace maskstore
