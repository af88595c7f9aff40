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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "maskstore/masking.hpp"
#include "maskstore/ordertext.hpp"

namespace maskstore {

class Transport;

/// Trusted side of the mOPE protocol. Holds the key, decrypts node
/// ciphertexts during descent and answers with directions; the server only
/// ever sees DET ciphertexts, directions and ordertexts.
///
/// Plaintexts are ordered byte-wise lexicographically. Not thread-safe: one
/// client drives one session.
class OpeClient {
 public:
  /// Sends HELLO and learns the ordertext width from the reply. Throws
  /// ProtocolError if the server refuses the session.
  OpeClient(Transport& transport, KeyMaterial key,
            std::optional<std::string> key_check_token = std::nullopt);
  ~OpeClient();
  OpeClient(const OpeClient&) = delete;
  OpeClient& operator=(const OpeClient&) = delete;

  std::size_t width() const { return width_; }
  const KeyMaterial& key() const { return key_; }

  /// Inserts (or finds) `plaintext` and returns its current ordertext. A
  /// too-deep insertion makes the server rebalance; the remap is folded into
  /// pending_remap(). Throws DepthExceeded when the tree is full.
  OrderText insert(std::string_view plaintext);

  /// Inserts many plaintexts in median-first order, which builds a balanced
  /// tree when starting empty, then resolves every ordertext after the last
  /// insertion so none of the returned values is stale.
  std::vector<OrderText> insert_batch(std::span<const std::string> plaintexts);

  /// Throws NotFound.
  OrderText lookup(const std::string& ciphertext);
  /// Ordertext of an already-inserted plaintext, if any.
  std::optional<OrderText> find(std::string_view plaintext);

  /// Ciphertexts with ordertext in [lo, hi], ascending. Throws ArgumentError if lo > hi.
  std::vector<std::string> range(const OrderText& lo, const OrderText& hi);
  /// Decrypted plaintext stored under `ordertext`. Throws NotFound.
  std::string plaintext_at(const OrderText& ordertext);

  /// Forces a full rebalance. Returns the old -> new map for this step; it is
  /// also folded into pending_remap().
  Remap rebalance();

  /// Composition of every remap received since the last take_remap(), keyed
  /// by the ordertexts that existed before the first of them.
  const Remap& pending_remap() const { return pending_; }
  Remap take_remap();

  /// Sends BYE. Also done by the destructor.
  void close();

 private:
  std::string decrypt(const std::string& ciphertext);
  Remap read_remap_body();
  void fold_remap(const Remap& step);
  [[noreturn]] void raise(const std::string& frame);
  std::string expect(std::string_view verb);

  Transport& transport_;
  KeyMaterial key_;
  std::size_t width_ = kDefaultOrdertextWidth;
  bool open_ = false;
  std::unordered_map<std::string, std::string> plaintext_cache_;
  Remap pending_;
};

}  // namespace maskstore
