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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "maskstore/ordertext.hpp"

namespace maskstore {

/// Ciphertext -> ordertext pairs, with the reverse index that serves range
/// queries. Holds no plaintext.
class OpeTable {
 public:
  void insert(const std::string& ciphertext, const OrderText& ordertext);

  /// Throws NotFound.
  const OrderText& lookup(const std::string& ciphertext) const;
  bool contains(const std::string& ciphertext) const { return by_ciphertext_.contains(ciphertext); }

  /// Ciphertexts with lo <= ordertext <= hi, ascending. Throws ArgumentError if lo > hi.
  std::vector<std::string> range(const OrderText& lo, const OrderText& hi) const;

  std::size_t size() const { return by_ciphertext_.size(); }
  const std::map<std::string, OrderText>& entries() const { return by_ciphertext_; }
  const std::map<OrderText, std::string>& by_ordertext() const { return by_ordertext_; }

 private:
  std::map<std::string, OrderText> by_ciphertext_;
  std::map<OrderText, std::string> by_ordertext_;
};

/// Binary search tree of DET ciphertexts kept by the untrusted server.
/// Nodes are addressed by index; -1 means "no child".
class OpeTree {
 public:
  struct Node {
    std::string ciphertext;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  explicit OpeTree(std::size_t width = kDefaultOrdertextWidth);

  std::size_t width() const { return width_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Index of the node at `path` ("" is the root), or nullopt if the slot is empty.
  std::optional<std::size_t> find(std::string_view path) const;
  const Node& node(std::size_t index) const { return nodes_.at(index); }

  /// Attaches `ciphertext` at the empty slot `path`. The parent must exist.
  /// Throws DepthExceeded when the path cannot be encoded at this width.
  OrderText attach(std::string_view path, const std::string& ciphertext);

  /// Places `ciphertext` at the slot `path` even when the path is too long to
  /// encode, then rebalances. The remap covers the pre-existing entries only.
  /// Throws DepthExceeded when no tree of size()+1 nodes fits the width.
  Remap attach_rebalanced(std::string_view path, const std::string& ciphertext);

  /// Rebuilds a minimum-height tree from the in-order sequence and rewrites
  /// every ordertext. Returns the total old -> new map.
  Remap rebalance();

  /// Longest root-to-node path length (edges); 0 for a single node or empty tree.
  std::size_t height() const;
  /// Whether a minimum-height tree of `count` nodes fits this width.
  bool fits(std::size_t count) const;

  std::vector<std::string> in_order() const;
  const OpeTable& table() const { return table_; }

  /// Persists the ciphertext/ordertext table; the tree shape is recoverable
  /// from the paths encoded in the ordertexts.
  void save(const std::filesystem::path& file) const;
  static OpeTree load(const std::filesystem::path& file);

 private:
  std::int32_t build_balanced(const std::vector<std::string>& sorted, std::size_t lo,
                              std::size_t hi, std::string& path);

  std::size_t width_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  OpeTable table_;
};

class OpeServer;

/// Server side of one client connection: consumes request frames, produces
/// response frames. Each session has at most one insertion in flight.
class ServerSession {
 public:
  explicit ServerSession(OpeServer& server) : server_(server) {}

  /// Handles one frame (without trailing LF) and returns the response frames.
  std::vector<std::string> handle(std::string_view line);
  bool closed() const { return closed_; }

 private:
  std::vector<std::string> dispatch(std::string_view line);
  std::vector<std::string> fatal(std::string_view code, std::string_view message);

  OpeServer& server_;
  bool greeted_ = false;
  bool closed_ = false;

  // In-flight insertion.
  bool inserting_ = false;
  std::string path_;
  std::uint64_t version_ = 0;
};

/// The untrusted OPE server: owns the tree and serializes mutations.
/// Insertions run optimistically; a mutation between INSERT_BEGIN and PUT
/// makes the late session retry (ERR CONFLICT).
class OpeServer {
 public:
  explicit OpeServer(std::size_t width = kDefaultOrdertextWidth,
                     std::optional<std::string> key_check = std::nullopt);
  OpeServer(OpeTree tree, std::optional<std::string> key_check);

  std::unique_ptr<ServerSession> open_session() { return std::make_unique<ServerSession>(*this); }

  std::size_t width() const { return width_; }
  std::size_t size() const;
  std::size_t height() const;
  OrderText lookup(const std::string& ciphertext) const;
  std::vector<std::string> range(const OrderText& lo, const OrderText& hi) const;
  std::vector<std::string> in_order() const;
  OpeTable table() const;
  Remap rebalance();

  void save(const std::filesystem::path& file) const;

 private:
  friend class ServerSession;

  const std::size_t width_;
  std::optional<std::string> key_check_;
  mutable std::shared_mutex mutex_;
  OpeTree tree_;
  std::uint64_t version_ = 0;
};

}  // namespace maskstore
