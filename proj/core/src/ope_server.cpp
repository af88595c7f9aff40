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


#include "maskstore/ope_server.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "maskstore/base64.hpp"
#include "maskstore/errors.hpp"
#include "maskstore/wire.hpp"

namespace maskstore {

// ---------------------------------------------------------------------------
// OpeTable

void OpeTable::insert(const std::string& ciphertext, const OrderText& ordertext) {
  auto [it, inserted] = by_ciphertext_.try_emplace(ciphertext, ordertext);
  if (!inserted) {
    by_ordertext_.erase(it->second);
    it->second = ordertext;
  }
  by_ordertext_[ordertext] = ciphertext;
}

const OrderText& OpeTable::lookup(const std::string& ciphertext) const {
  const auto it = by_ciphertext_.find(ciphertext);
  if (it == by_ciphertext_.end()) throw NotFound("ciphertext not in OPE table");
  return it->second;
}

std::vector<std::string> OpeTable::range(const OrderText& lo, const OrderText& hi) const {
  if (hi < lo) throw ArgumentError("range lower bound exceeds upper bound");
  std::vector<std::string> out;
  for (auto it = by_ordertext_.lower_bound(lo); it != by_ordertext_.end() && !(hi < it->first);
       ++it) {
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// OpeTree

OpeTree::OpeTree(std::size_t width) : width_(width) {
  if (width_ < 1) throw ArgumentError("ordertext width must be positive");
}

std::optional<std::size_t> OpeTree::find(std::string_view path) const {
  std::int32_t cur = root_;
  for (char step : path) {
    if (cur < 0) return std::nullopt;
    const Node& n = nodes_[static_cast<std::size_t>(cur)];
    cur = step == '0' ? n.left : n.right;
  }
  if (cur < 0) return std::nullopt;
  return static_cast<std::size_t>(cur);
}

OrderText OpeTree::attach(std::string_view path, const std::string& ciphertext) {
  const OrderText ordertext = encode_path(path, width_);
  const auto index = static_cast<std::int32_t>(nodes_.size());
  if (path.empty()) {
    if (root_ >= 0) throw ArgumentError("root slot is occupied");
    nodes_.push_back({ciphertext});
    root_ = index;
  } else {
    const auto parent = find(path.substr(0, path.size() - 1));
    if (!parent) throw ArgumentError("parent of attach slot does not exist");
    Node& p = nodes_[*parent];
    std::int32_t& slot = path.back() == '0' ? p.left : p.right;
    if (slot >= 0) throw ArgumentError("attach slot is occupied");
    slot = index;
    nodes_.push_back({ciphertext});
  }
  table_.insert(ciphertext, ordertext);
  return ordertext;
}

Remap OpeTree::attach_rebalanced(std::string_view path, const std::string& ciphertext) {
  if (!fits(nodes_.size() + 1)) {
    throw DepthExceeded("tree is full at width " + std::to_string(width_));
  }
  if (path.empty()) {
    attach(path, ciphertext);
    return {};
  }
  const auto parent = find(path.substr(0, path.size() - 1));
  if (!parent) throw ArgumentError("parent of attach slot does not exist");
  const auto index = static_cast<std::int32_t>(nodes_.size());
  std::int32_t& slot = path.back() == '0' ? nodes_[*parent].left : nodes_[*parent].right;
  if (slot >= 0) throw ArgumentError("attach slot is occupied");
  slot = index;
  nodes_.push_back({ciphertext});
  return rebalance();
}

std::vector<std::string> OpeTree::in_order() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  std::vector<std::int32_t> stack;
  std::int32_t cur = root_;
  while (cur >= 0 || !stack.empty()) {
    while (cur >= 0) {
      stack.push_back(cur);
      cur = nodes_[static_cast<std::size_t>(cur)].left;
    }
    cur = stack.back();
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(cur)];
    out.push_back(n.ciphertext);
    cur = n.right;
  }
  return out;
}

std::size_t OpeTree::height() const {
  std::size_t best = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack;
  if (root_ >= 0) stack.emplace_back(root_, 0);
  while (!stack.empty()) {
    auto [cur, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    const Node& n = nodes_[static_cast<std::size_t>(cur)];
    if (n.left >= 0) stack.emplace_back(n.left, depth + 1);
    if (n.right >= 0) stack.emplace_back(n.right, depth + 1);
  }
  return best;
}

bool OpeTree::fits(std::size_t count) const {
  // A minimum-height tree of `count` nodes has height floor(log2(count)).
  if (width_ - 1 >= 63) return true;
  return count <= (std::size_t{1} << width_) - 1;
}

std::int32_t OpeTree::build_balanced(const std::vector<std::string>& sorted, std::size_t lo,
                                     std::size_t hi, std::string& path) {
  if (lo >= hi) return -1;
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({sorted[mid]});
  table_.insert(sorted[mid], encode_path(path, width_));

  path.push_back('0');
  const std::int32_t left = build_balanced(sorted, lo, mid, path);
  path.back() = '1';
  const std::int32_t right = build_balanced(sorted, mid + 1, hi, path);
  path.pop_back();

  Node& n = nodes_[static_cast<std::size_t>(index)];
  n.left = left;
  n.right = right;
  return index;
}

Remap OpeTree::rebalance() {
  const std::vector<std::string> sorted = in_order();
  if (!fits(sorted.size())) {
    throw DepthExceeded("tree of " + std::to_string(sorted.size()) +
                        " nodes cannot be encoded at width " + std::to_string(width_));
  }
  const OpeTable old = std::move(table_);
  table_ = OpeTable{};
  nodes_.clear();
  nodes_.reserve(sorted.size());
  std::string path;
  root_ = build_balanced(sorted, 0, sorted.size(), path);

  Remap remap;
  for (const auto& [ciphertext, ordertext] : old.entries()) {
    remap.emplace(ordertext, table_.lookup(ciphertext));
  }
  return remap;
}

void OpeTree::save(const std::filesystem::path& file) const {
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot open " + tmp.string() + " for writing");
    out << "#opetree v1 " << width_ << '\n';
    for (const auto& [ordertext, ciphertext] : table_.by_ordertext()) {
      out << ciphertext << '\t' << ordertext.bits() << '\n';
    }
    if (!out.flush()) throw StoreError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, file);
}

OpeTree OpeTree::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LoadError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("#opetree v1 ", 0) != 0) {
    throw LoadError(file.string() + ":1: missing '#opetree v1 <width>' header");
  }
  std::size_t width = 0;
  try {
    width = std::stoul(line.substr(12));
  } catch (const std::exception&) {
    throw LoadError(file.string() + ":1: bad width");
  }
  OpeTree tree(width);

  std::vector<std::pair<std::string, std::string>> entries;  // path, ciphertext
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw LoadError(file.string() + ":" + std::to_string(lineno) + ": expected 2 fields");
    }
    try {
      const auto ordertext = OrderText::parse(std::string_view(line).substr(tab + 1), width);
      entries.emplace_back(ordertext.path(), line.substr(0, tab));
    } catch (const FormatError& e) {
      throw LoadError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  for (const auto& [path, ciphertext] : entries) {
    try {
      tree.attach(path, ciphertext);
    } catch (const Error& e) {
      throw LoadError(file.string() + ": inconsistent tree at path '" + path + "': " + e.what());
    }
  }
  return tree;
}

// ---------------------------------------------------------------------------
// OpeServer

OpeServer::OpeServer(std::size_t width, std::optional<std::string> key_check)
    : width_(width), key_check_(std::move(key_check)), tree_(width) {}

OpeServer::OpeServer(OpeTree tree, std::optional<std::string> key_check)
    : width_(tree.width()), key_check_(std::move(key_check)), tree_(std::move(tree)) {}

std::size_t OpeServer::size() const {
  std::shared_lock lock(mutex_);
  return tree_.size();
}

std::size_t OpeServer::height() const {
  std::shared_lock lock(mutex_);
  return tree_.height();
}

OrderText OpeServer::lookup(const std::string& ciphertext) const {
  std::shared_lock lock(mutex_);
  return tree_.table().lookup(ciphertext);
}

std::vector<std::string> OpeServer::range(const OrderText& lo, const OrderText& hi) const {
  std::shared_lock lock(mutex_);
  return tree_.table().range(lo, hi);
}

std::vector<std::string> OpeServer::in_order() const {
  std::shared_lock lock(mutex_);
  return tree_.in_order();
}

OpeTable OpeServer::table() const {
  std::shared_lock lock(mutex_);
  return tree_.table();
}

Remap OpeServer::rebalance() {
  std::unique_lock lock(mutex_);
  ++version_;
  return tree_.rebalance();
}

void OpeServer::save(const std::filesystem::path& file) const {
  std::shared_lock lock(mutex_);
  tree_.save(file);
}

// ---------------------------------------------------------------------------
// ServerSession

namespace {

void require_arity(const wire::Frame& frame, std::size_t n) {
  if (frame.fields.size() != n) {
    throw ProtocolError(frame.verb + " takes " + std::to_string(n) + " field(s)");
  }
}

std::vector<std::string> remap_frames(const Remap& remap) {
  std::vector<std::string> out;
  out.reserve(remap.size() + 2);
  out.push_back(wire::serialize(wire::kRemapBegin));
  for (const auto& [from, to] : remap) {
    out.push_back(wire::serialize(wire::kRemap, {from.bits(), to.bits()}));
  }
  out.push_back(wire::serialize(wire::kRemapEnd));
  return out;
}

std::string error_frame(std::string_view code, std::string_view message) {
  std::string clean(message);
  std::replace_if(clean.begin(), clean.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return wire::serialize(wire::kErr, {code, clean});
}

}  // namespace

std::vector<std::string> ServerSession::fatal(std::string_view code, std::string_view message) {
  closed_ = true;
  inserting_ = false;
  return {error_frame(code, message)};
}

std::vector<std::string> ServerSession::handle(std::string_view line) {
  if (closed_) return {error_frame(wire::kErrProtocol, "session is closed")};
  try {
    return dispatch(line);
  } catch (const ProtocolError& e) {
    return fatal(wire::kErrMalformed, e.what());
  } catch (const FormatError& e) {
    return fatal(wire::kErrMalformed, e.what());
  }
}

std::vector<std::string> ServerSession::dispatch(std::string_view line) {
  const wire::Frame frame = wire::parse(line);
  const std::string& verb = frame.verb;
  OpeTree& tree = server_.tree_;

  if (verb == wire::kHello) {
    if (frame.fields.empty() || frame.fields.size() > 2) {
      throw ProtocolError("HELLO takes a version and an optional key-check token");
    }
    if (greeted_) return fatal(wire::kErrProtocol, "duplicate HELLO");
    if (frame.fields[0] != wire::kProtocolVersion) {
      return fatal(wire::kErrVersion, "unsupported protocol version " + frame.fields[0]);
    }
    if (server_.key_check_ &&
        (frame.fields.size() < 2 || frame.fields[1] != *server_.key_check_)) {
      return fatal(wire::kErrAuth, "key-check token rejected");
    }
    greeted_ = true;
    // The root encoding tells the client the ordertext width.
    return {wire::serialize(wire::kOk, {encode_path("", server_.width_).bits()})};
  }
  if (!greeted_) return fatal(wire::kErrProtocol, "expected HELLO");

  auto node_or_empty = [&](std::string_view path) {
    const auto at = tree.find(path);
    if (!at) return wire::serialize(wire::kEmpty);
    return wire::serialize(wire::kNode, {tree.node(*at).ciphertext});
  };

  if (verb == wire::kInsertBegin) {
    require_arity(frame, 0);
    if (inserting_) return fatal(wire::kErrProtocol, "an insertion is already in flight");
    std::shared_lock lock(server_.mutex_);
    inserting_ = true;
    path_.clear();
    version_ = server_.version_;
    return {node_or_empty(path_)};
  }

  if (verb == wire::kDir) {
    require_arity(frame, 1);
    const std::string& dir = frame.fields[0];
    if (dir != "0" && dir != "1") throw ProtocolError("DIR takes 0 or 1");
    if (!inserting_) return fatal(wire::kErrProtocol, "DIR outside an insertion");
    std::shared_lock lock(server_.mutex_);
    if (version_ != server_.version_) {
      inserting_ = false;
      return {error_frame(wire::kErrConflict, "tree changed during descent; retry")};
    }
    if (!tree.find(path_)) return fatal(wire::kErrProtocol, "cannot descend below an empty slot");
    path_ += dir;
    return {node_or_empty(path_)};
  }

  if (verb == wire::kPut) {
    require_arity(frame, 1);
    const std::string& ciphertext = frame.fields[0];
    if (ciphertext.empty()) throw ProtocolError("PUT needs a ciphertext");
    base64::decode(ciphertext);
    if (!inserting_) return fatal(wire::kErrProtocol, "PUT outside an insertion");
    std::unique_lock lock(server_.mutex_);
    if (version_ != server_.version_) {
      inserting_ = false;
      return {error_frame(wire::kErrConflict, "tree changed during descent; retry")};
    }
    if (const auto at = tree.find(path_)) {
      if (tree.node(*at).ciphertext != ciphertext) {
        return fatal(wire::kErrProtocol, "PUT at an occupied node with a different ciphertext");
      }
      inserting_ = false;
      return {wire::serialize(wire::kOk, {tree.table().lookup(ciphertext).bits()})};
    }
    inserting_ = false;
    if (tree.table().contains(ciphertext)) {
      return {wire::serialize(wire::kOk, {tree.table().lookup(ciphertext).bits()})};
    }
    if (path_.size() > server_.width_ - 1) {
      if (!tree.fits(tree.size() + 1)) {
        return {error_frame(wire::kErrCapacity, "tree is full at this ordertext width")};
      }
      ++server_.version_;
      auto out = remap_frames(tree.attach_rebalanced(path_, ciphertext));
      out.push_back(wire::serialize(wire::kOk, {tree.table().lookup(ciphertext).bits()}));
      return out;
    }
    const OrderText ordertext = tree.attach(path_, ciphertext);
    ++server_.version_;
    return {wire::serialize(wire::kOk, {ordertext.bits()})};
  }

  if (verb == wire::kLookup) {
    require_arity(frame, 1);
    std::shared_lock lock(server_.mutex_);
    if (!tree.table().contains(frame.fields[0])) {
      return {error_frame(wire::kErrNotFound, "ciphertext not in OPE table")};
    }
    return {wire::serialize(wire::kFound, {tree.table().lookup(frame.fields[0]).bits()})};
  }

  if (verb == wire::kRange) {
    require_arity(frame, 2);
    const auto lo = OrderText::parse(frame.fields[0], server_.width_);
    const auto hi = OrderText::parse(frame.fields[1], server_.width_);
    if (hi < lo) return {error_frame(wire::kErrArgument, "range lower bound exceeds upper bound")};
    std::shared_lock lock(server_.mutex_);
    std::vector<std::string> out;
    for (auto& ciphertext : tree.table().range(lo, hi)) {
      out.push_back(wire::serialize(wire::kRangeItem, {ciphertext}));
    }
    out.push_back(wire::serialize(wire::kRangeEnd));
    return out;
  }

  if (verb == wire::kRebalance) {
    require_arity(frame, 0);
    if (inserting_) return fatal(wire::kErrProtocol, "REBALANCE during an insertion");
    std::unique_lock lock(server_.mutex_);
    ++server_.version_;
    return remap_frames(tree.rebalance());
  }

  if (verb == wire::kBye) {
    require_arity(frame, 0);
    closed_ = true;
    inserting_ = false;
    return {};
  }

  throw ProtocolError("unknown verb " + verb);
}

}  // namespace maskstore
