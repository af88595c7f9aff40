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


#include "maskstore/ope_client.hpp"

#include <algorithm>
#include <deque>

#include "maskstore/errors.hpp"
#include "maskstore/transport.hpp"
#include "maskstore/wire.hpp"

namespace maskstore {
namespace {

constexpr int kMaxAttempts = 64;

}  // namespace

OpeClient::OpeClient(Transport& transport, KeyMaterial key,
                     std::optional<std::string> key_check_token)
    : transport_(transport), key_(std::move(key)) {
  if (key_check_token) {
    transport_.send(wire::serialize(wire::kHello, {wire::kProtocolVersion, *key_check_token}));
  } else {
    transport_.send(wire::serialize(wire::kHello, {wire::kProtocolVersion}));
  }
  const std::string reply = transport_.receive();
  const auto frame = wire::parse(reply);
  if (frame.verb != wire::kOk || frame.fields.size() != 1) raise(reply);
  width_ = frame.fields[0].size();
  open_ = true;
}

OpeClient::~OpeClient() {
  try {
    close();
  } catch (...) {
  }
}

void OpeClient::close() {
  if (!open_) return;
  open_ = false;
  transport_.send(wire::serialize(wire::kBye));
}

void OpeClient::raise(const std::string& line) {
  const auto frame = wire::parse(line);
  if (frame.verb != wire::kErr) throw ProtocolError("unexpected frame '" + frame.verb + "'");
  const std::string code = frame.fields.empty() ? "" : frame.fields[0];
  const std::string message =
      "OPE server: " + code + (frame.fields.size() > 1 ? " " + frame.fields[1] : "");
  if (code == wire::kErrNotFound) throw NotFound(message);
  if (code == wire::kErrArgument) throw ArgumentError(message);
  if (code == wire::kErrCapacity) throw DepthExceeded(message);
  throw ProtocolError(message);
}

std::string OpeClient::expect(std::string_view verb) {
  std::string line = transport_.receive();
  if (wire::parse(line).verb != verb) raise(line);
  return line;
}

std::string OpeClient::decrypt(const std::string& ciphertext) {
  if (auto it = plaintext_cache_.find(ciphertext); it != plaintext_cache_.end()) {
    return it->second;
  }
  std::string plaintext = unmask_det(Masktext{MaskMode::DET, ciphertext}, key_);
  plaintext_cache_.emplace(ciphertext, plaintext);
  return plaintext;
}

Remap OpeClient::read_remap_body() {
  Remap step;
  while (true) {
    const std::string line = transport_.receive();
    const auto frame = wire::parse(line);
    if (frame.verb == wire::kRemapEnd) return step;
    if (frame.verb != wire::kRemap || frame.fields.size() != 2) raise(line);
    step.emplace(OrderText::parse(frame.fields[0], width_),
                 OrderText::parse(frame.fields[1], width_));
  }
}

void OpeClient::fold_remap(const Remap& step) {
  if (pending_.empty()) {
    pending_ = step;
    return;
  }
  for (auto& [original, current] : pending_) {
    if (const auto it = step.find(current); it != step.end()) current = it->second;
  }
}

Remap OpeClient::take_remap() { return std::exchange(pending_, {}); }

OrderText OpeClient::insert(std::string_view plaintext) {
  const std::string ciphertext = mask_det(plaintext, key_).payload;
  plaintext_cache_.try_emplace(ciphertext, plaintext);

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    transport_.send(wire::serialize(wire::kInsertBegin));
    bool conflict = false;
    // Descent: one NODE/EMPTY per step until we PUT.
    while (true) {
      const std::string line = transport_.receive();
      const auto frame = wire::parse(line);
      if (frame.verb == wire::kNode && frame.fields.size() == 1) {
        const std::string& node_ciphertext = frame.fields[0];
        if (node_ciphertext == ciphertext) {
          transport_.send(wire::serialize(wire::kPut, {ciphertext}));
          break;
        }
        const bool less = plaintext < decrypt(node_ciphertext);
        transport_.send(wire::serialize(wire::kDir, {less ? "0" : "1"}));
      } else if (frame.verb == wire::kEmpty) {
        transport_.send(wire::serialize(wire::kPut, {ciphertext}));
        break;
      } else if (frame.verb == wire::kErr && frame.fields.size() >= 1 &&
                 frame.fields[0] == wire::kErrConflict) {
        conflict = true;
        break;
      } else {
        raise(line);
      }
    }
    if (conflict) continue;

    std::string line = transport_.receive();
    auto frame = wire::parse(line);
    if (frame.verb == wire::kRemapBegin) {
      fold_remap(read_remap_body());
      line = transport_.receive();
      frame = wire::parse(line);
    }
    if (frame.verb == wire::kOk && frame.fields.size() == 1) {
      return OrderText::parse(frame.fields[0], width_);
    }
    if (frame.verb == wire::kErr && !frame.fields.empty() && frame.fields[0] == wire::kErrConflict) {
      continue;
    }
    raise(line);
  }
  throw ProtocolError("insertion kept conflicting with concurrent writers");
}

std::vector<OrderText> OpeClient::insert_batch(std::span<const std::string> plaintexts) {
  std::vector<std::string> distinct(plaintexts.begin(), plaintexts.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  // Median-first (breadth-first over halves) insertion order.
  std::deque<std::pair<std::size_t, std::size_t>> spans;
  if (!distinct.empty()) spans.emplace_back(0, distinct.size());
  while (!spans.empty()) {
    const auto [lo, hi] = spans.front();
    spans.pop_front();
    const std::size_t mid = lo + (hi - lo) / 2;
    insert(distinct[mid]);
    if (lo < mid) spans.emplace_back(lo, mid);
    if (mid + 1 < hi) spans.emplace_back(mid + 1, hi);
  }

  std::vector<OrderText> out;
  out.reserve(plaintexts.size());
  std::unordered_map<std::string, OrderText> resolved;
  for (const auto& p : plaintexts) {
    auto it = resolved.find(p);
    if (it == resolved.end()) {
      it = resolved.emplace(p, lookup(mask_det(p, key_).payload)).first;
    }
    out.push_back(it->second);
  }
  return out;
}

OrderText OpeClient::lookup(const std::string& ciphertext) {
  transport_.send(wire::serialize(wire::kLookup, {ciphertext}));
  const std::string line = expect(wire::kFound);
  return OrderText::parse(wire::parse(line).fields.at(0), width_);
}

std::optional<OrderText> OpeClient::find(std::string_view plaintext) {
  try {
    return lookup(mask_det(plaintext, key_).payload);
  } catch (const NotFound&) {
    return std::nullopt;
  }
}

std::vector<std::string> OpeClient::range(const OrderText& lo, const OrderText& hi) {
  transport_.send(wire::serialize(wire::kRange, {lo.bits(), hi.bits()}));
  std::vector<std::string> out;
  while (true) {
    const std::string line = transport_.receive();
    const auto frame = wire::parse(line);
    if (frame.verb == wire::kRangeEnd) return out;
    if (frame.verb != wire::kRangeItem || frame.fields.size() != 1) raise(line);
    out.push_back(frame.fields[0]);
  }
}

std::string OpeClient::plaintext_at(const OrderText& ordertext) {
  const auto items = range(ordertext, ordertext);
  if (items.empty()) throw NotFound("no ciphertext at ordertext " + ordertext.bits());
  return decrypt(items.front());
}

Remap OpeClient::rebalance() {
  transport_.send(wire::serialize(wire::kRebalance));
  expect(wire::kRemapBegin);
  Remap step = read_remap_body();
  fold_remap(step);
  return step;
}

}  // namespace maskstore
