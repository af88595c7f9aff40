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

#include <filesystem>
#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maskstore/assoc_array.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/ordertext.hpp"

namespace maskstore {

/// Val is accepted by apply_remap only.
enum class Dimension { Row, Col, Val };

/// Query primitives an untrusted backend must offer. TripleStore is the
/// embedded implementation; a remote sorted-key store could sit behind the
/// same surface.
class TripleSource {
 public:
  virtual ~TripleSource() = default;

  virtual std::size_t size() const = 0;
  /// Sorted by (row, col).
  virtual std::vector<Triple> scan_all() const = 0;
  /// Exact row key; column-sorted.
  virtual std::vector<Triple> scan_row(std::string_view row) const = 0;
  /// Exact column key; row-sorted.
  virtual std::vector<Triple> scan_col(std::string_view col) const = 0;
  /// Keys in [lo, hi] along `dimension`, byte order. Throws ArgumentError if lo > hi.
  virtual std::vector<Triple> range_scan(Dimension dimension, const OrderText& lo,
                                         const OrderText& hi) const = 0;
};

/// Sorted triple store with a transpose index. Readers share a lock and copy
/// results out, so every scan is a consistent snapshot; ingest and
/// apply_remap take the lock exclusively.
class TripleStore final : public TripleSource {
 public:
  explicit TripleStore(MaskSpec spec = {}) : spec_(spec) {}
  TripleStore(const TripleStore& other);
  TripleStore& operator=(const TripleStore& other);

  const MaskSpec& spec() const { return spec_; }

  /// Inserts into both indexes; identical triples are no-ops. Returns the
  /// number of triples processed. Throws FormatError (nothing inserted) when
  /// a field holds TAB or LF, or is empty.
  std::size_t ingest(std::span<const Triple> triples);
  std::size_t ingest(const MaskedArray& masked);

  std::size_t size() const override;
  std::vector<Triple> scan_all() const override;
  std::vector<Triple> scan_row(std::string_view row) const override;
  std::vector<Triple> scan_col(std::string_view col) const override;
  std::vector<Triple> range_scan(Dimension dimension, const OrderText& lo,
                                 const OrderText& hi) const override;

  /// Rewrites every key along `dimension` through `remap`, atomically. Throws
  /// RemapError, leaving the store untouched, when a stored key is missing
  /// from the remap. Returns the number of triples rewritten.
  std::size_t apply_remap(Dimension dimension, const Remap& remap);

  AssociativeArray to_array() const;

  /// Writes "#cmdstore v1 <spec>" then the sorted TSV body, via a temporary
  /// file and rename. Throws StoreError.
  void persist(const std::filesystem::path& file) const;
  /// Throws LoadError naming the offending line. An empty file is an empty store.
  static TripleStore load(const std::filesystem::path& file);

  /// Both indexes hold the same triple set.
  bool indexes_coherent() const;

 private:
  using Index = std::map<std::pair<std::string, std::string>, std::string, std::less<>>;

  mutable std::shared_mutex mutex_;
  MaskSpec spec_;
  Index main_;       // (row, col) -> val
  Index transpose_;  // (col, row) -> val
};

}  // namespace maskstore
