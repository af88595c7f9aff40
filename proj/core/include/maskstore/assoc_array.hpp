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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maskstore/ordertext.hpp"

namespace maskstore {

/// (row, column, value); all three fields non-empty.
struct Triple {
  std::string row;
  std::string col;
  std::string val;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Canonical presence marker written by explode().
inline constexpr std::string_view kPresent = "1";

/// Sparse row -> column -> value map. Absence means zero; no entry ever
/// holds an empty value. Rows and columns iterate in byte order.
class AssociativeArray {
 public:
  using Row = std::map<std::string, std::string, std::less<>>;
  using Rows = std::map<std::string, Row, std::less<>>;

  AssociativeArray() = default;

  /// Builds from triples; a repeated (row, col) keeps the last value and is
  /// counted in `duplicates`. Throws SchemaError on an empty field.
  static AssociativeArray from_triples(std::span<const Triple> triples,
                                       std::size_t* duplicates = nullptr);

  std::size_t nnz() const { return nnz_; }
  bool empty() const { return nnz_ == 0; }
  const Rows& rows() const { return rows_; }

  std::vector<std::string> row_keys() const;
  std::vector<std::string> col_keys() const;

  /// Null when absent.
  const std::string* get(std::string_view row, std::string_view col) const;

  /// Sorted by (row, col).
  std::vector<Triple> triples() const;

  friend bool operator==(const AssociativeArray& a, const AssociativeArray& b) {
    return a.rows_ == b.rows_;
  }

 private:
  friend class ArrayBuilder;
  Rows rows_;
  std::size_t nnz_ = 0;
};

/// Incremental construction with the same validation as from_triples().
class ArrayBuilder {
 public:
  /// Returns false when (row, col) already existed (value overwritten).
  bool set(std::string row, std::string col, std::string val);
  /// Adds a whole row that is not present yet. Empty rows are dropped.
  /// Throws SchemaError on an empty field or a row already present.
  void add_row(std::string row, AssociativeArray::Row cols);
  AssociativeArray build() &&;

 private:
  AssociativeArray array_;
};

/// (c, r, v) for every (r, c, v).
AssociativeArray transpose(const AssociativeArray& a);

/// Structural product: C(r, c) = |{k : A(r, k) and B(k, c) present}| as a
/// decimal string. Stored values never take part, so they may be masktexts.
AssociativeArray multiply(const AssociativeArray& a, const AssociativeArray& b);

/// Restriction of `a` to the given columns.
AssociativeArray select_cols(const AssociativeArray& a, const std::set<std::string, std::less<>>& cols);

/// Keeps entries whose decimal integer value is strictly greater than `t`.
/// Throws ValueError naming the first entry that does not parse.
AssociativeArray threshold(const AssociativeArray& a, std::int64_t t);

/// OPE-valued variant: keeps entries whose ordertext value sorts strictly
/// after `t`. Throws ValueError on a value that is not an ordertext of t's width.
AssociativeArray threshold(const AssociativeArray& a, const OrderText& t);

/// Parses a decimal count. Throws ValueError.
std::int64_t parse_count(std::string_view text);

// ---------------------------------------------------------------------------
// Exploded schema

/// One dense record: ordered (field, value) pairs.
using Record = std::vector<std::pair<std::string, std::string>>;

struct ExplodeResult {
  AssociativeArray array;
  /// (row, col) collisions resolved last-write-wins.
  std::size_t duplicates = 0;
};

/// Each non-key field f with value v becomes column "f|v" with value "1",
/// in the row named by the record's `row_key` field. Throws SchemaError when
/// `records` is empty or a record lacks the row key.
ExplodeResult explode(std::span<const Record> records, std::string_view row_key);

/// Same, from (id, field, value) tuples.
ExplodeResult explode(std::span<const Triple> id_field_value);

/// Inverse of explode(): groups each row's columns by the prefix before the
/// first '|' and rebuilds records with `row_key` first, fields in column order.
std::vector<Record> collapse(const AssociativeArray& a, std::string_view row_key);

}  // namespace maskstore
