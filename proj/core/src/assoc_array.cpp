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


#include "maskstore/assoc_array.hpp"

#include <charconv>

#include "maskstore/errors.hpp"

namespace maskstore {

bool ArrayBuilder::set(std::string row, std::string col, std::string val) {
  if (row.empty() || col.empty() || val.empty()) {
    throw SchemaError("triple fields must be non-empty (row '" + row + "', col '" + col + "')");
  }
  auto& cols = array_.rows_[std::move(row)];
  auto [it, inserted] = cols.insert_or_assign(std::move(col), std::move(val));
  if (inserted) ++array_.nnz_;
  return inserted;
}

void ArrayBuilder::add_row(std::string row, AssociativeArray::Row cols) {
  if (cols.empty()) return;
  for (const auto& [c, v] : cols) {
    if (row.empty() || c.empty() || v.empty()) {
      throw SchemaError("triple fields must be non-empty (row '" + row + "', col '" + c + "')");
    }
  }
  const std::size_t n = cols.size();
  if (!array_.rows_.emplace(std::move(row), std::move(cols)).second) {
    throw SchemaError("row added twice");
  }
  array_.nnz_ += n;
}

AssociativeArray ArrayBuilder::build() && { return std::move(array_); }

AssociativeArray AssociativeArray::from_triples(std::span<const Triple> triples,
                                                std::size_t* duplicates) {
  ArrayBuilder builder;
  std::size_t dup = 0;
  for (const auto& t : triples) {
    if (!builder.set(t.row, t.col, t.val)) ++dup;
  }
  if (duplicates != nullptr) *duplicates = dup;
  return std::move(builder).build();
}

std::vector<std::string> AssociativeArray::row_keys() const {
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& [r, _] : rows_) out.push_back(r);
  return out;
}

std::vector<std::string> AssociativeArray::col_keys() const {
  std::set<std::string_view> cols;
  for (const auto& [_, row] : rows_) {
    for (const auto& [c, __] : row) cols.insert(c);
  }
  return {cols.begin(), cols.end()};
}

const std::string* AssociativeArray::get(std::string_view row, std::string_view col) const {
  const auto r = rows_.find(row);
  if (r == rows_.end()) return nullptr;
  const auto c = r->second.find(col);
  return c == r->second.end() ? nullptr : &c->second;
}

std::vector<Triple> AssociativeArray::triples() const {
  std::vector<Triple> out;
  out.reserve(nnz_);
  for (const auto& [r, row] : rows_) {
    for (const auto& [c, v] : row) out.push_back({r, c, v});
  }
  return out;
}

AssociativeArray transpose(const AssociativeArray& a) {
  ArrayBuilder builder;
  for (const auto& [r, row] : a.rows()) {
    for (const auto& [c, v] : row) builder.set(c, r, v);
  }
  return std::move(builder).build();
}

AssociativeArray multiply(const AssociativeArray& a, const AssociativeArray& b) {
  ArrayBuilder builder;
  std::map<std::string_view, std::uint64_t> counts;
  for (const auto& [r, row] : a.rows()) {
    counts.clear();
    for (const auto& [k, _] : row) {
      const auto inner = b.rows().find(k);
      if (inner == b.rows().end()) continue;
      for (const auto& [c, __] : inner->second) ++counts[c];
    }
    for (const auto& [c, n] : counts) builder.set(r, std::string(c), std::to_string(n));
  }
  return std::move(builder).build();
}

AssociativeArray select_cols(const AssociativeArray& a,
                             const std::set<std::string, std::less<>>& cols) {
  ArrayBuilder builder;
  if (cols.empty()) return std::move(builder).build();
  for (const auto& [r, row] : a.rows()) {
    // Iterate whichever side is smaller.
    if (cols.size() < row.size()) {
      for (const auto& c : cols) {
        if (const auto it = row.find(c); it != row.end()) builder.set(r, c, it->second);
      }
    } else {
      for (const auto& [c, v] : row) {
        if (cols.contains(c)) builder.set(r, c, v);
      }
    }
  }
  return std::move(builder).build();
}

std::int64_t parse_count(std::string_view text) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValueError("'" + std::string(text) + "' is not a decimal integer");
  }
  return value;
}

namespace {

// Row-at-a-time filter; input order is kept so every insertion is hinted.
template <typename Keep>
AssociativeArray filter_entries(const AssociativeArray& a, Keep&& keep) {
  ArrayBuilder builder;
  for (const auto& [r, row] : a.rows()) {
    AssociativeArray::Row kept;
    for (const auto& [c, v] : row) {
      if (keep(r, c, v)) kept.emplace_hint(kept.end(), c, v);
    }
    builder.add_row(r, std::move(kept));
  }
  return std::move(builder).build();
}

}  // namespace

AssociativeArray threshold(const AssociativeArray& a, std::int64_t t) {
  return filter_entries(a, [t](const std::string& r, const std::string& c, const std::string& v) {
    try {
      return parse_count(v) > t;
    } catch (ValueError& e) {
      e.add_context("entry (" + r + ", " + c + ")");
      throw;
    }
  });
}

AssociativeArray threshold(const AssociativeArray& a, const OrderText& t) {
  return filter_entries(a, [&t](const std::string& r, const std::string& c, const std::string& v) {
    if (v.size() != t.width() || v.find_first_not_of("01") != std::string::npos) {
      throw ValueError("entry (" + r + ", " + c + "): '" + v + "' is not an ordertext of width " +
                       std::to_string(t.width()));
    }
    return v > t.bits();
  });
}

ExplodeResult explode(std::span<const Record> records, std::string_view row_key) {
  if (records.empty()) throw SchemaError("no records to explode");
  ArrayBuilder builder;
  ExplodeResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Record& record = records[i];
    const std::string* row = nullptr;
    for (const auto& [field, value] : record) {
      if (field == row_key) {
        row = &value;
        break;
      }
    }
    if (row == nullptr) {
      throw SchemaError("record " + std::to_string(i) + " has no '" + std::string(row_key) +
                        "' field");
    }
    for (const auto& [field, value] : record) {
      if (field == row_key) continue;
      if (!builder.set(*row, field + "|" + value, std::string(kPresent))) ++result.duplicates;
    }
  }
  result.array = std::move(builder).build();
  return result;
}

ExplodeResult explode(std::span<const Triple> id_field_value) {
  if (id_field_value.empty()) throw SchemaError("no records to explode");
  ArrayBuilder builder;
  ExplodeResult result;
  for (const auto& t : id_field_value) {
    if (!builder.set(t.row, t.col + "|" + t.val, std::string(kPresent))) ++result.duplicates;
  }
  result.array = std::move(builder).build();
  return result;
}

std::vector<Record> collapse(const AssociativeArray& a, std::string_view row_key) {
  std::vector<Record> out;
  out.reserve(a.rows().size());
  for (const auto& [r, row] : a.rows()) {
    Record record{{std::string(row_key), r}};
    for (const auto& [c, _] : row) {
      const auto bar = c.find('|');
      if (bar == std::string::npos) {
        throw SchemaError("column '" + c + "' is not in field|value form");
      }
      record.emplace_back(c.substr(0, bar), c.substr(bar + 1));
    }
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace maskstore
