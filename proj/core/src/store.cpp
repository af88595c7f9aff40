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


#include "maskstore/store.hpp"

#include <fstream>
#include <mutex>

#include "maskstore/errors.hpp"
#include "maskstore/triple_io.hpp"

namespace maskstore {
namespace {

constexpr std::string_view kHeaderPrefix = "#cmdstore v1 ";

// Scan all entries whose first key component equals `key`.
template <typename Fn>
void scan_prefix(const auto& index, std::string_view key, Fn&& fn) {
  for (auto it = index.lower_bound(std::pair<std::string, std::string>(key, ""));
       it != index.end() && it->first.first == key; ++it) {
    fn(it);
  }
}

}  // namespace

TripleStore::TripleStore(const TripleStore& other) {
  std::shared_lock lock(other.mutex_);
  spec_ = other.spec_;
  main_ = other.main_;
  transpose_ = other.transpose_;
}

TripleStore& TripleStore::operator=(const TripleStore& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  spec_ = other.spec_;
  main_ = other.main_;
  transpose_ = other.transpose_;
  return *this;
}

std::size_t TripleStore::ingest(std::span<const Triple> triples) {
  for (const auto& t : triples) {
    check_tsv_field(t.row);
    check_tsv_field(t.col);
    check_tsv_field(t.val);
    if (t.row.empty() || t.col.empty() || t.val.empty()) {
      throw FormatError("triple fields must be non-empty");
    }
  }
  std::unique_lock lock(mutex_);
  for (const auto& t : triples) {
    main_.insert_or_assign({t.row, t.col}, t.val);
    transpose_.insert_or_assign({t.col, t.row}, t.val);
  }
  return triples.size();
}

std::size_t TripleStore::ingest(const MaskedArray& masked) {
  const auto triples = masked.array.triples();
  return ingest(triples);
}

std::size_t TripleStore::size() const {
  std::shared_lock lock(mutex_);
  return main_.size();
}

std::vector<Triple> TripleStore::scan_all() const {
  std::shared_lock lock(mutex_);
  std::vector<Triple> out;
  out.reserve(main_.size());
  for (const auto& [k, v] : main_) out.push_back({k.first, k.second, v});
  return out;
}

std::vector<Triple> TripleStore::scan_row(std::string_view row) const {
  std::shared_lock lock(mutex_);
  std::vector<Triple> out;
  scan_prefix(main_, row, [&](auto it) {
    out.push_back({it->first.first, it->first.second, it->second});
  });
  return out;
}

std::vector<Triple> TripleStore::scan_col(std::string_view col) const {
  std::shared_lock lock(mutex_);
  std::vector<Triple> out;
  scan_prefix(transpose_, col, [&](auto it) {
    out.push_back({it->first.second, it->first.first, it->second});
  });
  return out;
}

std::vector<Triple> TripleStore::range_scan(Dimension dimension, const OrderText& lo,
                                            const OrderText& hi) const {
  if (dimension == Dimension::Val) throw ArgumentError("range scans run over rows or columns");
  if (hi < lo) throw ArgumentError("range lower bound exceeds upper bound");
  std::shared_lock lock(mutex_);
  const Index& index = dimension == Dimension::Row ? main_ : transpose_;
  std::vector<Triple> out;
  for (auto it = index.lower_bound(std::pair<std::string, std::string>(lo.bits(), ""));
       it != index.end() && it->first.first <= hi.bits(); ++it) {
    if (dimension == Dimension::Row) {
      out.push_back({it->first.first, it->first.second, it->second});
    } else {
      out.push_back({it->first.second, it->first.first, it->second});
    }
  }
  return out;
}

std::size_t TripleStore::apply_remap(Dimension dimension, const Remap& remap) {
  std::unique_lock lock(mutex_);
  std::map<std::string, std::string, std::less<>> by_bits;
  for (const auto& [from, to] : remap) by_bits.emplace(from.bits(), to.bits());

  auto rewrite = [&](const std::string& key) -> const std::string& {
    const auto it = by_bits.find(key);
    if (it == by_bits.end()) throw RemapError("stored key '" + key + "' is missing from the remap");
    return it->second;
  };

  // Build both indexes aside; swap only when every key mapped.
  Index main;
  Index transpose;
  for (const auto& [k, v] : main_) {
    std::string row = k.first;
    std::string col = k.second;
    std::string val = v;
    switch (dimension) {
      case Dimension::Row: row = rewrite(row); break;
      case Dimension::Col: col = rewrite(col); break;
      case Dimension::Val: val = rewrite(val); break;
    }
    main.emplace(std::pair{row, col}, val);
    transpose.emplace(std::pair{std::move(col), std::move(row)}, std::move(val));
  }
  if (main.size() != main_.size()) {
    throw RemapError("remap is not injective on stored keys");
  }
  main_.swap(main);
  transpose_.swap(transpose);
  return main_.size();
}

AssociativeArray TripleStore::to_array() const {
  std::shared_lock lock(mutex_);
  ArrayBuilder builder;
  for (const auto& [k, v] : main_) builder.set(k.first, k.second, v);
  return std::move(builder).build();
}

void TripleStore::persist(const std::filesystem::path& file) const {
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::shared_lock lock(mutex_);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot open " + tmp.string() + " for writing");
    out << kHeaderPrefix << spec_.to_string() << '\n';
    for (const auto& [k, v] : main_) out << k.first << '\t' << k.second << '\t' << v << '\n';
    if (!out.flush()) throw StoreError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw StoreError("cannot replace " + file.string() + ": " + ec.message());
}

TripleStore TripleStore::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LoadError("cannot open " + file.string());

  auto fail = [&](std::size_t lineno, const std::string& why) {
    return LoadError(file.string() + ":" + std::to_string(lineno) + ": " + why);
  };

  MaskSpec spec;
  std::vector<Triple> triples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.starts_with('#')) {
      if (!line.starts_with(kHeaderPrefix)) throw fail(lineno, "unrecognized header");
      try {
        spec = MaskSpec::parse(std::string_view(line).substr(kHeaderPrefix.size()));
      } catch (const ConfigError& e) {
        throw fail(lineno, e.what());
      }
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw fail(lineno, "expected 3 tab-separated fields");
    }
    Triple t{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
    if (t.row.empty() || t.col.empty() || t.val.empty()) throw fail(lineno, "empty field");
    triples.push_back(std::move(t));
  }
  TripleStore store(spec);
  store.ingest(triples);
  return store;
}

bool TripleStore::indexes_coherent() const {
  std::shared_lock lock(mutex_);
  if (main_.size() != transpose_.size()) return false;
  for (const auto& [k, v] : main_) {
    const auto it = transpose_.find(std::pair{k.second, k.first});
    if (it == transpose_.end() || it->second != v) return false;
  }
  return true;
}

}  // namespace maskstore
