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


#include "maskstore/masked_array.hpp"

#include <set>
#include <unordered_map>

#include "maskstore/errors.hpp"
#include "maskstore/ope_client.hpp"

namespace maskstore {

MaskSpec MaskSpec::parse(std::string_view text) {
  MaskMode modes[3]{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = text.find(',', start);
    const bool last = i == 2;
    if (last != (comma == std::string_view::npos)) {
      throw ConfigError("mask spec must be ROW,COL,VAL, got '" + std::string(text) + "'");
    }
    modes[i] = parse_mask_mode(text.substr(start, last ? text.npos : comma - start));
    start = comma + 1;
  }
  return {modes[0], modes[1], modes[2]};
}

std::string MaskSpec::to_string() const {
  std::string out(maskstore::to_string(row));
  out.append(",").append(maskstore::to_string(col)).append(",").append(maskstore::to_string(val));
  return out;
}

namespace {

using Lookup = std::unordered_map<std::string, std::string>;

struct Dimension {
  const char* name;
  MaskMode mode;
  OpeClient* ope;
  std::vector<std::string> distinct;
  Lookup masked;
};

void require_session(const Dimension& d) {
  if (d.mode == MaskMode::OPE && d.ope == nullptr) {
    throw ConfigError(std::string(d.name) + " dimension is OPE but no OPE session is bound");
  }
}

void mask_direct(Dimension& d, const KeyMaterial& key) {
  for (const auto& p : d.distinct) {
    try {
      d.masked.emplace(p, mask(p, d.mode, key).payload);
    } catch (Error& e) {
      e.add_context(std::string(d.name) + " key '" + p + "'");
      throw;
    }
  }
}

// All OPE dimensions sharing a session go through one batch, so a rebalance
// during the batch cannot leave an earlier dimension holding stale ordertexts.
void mask_ope(std::vector<Dimension*> dims) {
  while (!dims.empty()) {
    OpeClient* client = dims.front()->ope;
    std::vector<std::string> batch;
    std::vector<Dimension*> group;
    for (auto it = dims.begin(); it != dims.end();) {
      if ((*it)->ope == client) {
        group.push_back(*it);
        batch.insert(batch.end(), (*it)->distinct.begin(), (*it)->distinct.end());
        it = dims.erase(it);
      } else {
        ++it;
      }
    }
    std::vector<OrderText> ordertexts;
    try {
      ordertexts = client->insert_batch(batch);
    } catch (Error& e) {
      e.add_context(std::string(group.front()->name) + " OPE batch");
      throw;
    }
    std::size_t i = 0;
    for (Dimension* d : group) {
      for (const auto& p : d->distinct) d->masked.emplace(p, ordertexts[i++].bits());
    }
  }
}

}  // namespace

std::vector<Triple> mask_triples(std::span<const Triple> triples, const MaskSpec& spec,
                                 const KeyMaterial& key, const OpeBindings& ope,
                                 const MaskOptions& options) {
  if (!options.allow_rnd_keys && (spec.row == MaskMode::RND || spec.col == MaskMode::RND)) {
    throw ConfigError("RND row/column keys support no queries; set allow_rnd_keys to force");
  }
  std::set<std::string_view> distinct[3];
  for (const auto& t : triples) {
    distinct[0].insert(t.row);
    distinct[1].insert(t.col);
    if (spec.val != MaskMode::RND) distinct[2].insert(t.val);
  }
  Dimension rows{"row", spec.row, ope.row, {distinct[0].begin(), distinct[0].end()}, {}};
  Dimension cols{"col", spec.col, ope.col, {distinct[1].begin(), distinct[1].end()}, {}};
  Dimension vals{"val", spec.val, ope.val, {distinct[2].begin(), distinct[2].end()}, {}};

  std::vector<Dimension*> ope_dims;
  for (Dimension* d : {&rows, &cols, &vals}) {
    require_session(*d);
    if (d->mode == MaskMode::OPE) {
      ope_dims.push_back(d);
    } else {
      mask_direct(*d, key);
    }
  }
  mask_ope(ope_dims);

  std::vector<Triple> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    std::string mv;
    if (spec.val == MaskMode::RND) {
      try {
        mv = mask_rnd(t.val, key).payload;  // fresh IV per entry
      } catch (Error& e) {
        e.add_context("val at (" + t.row + ", " + t.col + ")");
        throw;
      }
    } else {
      mv = vals.masked.at(t.val);
    }
    out.push_back({rows.masked.at(t.row), cols.masked.at(t.col), std::move(mv)});
  }
  return out;
}

MaskedArray mask_array(const AssociativeArray& a, const MaskSpec& spec, const KeyMaterial& key,
                       const OpeBindings& ope, const MaskOptions& options) {
  const auto masked = mask_triples(a.triples(), spec, key, ope, options);
  ArrayBuilder builder;
  for (const auto& t : masked) builder.set(t.row, t.col, t.val);
  return {std::move(builder).build(), spec};
}

namespace {

// Caching unmasker for the three dimensions of one array or scan.
class Unmasker {
 public:
  Unmasker(const MaskSpec& spec, const KeyMaterial& key, const OpeBindings& ope, ValuePolicy policy)
      : key_(key),
        rows_{"row", spec.row, ope.row, {}, {}},
        cols_{"col", spec.col, ope.col, {}, {}},
        vals_{"val", spec.val, ope.val, {}, {}},
        clear_values_(policy == ValuePolicy::CountsAsClear || spec.val == MaskMode::CLR) {
    require_session(rows_);
    require_session(cols_);
    if (!clear_values_) require_session(vals_);
  }

  const std::string& row(const std::string& payload) { return open(rows_, row_memo_, payload); }
  const std::string& col(const std::string& payload) { return open(cols_, col_memo_, payload); }
  const std::string& val(const std::string& payload) {
    return clear_values_ ? payload : open(vals_, val_memo_, payload);
  }

 private:
  // Scans arrive sorted, so the previous payload of a dimension often repeats.
  struct Memo {
    std::string_view payload;
    const std::string* plaintext = nullptr;
  };

  const std::string& open(Dimension& d, Memo& memo, const std::string& payload) {
    if (d.mode == MaskMode::CLR) return payload;
    if (memo.plaintext != nullptr && memo.payload == payload) return *memo.plaintext;
    auto it = d.masked.find(payload);
    if (it == d.masked.end()) {
      try {
        it = d.masked.emplace(payload, unmask(Masktext{d.mode, payload}, key_, d.ope)).first;
      } catch (Error& e) {
        e.add_context(std::string(d.name) + " masktext '" + payload + "'");
        throw;
      }
    }
    memo = {payload, &it->second};
    return it->second;
  }

  const KeyMaterial& key_;
  Dimension rows_;
  Dimension cols_;
  Dimension vals_;
  bool clear_values_;
  Memo row_memo_;
  Memo col_memo_;
  Memo val_memo_;
};

}  // namespace

std::vector<Triple> unmask_triples(std::span<const Triple> triples, const MaskSpec& spec,
                                   const KeyMaterial& key, const OpeBindings& ope,
                                   ValuePolicy policy) {
  Unmasker unmasker(spec, key, ope, policy);
  std::vector<Triple> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    out.push_back({unmasker.row(t.row), unmasker.col(t.col), unmasker.val(t.val)});
  }
  return out;
}

AssociativeArray unmask_array(const MaskedArray& m, const KeyMaterial& key, const OpeBindings& ope,
                              ValuePolicy policy, std::size_t* warnings) {
  const MaskSpec& spec = m.spec;
  if (policy == ValuePolicy::CountsAsClear && spec.val != MaskMode::CLR && warnings != nullptr) {
    ++*warnings;
  }
  Unmasker unmasker(spec, key, ope, policy);

  ArrayBuilder builder;
  for (const auto& [mr, row] : m.array.rows()) {
    const std::string& r = unmasker.row(mr);
    for (const auto& [mc, mv] : row) builder.set(r, unmasker.col(mc), unmasker.val(mv));
  }
  return std::move(builder).build();
}

}  // namespace maskstore
