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


#include "maskstore/kernels.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

#include "maskstore/errors.hpp"

namespace maskstore {
namespace {

using KeySet = std::set<std::string, std::less<>>;

void require_matchable_keys(const MaskSpec& spec) {
  if (spec.row == MaskMode::RND || spec.col == MaskMode::RND) {
    throw ConfigError("correlation needs matchable keys; RND rows or columns cannot be joined");
  }
}

std::vector<std::string> normalize(std::span<const std::string> selectors) {
  std::vector<std::string> out(selectors.begin(), selectors.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AssociativeArray correlate_block(const AssociativeArray& a, const KeySet& selectors) {
  return multiply(transpose(select_cols(a, selectors)), a);
}

}  // namespace

CorrelationResult correlate(const MaskedArray& a, std::span<const std::string> selectors,
                            const KernelOptions& options) {
  require_matchable_keys(a.spec);
  CorrelationResult result;
  result.selectors = normalize(selectors);
  result.source_spec = a.spec;

  const std::size_t threads =
      std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(result.selectors.size(), 1));
  if (threads == 1) {
    result.array = correlate_block(a.array, KeySet(result.selectors.begin(), result.selectors.end()));
    return result;
  }

  // Contiguous selector blocks; each block's rows are disjoint from the others.
  std::vector<AssociativeArray> partial(threads);
  std::vector<std::thread> workers;
  const std::size_t per = (result.selectors.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(t * per, result.selectors.size());
    const std::size_t hi = std::min(lo + per, result.selectors.size());
    workers.emplace_back([&, t, lo, hi] {
      partial[t] = correlate_block(
          a.array, KeySet(result.selectors.begin() + static_cast<std::ptrdiff_t>(lo),
                          result.selectors.begin() + static_cast<std::ptrdiff_t>(hi)));
    });
  }
  for (auto& w : workers) w.join();

  ArrayBuilder builder;
  for (const auto& block : partial) {
    for (const auto& [r, row] : block.rows()) {
      for (const auto& [c, v] : row) builder.set(r, c, v);
    }
  }
  result.array = std::move(builder).build();
  return result;
}

CorrelationResult correlate(const TripleSource& store, const MaskSpec& spec,
                            std::span<const std::string> selectors) {
  require_matchable_keys(spec);
  CorrelationResult result;
  result.selectors = normalize(selectors);
  result.source_spec = spec;

  ArrayBuilder builder;
  std::map<std::string, std::uint64_t> counts;
  for (const auto& selector : result.selectors) {
    counts.clear();
    for (const auto& hit : store.scan_col(selector)) {
      for (const auto& t : store.scan_row(hit.row)) ++counts[t.col];
    }
    for (const auto& [c, n] : counts) builder.set(selector, c, std::to_string(n));
  }
  result.array = std::move(builder).build();
  return result;
}

CorrelationResult threshold_masked(const CorrelationResult& c, std::int64_t t) {
  if (t < 0) throw ArgumentError("threshold must be non-negative");
  return {threshold(c.array, t), c.selectors, c.source_spec};
}

CorrelationResult authenticate_counts(const CorrelationResult& c, const KeyMaterial& key) {
  ArrayBuilder builder;
  for (const auto& [r, row] : c.array.rows()) {
    for (const auto& [col, v] : row) builder.set(r, col, mask_aut(v, key).payload);
  }
  return {std::move(builder).build(), c.selectors, c.source_spec};
}

CorrelationResult verify_counts(const CorrelationResult& tagged, const KeyMaterial& key) {
  ArrayBuilder builder;
  for (const auto& [r, row] : tagged.array.rows()) {
    for (const auto& [col, v] : row) {
      try {
        builder.set(r, col, unmask_aut(Masktext{MaskMode::AUT, v}, key));
      } catch (Error& e) {
        e.add_context("count at (" + r + ", " + col + ")");
        throw;
      }
    }
  }
  return {std::move(builder).build(), tagged.selectors, tagged.source_spec};
}

AssociativeArray unmask_result(const CorrelationResult& c, const MaskSpec& declared,
                               const KeyMaterial& key, const OpeBindings& ope,
                               std::size_t* warnings) {
  return unmask_array(MaskedArray{c.array, declared}, key, ope, ValuePolicy::CountsAsClear,
                      warnings);
}

}  // namespace maskstore
