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
#include <span>
#include <string>
#include <vector>

#include "maskstore/assoc_array.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/store.hpp"

namespace maskstore {

/// Co-occurrence counts between selector columns (rows of the result) and
/// every column of the source (columns of the result). Keys stay masked;
/// values are positive decimal counts.
struct CorrelationResult {
  AssociativeArray array;
  /// Selector masktexts, sorted and de-duplicated.
  std::vector<std::string> selectors;
  /// Spec of the array the result was computed from.
  MaskSpec source_spec;
};

struct KernelOptions {
  /// Selector columns are split across this many threads. Output does not
  /// depend on the thread count.
  unsigned threads = 1;
};

/// transpose(select_cols(A, selectors)) * A over masktexts. Never unmasks.
/// Throws ConfigError for RND row or column keys. Selectors absent from A
/// yield an empty result.
CorrelationResult correlate(const MaskedArray& a, std::span<const std::string> selectors,
                            const KernelOptions& options = {});

/// The same product computed through store scans: one column scan per
/// selector, then one row scan per matching row.
CorrelationResult correlate(const TripleSource& store, const MaskSpec& spec,
                            std::span<const std::string> selectors);

/// Keeps counts strictly greater than `t`. Throws ArgumentError for t < 0.
CorrelationResult threshold_masked(const CorrelationResult& c, std::int64_t t);

/// Replaces each count with its AUT masktext so results carry integrity tags.
CorrelationResult authenticate_counts(const CorrelationResult& c, const KeyMaterial& key);
/// Verifies and strips AUT tags. Throws IntegrityError on a forged count.
CorrelationResult verify_counts(const CorrelationResult& tagged, const KeyMaterial& key);

/// Client-side unmasking of a result: rows under declared.row, columns under
/// declared.col. Both hold source column keys, so the usual declaration is
/// {col, col, *}. Values are clear counts whatever declared.val says; a
/// non-CLR value mode is counted in `warnings`.
AssociativeArray unmask_result(const CorrelationResult& c, const MaskSpec& declared,
                               const KeyMaterial& key, const OpeBindings& ope = {},
                               std::size_t* warnings = nullptr);

}  // namespace maskstore
