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

#include <cstddef>
#include <cstdint>

#include "maskstore/assoc_array.hpp"

namespace maskstore {

/// Synthetic tweet/word corpus in exploded form: rows are zero-padded
/// 19-digit tweet ids, columns are "word|w<rank>", values "1".
struct CorpusOptions {
  /// Exact number of entries in the result.
  std::size_t entries = 1000;
  std::uint64_t seed = 1;
  /// Word ranks follow a Zipf law with this exponent.
  double zipf_exponent = 1.07;
  /// 0 picks max(64, entries / 8).
  std::size_t vocabulary = 0;
  std::size_t min_words = 3;
  std::size_t max_words = 12;
};

/// Deterministic for a given options value. Throws ArgumentError when
/// entries is 0 or the word bounds are inconsistent.
AssociativeArray generate_corpus(const CorpusOptions& options);

/// Column key of the word with the given 1-based frequency rank.
std::string corpus_word(std::size_t rank, std::size_t vocabulary);

}  // namespace maskstore
