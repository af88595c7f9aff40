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


#include "maskstore/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "maskstore/errors.hpp"

namespace maskstore {

std::string corpus_word(std::size_t rank, std::size_t vocabulary) {
  const std::size_t digits = std::to_string(vocabulary).size();
  std::string n = std::to_string(rank);
  return "word|w" + std::string(digits > n.size() ? digits - n.size() : 0, '0') + n;
}

AssociativeArray generate_corpus(const CorpusOptions& options) {
  if (options.entries == 0) throw ArgumentError("corpus needs at least one entry");
  if (options.min_words == 0 || options.min_words > options.max_words) {
    throw ArgumentError("corpus word bounds must satisfy 1 <= min <= max");
  }
  const std::size_t vocabulary =
      options.vocabulary != 0 ? options.vocabulary : std::max<std::size_t>(64, options.entries / 8);
  if (vocabulary < options.max_words) {
    throw ArgumentError("corpus vocabulary is smaller than the per-tweet word limit");
  }

  std::mt19937_64 rng(options.seed);
  std::vector<double> weights(vocabulary);
  for (std::size_t r = 0; r < vocabulary; ++r) {
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), options.zipf_exponent);
  }
  std::discrete_distribution<std::size_t> word(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> length(options.min_words, options.max_words);
  std::uniform_int_distribution<std::uint64_t> tweet_id(1, 999'999'999'999'999'999ULL);

  ArrayBuilder builder;
  std::set<std::string> used_ids;
  std::size_t remaining = options.entries;
  std::set<std::size_t> words;
  while (remaining > 0) {
    std::string id;
    do {
      id = std::to_string(tweet_id(rng));
      id.insert(0, 19 - id.size(), '0');
    } while (!used_ids.insert(id).second);

    const std::size_t n = std::min(length(rng), remaining);
    words.clear();
    while (words.size() < n) words.insert(word(rng));
    for (std::size_t w : words) builder.set(id, corpus_word(w + 1, vocabulary), std::string(kPresent));
    remaining -= n;
  }
  return std::move(builder).build();
}

}  // namespace maskstore
