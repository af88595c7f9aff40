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


#include <benchmark/benchmark.h>

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "maskstore/corpus.hpp"
#include "maskstore/kernels.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/masking.hpp"
#include "maskstore/ope_client.hpp"
#include "maskstore/ope_server.hpp"
#include "maskstore/store.hpp"
#include "maskstore/transport.hpp"

namespace {

using namespace maskstore;

const KeyMaterial& bench_key() {
  static const KeyMaterial key = [] {
    const std::array<std::uint8_t, kSaltSize> salt{1, 2, 3, 4, 5, 6, 7, 8};
    return derive_key("micro-benchmarks", salt);
  }();
  return key;
}

void BM_DeriveKey(benchmark::State& state) {
  const std::array<std::uint8_t, kSaltSize> salt{1, 2, 3, 4, 5, 6, 7, 8};
  for (auto _ : state) benchmark::DoNotOptimize(derive_key("password", salt));
}
BENCHMARK(BM_DeriveKey);

void BM_Mask(benchmark::State& state, MaskMode mode) {
  const std::string plaintext(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(mask(plaintext, mode, bench_key()));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Mask, rnd, MaskMode::RND)->Arg(16)->Arg(256);
BENCHMARK_CAPTURE(BM_Mask, det, MaskMode::DET)->Arg(16)->Arg(256);
BENCHMARK_CAPTURE(BM_Mask, aut, MaskMode::AUT)->Arg(16)->Arg(256);

void BM_UnmaskDet(benchmark::State& state) {
  const Masktext m = mask_det("word|w00042", bench_key());
  for (auto _ : state) benchmark::DoNotOptimize(unmask_det(m, bench_key()));
}
BENCHMARK(BM_UnmaskDet);

void BM_DetHash(benchmark::State& state, HashAlgorithm hash) {
  KeyMaterial key = bench_key();
  key.det_hash = hash;
  const std::string plaintext = "word|w00042 some tweet text";
  for (auto _ : state) benchmark::DoNotOptimize(mask_det(plaintext, key));
}
BENCHMARK_CAPTURE(BM_DetHash, sha1, HashAlgorithm::SHA1);
BENCHMARK_CAPTURE(BM_DetHash, sha256, HashAlgorithm::SHA256);

void BM_OpeInsertLoopback(benchmark::State& state) {
  std::size_t n = 0;
  for (auto _ : state) {
    state.PauseTiming();
    OpeServer server(32);
    LoopbackTransport transport(server);
    OpeClient client(transport, bench_key());
    std::vector<std::string> values;
    for (int i = 0; i < state.range(0); ++i) values.push_back("v" + std::to_string(i * 7919 % 1000003));
    state.ResumeTiming();
    for (const auto& v : values) benchmark::DoNotOptimize(client.insert(v));
    n += values.size();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_OpeInsertLoopback)->Arg(256)->Arg(2048);

struct CorpusFixture {
  AssociativeArray clear;
  MaskedArray det;
  std::string clear_selector;
  std::string det_selector;

  explicit CorpusFixture(std::size_t entries)
      : clear(generate_corpus({.entries = entries, .seed = 7})),
        det(mask_array(clear, MaskSpec::parse("DET,DET,DET"), bench_key())),
        clear_selector(corpus_word(1, std::max<std::size_t>(64, entries / 8))),
        det_selector(mask_det(clear_selector, bench_key()).payload) {}
};

const CorpusFixture& fixture(std::size_t entries) {
  static std::map<std::size_t, std::unique_ptr<CorpusFixture>> cache;
  auto& slot = cache[entries];
  if (!slot) slot = std::make_unique<CorpusFixture>(entries);
  return *slot;
}

void BM_CorrelateClear(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const MaskedArray clear{f.clear, MaskSpec{}};
  const std::vector<std::string> selectors{f.clear_selector};
  for (auto _ : state) benchmark::DoNotOptimize(correlate(clear, selectors));
}
BENCHMARK(BM_CorrelateClear)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CorrelateDet(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const std::vector<std::string> selectors{f.det_selector};
  for (auto _ : state) benchmark::DoNotOptimize(correlate(f.det, selectors));
}
BENCHMARK(BM_CorrelateDet)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_StoreScanColumn(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  TripleStore store(f.det.spec);
  store.ingest(f.det);
  for (auto _ : state) benchmark::DoNotOptimize(store.scan_col(f.det_selector));
}
BENCHMARK(BM_StoreScanColumn)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
