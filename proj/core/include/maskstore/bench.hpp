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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace maskstore {

struct BenchConfig {
  /// Corpus sizes in entries.
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  /// Masking levels; each mode X is run as "X,X,X".
  std::vector<std::string> modes{"CLR", "DET", "OPE"};
  std::uint64_t seed = 42;
  /// Timed repetitions per cell; the median is reported.
  int repetitions = 5;
  /// Each repetition loops the operation until at least this much time passed.
  double min_repetition_ms = 20.0;
  /// Pass/warn applies from this size up; smaller sizes are informational.
  std::size_t graded_from = 10000;
  double correlation_bound = 2.5;
  double query_bound = 2.5;
  double threshold_bound = 1.2;
  /// Selectors in the array fed to the threshold cell.
  std::size_t threshold_selectors = 32;
  /// Plaintexts per DET hash-delta repetition.
  std::size_t hash_samples = 20000;
};

struct BenchCell {
  std::size_t size = 0;
  std::string mode;
  std::string op;
  double median_ms = 0;
  /// median_ms over the CLR median for the same size and op; 0 when unknown.
  double ratio_vs_clr = 0;
  /// "pass", "warn", "info", "baseline" or "error".
  std::string status;
  std::string note;
};

struct BenchReport {
  std::vector<BenchCell> cells;
  /// Requested size -> nnz of the generated corpus.
  std::map<std::size_t, std::size_t> entries;
  /// DET masking time with SHA-256 IVs over SHA-1 IVs.
  double det_sha256_vs_sha1 = 0;
  /// Raw digest time, SHA-256 over SHA-1, on the same inputs.
  double digest_sha256_vs_sha1 = 0;
  double sha1_digests_per_second = 0;
  std::string cpu;
  std::string timestamp;
  unsigned hardware_threads = 0;

  /// Header plus one line per cell: size, mode, op, median_ms, ratio_vs_clr.
  void write_tsv(std::ostream& out) const;
  /// Human-readable table with pass/warn per cell and the hash delta.
  void write_summary(std::ostream& out) const;
  std::size_t count(std::string_view status) const;
};

/// Runs every (size, mode, op) cell. Failures inside a cell are recorded
/// with status "error" and never abort the run. Progress lines go to
/// `progress` when given.
BenchReport run_bench(const BenchConfig& config, std::ostream* progress = nullptr);

/// Median of the per-operation time (ms) over `repetitions` timed runs.
template <typename Fn>
double median_time_ms(Fn&& fn, int repetitions, double min_repetition_ms);

}  // namespace maskstore

#include "maskstore/detail/bench_timing.hpp"
