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


#include "maskstore/bench.hpp"

#include <time.h>

#include <array>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "maskstore/corpus.hpp"
#include "maskstore/errors.hpp"
#include "maskstore/kernels.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/ope_client.hpp"
#include "maskstore/ope_server.hpp"
#include "maskstore/store.hpp"
#include "maskstore/transport.hpp"

namespace maskstore {
namespace {

constexpr std::array<std::uint8_t, kSaltSize> kBenchSalt{0x62, 0x65, 0x6e, 0x63, 0x68, 0x73, 0x61, 0x6c};
// Results are stored here so the timed work cannot be optimized away.
volatile std::size_t g_sink = 0;

constexpr std::array<const char*, 4> kOps{"mask", "correlation", "query_unmask", "threshold"};

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("model name")) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(line.find_first_not_of(' ', colon + 1));
    }
  }
  return "unknown";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Smallest width >= 16 whose balanced tree holds `count` keys with room to grow.
std::size_t ope_width_for(std::size_t count) {
  std::size_t width = kDefaultOrdertextWidth;
  while (width < 62 && (std::size_t{1} << (width - 1)) < count * 2) ++width;
  return width;
}

// One OPE tree per dimension, reached over loopback.
struct OpeRig {
  struct Lane {
    std::unique_ptr<OpeServer> server;
    std::unique_ptr<LoopbackTransport> transport;
    std::unique_ptr<OpeClient> client;
  };
  std::array<Lane, 3> lanes;

  OpeRig(const KeyMaterial& key, std::size_t rows, std::size_t cols) {
    const std::size_t counts[3] = {rows, cols, 1};
    for (std::size_t i = 0; i < 3; ++i) {
      lanes[i].server = std::make_unique<OpeServer>(ope_width_for(counts[i]));
      lanes[i].transport = std::make_unique<LoopbackTransport>(*lanes[i].server);
      lanes[i].client = std::make_unique<OpeClient>(*lanes[i].transport, key);
    }
  }

  OpeBindings bindings() const {
    return {lanes[0].client.get(), lanes[1].client.get(), lanes[2].client.get()};
  }
};

std::string mask_selector(const std::string& selector, MaskMode mode, const KeyMaterial& key,
                          OpeClient* ope) {
  if (mode == MaskMode::OPE) {
    const auto found = ope->find(selector);
    if (!found) throw NotFound("selector was never inserted into the column tree");
    return found->bits();
  }
  return mask(selector, mode, key).payload;
}

struct Workload {
  const AssociativeArray* corpus;
  std::string top;
  std::vector<std::string> top_k;
};

Workload make_workload(const AssociativeArray& corpus, std::size_t k) {
  std::map<std::string, std::size_t> freq;
  for (const auto& [_, row] : corpus.rows()) {
    for (const auto& [c, __] : row) ++freq[c];
  }
  std::vector<std::pair<std::size_t, std::string>> ranked;
  ranked.reserve(freq.size());
  for (auto& [c, n] : freq) ranked.emplace_back(n, c);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  Workload w{&corpus, ranked.front().second, {}};
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) w.top_k.push_back(ranked[i].second);
  return w;
}

// Times every op for one (size, mode); returns op -> median ms.
std::map<std::string, double> run_mode(const Workload& w, MaskMode mode, const KeyMaterial& key,
                                       const BenchConfig& config) {
  const MaskSpec spec{mode, mode, mode};
  std::unique_ptr<OpeRig> rig;
  if (mode == MaskMode::OPE) {
    rig = std::make_unique<OpeRig>(key, w.corpus->row_keys().size(), w.corpus->col_keys().size());
  }
  const OpeBindings ope = rig ? rig->bindings() : OpeBindings{};
  std::map<std::string, double> times;
  std::size_t sink = 0;

  const auto mask_start = std::chrono::steady_clock::now();
  MaskedArray masked = mode == MaskMode::CLR
                           ? MaskedArray{*w.corpus, spec}
                           : mask_array(*w.corpus, spec, key, ope, MaskOptions{true});
  times["mask"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - mask_start).count();

  const std::vector<std::string> selector{mask_selector(w.top, mode, key, ope.col)};
  std::vector<std::string> selectors;
  for (const auto& s : w.top_k) selectors.push_back(mask_selector(s, mode, key, ope.col));

  times["correlation"] = median_time_ms(
      [&] { sink += correlate(masked, selector).array.nnz(); }, config.repetitions,
      config.min_repetition_ms);

  TripleStore store(spec);
  store.ingest(masked);
  if (mode == MaskMode::CLR) {
    times["query_unmask"] = median_time_ms([&] { sink += store.scan_all().size(); },
                                           config.repetitions, config.min_repetition_ms);
  } else {
    times["query_unmask"] = median_time_ms(
        [&] { sink += unmask_triples(store.scan_all(), spec, key, ope).size(); },
        config.repetitions, config.min_repetition_ms);
  }

  const CorrelationResult wide = correlate(masked, selectors);
  times["threshold"] = median_time_ms([&] { sink += threshold_masked(wide, 1).array.nnz(); },
                                      config.repetitions, config.min_repetition_ms);
  g_sink = sink;
  return times;
}

void measure_hash_delta(const BenchConfig& config, const KeyMaterial& sha1_key, BenchReport& report) {
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> length(8, 64);
  std::uniform_int_distribution<int> byte(32, 126);
  std::vector<std::string> inputs(std::max<std::size_t>(config.hash_samples, 1));
  for (auto& s : inputs) {
    s.resize(static_cast<std::size_t>(length(rng)));
    for (auto& ch : s) ch = static_cast<char>(byte(rng));
  }
  KeyMaterial sha256_key = sha1_key;
  sha256_key.det_hash = HashAlgorithm::SHA256;

  std::size_t sink = 0;
  auto det = [&](const KeyMaterial& k) {
    return median_time_ms([&] { for (const auto& s : inputs) sink += mask_det(s, k).payload.size(); },
                          config.repetitions, config.min_repetition_ms);
  };
  auto raw = [&](HashAlgorithm h) {
    return median_time_ms([&] { for (const auto& s : inputs) sink += digest(h, s).size(); },
                          config.repetitions, config.min_repetition_ms);
  };
  const double det1 = det(sha1_key);
  const double det256 = det(sha256_key);
  const double raw1 = raw(HashAlgorithm::SHA1);
  const double raw256 = raw(HashAlgorithm::SHA256);
  report.det_sha256_vs_sha1 = det256 / det1;
  report.digest_sha256_vs_sha1 = raw256 / raw1;
  report.sha1_digests_per_second = static_cast<double>(inputs.size()) / (raw1 / 1000.0);
  g_sink = sink;
}

double bound_for(const BenchConfig& config, const std::string& op) {
  if (op == "correlation") return config.correlation_bound;
  if (op == "query_unmask") return config.query_bound;
  if (op == "threshold") return config.threshold_bound;
  return 0;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config, std::ostream* progress) {
  if (config.sizes.empty()) throw ArgumentError("bench needs at least one size");
  for (std::size_t s : config.sizes) {
    if (s == 0) throw ArgumentError("bench sizes must be >= 1");
  }
  std::vector<MaskMode> modes;
  for (const auto& m : config.modes) modes.push_back(parse_mask_mode(m));

  BenchReport report;
  report.cpu = cpu_model();
  report.timestamp = utc_timestamp();
  report.hardware_threads = std::thread::hardware_concurrency();
  const KeyMaterial key = derive_key("maskstore-bench", kBenchSalt);

  for (std::size_t size : config.sizes) {
    const AssociativeArray corpus = generate_corpus({.entries = size, .seed = config.seed});
    report.entries[size] = corpus.nnz();
    const Workload workload = make_workload(corpus, config.threshold_selectors);

    std::map<std::string, double> clr;
    const std::size_t first = report.cells.size();
    for (MaskMode mode : modes) {
      const std::string name(to_string(mode));
      if (progress) *progress << "bench: size " << size << " mode " << name << "\n" << std::flush;
      try {
        const auto times = run_mode(workload, mode, key, config);
        if (mode == MaskMode::CLR) clr = times;
        for (const char* op : kOps) report.cells.push_back({size, name, op, times.at(op), 0, "", ""});
      } catch (const std::exception& e) {
        for (const char* op : kOps) report.cells.push_back({size, name, op, 0, 0, "error", e.what()});
      }
    }

    for (std::size_t i = first; i < report.cells.size(); ++i) {
      BenchCell& cell = report.cells[i];
      if (cell.status == "error") continue;
      const auto base = clr.find(cell.op);
      if (base != clr.end() && base->second > 0) cell.ratio_vs_clr = cell.median_ms / base->second;
      if (cell.mode == "CLR") {
        cell.status = "baseline";
      } else if (cell.op == "mask" || size < config.graded_from || base == clr.end()) {
        cell.status = "info";
      } else {
        cell.status = cell.ratio_vs_clr <= bound_for(config, cell.op) ? "pass" : "warn";
      }
    }
  }

  if (progress) *progress << "bench: DET hash delta\n" << std::flush;
  measure_hash_delta(config, key, report);
  return report;
}

void BenchReport::write_tsv(std::ostream& out) const {
  out << "size\tmode\top\tmedian_ms\tratio_vs_clr\n";
  for (const auto& c : cells) {
    out << c.size << '\t' << c.mode << '\t' << c.op << '\t';
    if (c.status == "error") {
      out << "NA\tNA\n";
    } else {
      out << std::fixed << std::setprecision(4) << c.median_ms << '\t' << std::setprecision(3)
          << c.ratio_vs_clr << '\n';
      out.unsetf(std::ios::floatfield);
    }
  }
}

void BenchReport::write_summary(std::ostream& out) const {
  out << "environment: cpu=\"" << cpu << "\" threads=" << hardware_threads << " at " << timestamp
      << "\n";
  for (const auto& [size, n] : entries) out << "corpus " << size << ": " << n << " entries\n";
  out << std::left << std::setw(8) << "size" << std::setw(6) << "mode" << std::setw(14) << "op"
      << std::right << std::setw(12) << "median_ms" << std::setw(9) << "ratio"
      << "  status\n";
  for (const auto& c : cells) {
    out << std::left << std::setw(8) << c.size << std::setw(6) << c.mode << std::setw(14) << c.op
        << std::right << std::fixed << std::setprecision(3) << std::setw(12) << c.median_ms
        << std::setprecision(2) << std::setw(9) << c.ratio_vs_clr << "  " << c.status;
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << std::fixed << std::setprecision(2) << "DET masking SHA-256/SHA-1 time ratio: "
      << det_sha256_vs_sha1 << " (raw digest ratio " << digest_sha256_vs_sha1 << ", "
      << std::setprecision(0) << sha1_digests_per_second << " SHA-1 digests/s)\n";
  out.unsetf(std::ios::floatfield);
  out << "cells: " << count("pass") << " pass, " << count("warn") << " warn, " << count("error")
      << " error\n";
}

std::size_t BenchReport::count(std::string_view status) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [&](const BenchCell& c) { return c.status == status; }));
}

}  // namespace maskstore
