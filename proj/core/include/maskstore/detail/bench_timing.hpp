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

#include <algorithm>
#include <chrono>
#include <vector>

namespace maskstore {

template <typename Fn>
double median_time_ms(Fn&& fn, int repetitions, double min_repetition_ms) {
  using Clock = std::chrono::steady_clock;
  fn();  // warm caches and lazily fetched algorithms
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(std::max(repetitions, 1)));
  for (int r = 0; r < std::max(repetitions, 1); ++r) {
    std::size_t iterations = 0;
    const auto start = Clock::now();
    double elapsed = 0;
    do {
      fn();
      ++iterations;
      elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    } while (elapsed < min_repetition_ms);
    samples.push_back(elapsed / static_cast<double>(iterations));
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 == 1 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2;
}

}  // namespace maskstore
