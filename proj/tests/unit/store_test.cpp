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


#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <thread>

#include "maskstore/errors.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/store.hpp"
#include "test_support.hpp"

namespace maskstore {
namespace {

using testing::fixed_key;

std::vector<Triple> random_triples(std::mt19937_64& rng, std::size_t n) {
  std::vector<Triple> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"r" + std::to_string(rng() % 20), "c" + std::to_string(rng() % 20),
                   std::to_string(rng() % 5 + 1)});
  }
  return out;
}

TEST(TripleStore, ScansOnThreeTweets) {
  TripleStore store(MaskSpec{});
  EXPECT_EQ(store.ingest(testing::three_tweets().triples()), 5U);
  EXPECT_EQ(store.scan_col("word|happy").size(), 2U);
  EXPECT_EQ(store.scan_row("T1").size(), 2U);
  EXPECT_TRUE(store.scan_row("T9").empty());
  EXPECT_EQ(store.scan_all().size(), 5U);
  EXPECT_TRUE(store.indexes_coherent());
}

TEST(TripleStore, MaskedColumnScan) {
  const MaskSpec spec = MaskSpec::parse("DET,DET,RND");
  const auto masked = mask_array(testing::three_tweets(), spec, fixed_key());
  TripleStore store(spec);
  store.ingest(masked);
  EXPECT_EQ(store.scan_col(mask_det("word|happy", fixed_key()).payload).size(), 2U);
}

TEST(TripleStore, IngestValidatesBeforeWriting) {
  TripleStore store(MaskSpec{});
  const std::vector<Triple> bad{{"a", "b", "c"}, {"a\tb", "c", "d"}};
  EXPECT_THROW(store.ingest(bad), FormatError);
  EXPECT_EQ(store.size(), 0U);
  const std::vector<Triple> empty{{"a", "", "c"}};
  EXPECT_THROW(store.ingest(empty), FormatError);
}

TEST(TripleStore, RangeScan) {
  TripleStore store(MaskSpec::parse("OPE,CLR,CLR"));
  const std::vector<Triple> t{{"0100", "x", "1"}, {"1000", "x", "1"}, {"1100", "y", "1"}};
  store.ingest(t);
  const auto hits = store.range_scan(Dimension::Row, OrderText::parse("0100", 4),
                                     OrderText::parse("1000", 4));
  EXPECT_EQ(hits, (std::vector<Triple>{{"0100", "x", "1"}, {"1000", "x", "1"}}));
  EXPECT_THROW(store.range_scan(Dimension::Row, OrderText::parse("1100", 4),
                                OrderText::parse("0100", 4)),
               ArgumentError);
}

TEST(TripleStore, RemapIsAtomic) {
  TripleStore store(MaskSpec::parse("OPE,CLR,CLR"));
  const std::vector<Triple> t{{"0100", "x", "1"}, {"1000", "y", "1"}};
  store.ingest(t);
  Remap partial{{OrderText::parse("0100", 4), OrderText::parse("0010", 4)}};
  EXPECT_THROW(store.apply_remap(Dimension::Row, partial), RemapError);
  EXPECT_EQ(store.scan_all(), t);
  partial.emplace(OrderText::parse("1000", 4), OrderText::parse("0100", 4));
  EXPECT_EQ(store.apply_remap(Dimension::Row, partial), 2U);
  EXPECT_EQ(store.scan_row("0010").size(), 1U);
  EXPECT_EQ(store.scan_col("y")[0].row, "0100");
  EXPECT_TRUE(store.indexes_coherent());
}

TEST(TripleStore, ValueRemap) {
  TripleStore store(MaskSpec::parse("CLR,CLR,OPE"));
  const std::vector<Triple> t{{"a", "x", "0100"}};
  store.ingest(t);
  store.apply_remap(Dimension::Val,
                    Remap{{OrderText::parse("0100", 4), OrderText::parse("1000", 4)}});
  EXPECT_EQ(store.scan_all()[0].val, "1000");
  EXPECT_THROW(store.range_scan(Dimension::Val, OrderText::parse("0000", 4),
                                OrderText::parse("1111", 4)),
               ArgumentError);
}

TEST(TripleStore, LoadReportsFileAndLine) {
  testing::TempDir dir;
  {
    std::ofstream out(dir / "bad.db");
    out << "#cmdstore v1 CLR,CLR,CLR\na\tb\tc\nbroken line\n";
  }
  try {
    TripleStore::load(dir / "bad.db");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.db:3"), std::string::npos) << e.what();
  }
  {
    std::ofstream out(dir / "empty.db");
  }
  EXPECT_EQ(TripleStore::load(dir / "empty.db").size(), 0U);
  EXPECT_THROW(TripleStore::load(dir / "missing.db"), LoadError);
}

TEST(TripleStore, PersistWritesHeader) {
  testing::TempDir dir;
  TripleStore store(MaskSpec::parse("DET,OPE,AUT"));
  store.persist(dir / "s.db");
  std::ifstream in(dir / "s.db");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "#cmdstore v1 DET,OPE,AUT");
}

// Property: scans equal filters over scan_all; persist/load is identity.
TEST(TripleStore, ScanFilterEquivalenceAndPersistence) {
  std::mt19937_64 rng(17);
  testing::TempDir dir;
  for (int trial = 0; trial < 30; ++trial) {
    TripleStore store(MaskSpec::parse("DET,DET,CLR"));
    store.ingest(random_triples(rng, rng() % 200));
    const auto all = store.scan_all();
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    for (int k = 0; k < 20; ++k) {
      const std::string row = "r" + std::to_string(k);
      const std::string col = "c" + std::to_string(k);
      std::vector<Triple> by_row;
      std::vector<Triple> by_col;
      for (const auto& t : all) {
        if (t.row == row) by_row.push_back(t);
        if (t.col == col) by_col.push_back(t);
      }
      EXPECT_EQ(store.scan_row(row), by_row);
      EXPECT_EQ(store.scan_col(col), by_col);
    }
    store.persist(dir / "p.db");
    const TripleStore back = TripleStore::load(dir / "p.db");
    EXPECT_EQ(back.scan_all(), all);
    EXPECT_EQ(back.spec(), store.spec());
  }
}

TEST(TripleStore, ConcurrentReadersDuringIngest) {
  TripleStore store(MaskSpec{});
  std::atomic<bool> done{false};
  std::thread reader([&] {
    while (!done) {
      const auto all = store.scan_all();
      ASSERT_TRUE(std::is_sorted(all.begin(), all.end()));
    }
  });
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) store.ingest(random_triples(rng, 20));
  done = true;
  reader.join();
  EXPECT_TRUE(store.indexes_coherent());
}

TEST(TripleStore, CopyIsIndependent) {
  TripleStore a(MaskSpec{});
  const std::vector<Triple> t{{"a", "b", "c"}};
  a.ingest(t);
  TripleStore b = a;
  const std::vector<Triple> more{{"x", "y", "z"}};
  b.ingest(more);
  EXPECT_EQ(a.size(), 1U);
  EXPECT_EQ(b.size(), 2U);
}

}  // namespace
}  // namespace maskstore
