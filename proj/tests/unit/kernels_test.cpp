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

#include <random>

#include "maskstore/errors.hpp"
#include "maskstore/kernels.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/store.hpp"
#include "test_support.hpp"

namespace maskstore {
namespace {

using testing::fixed_key;
using testing::OpeRig;

TEST(MaskLevels, ParseAndPrint) {
  const MaskSpec s = MaskSpec::parse("DET,OPE,RND");
  EXPECT_EQ(s.row, MaskMode::DET);
  EXPECT_EQ(s.col, MaskMode::OPE);
  EXPECT_EQ(s.val, MaskMode::RND);
  EXPECT_EQ(s.to_string(), "DET,OPE,RND");
  for (const char* bad : {"", "DET", "DET,DET", "DET,DET,DET,DET", "DET,,RND", "det,DET,RND"}) {
    EXPECT_THROW(MaskSpec::parse(bad), ConfigError) << bad;
  }
}

TEST(MaskArray, DistinctKeysMaskedOnceAndRndValuesFresh) {
  const auto a = testing::three_tweets();
  const auto m = mask_array(a, MaskSpec::parse("DET,DET,RND"), fixed_key());
  EXPECT_EQ(m.array.nnz(), a.nnz());
  EXPECT_EQ(m.array.col_keys().size(), 3U);
  std::set<std::string> values;
  for (const auto& t : m.array.triples()) values.insert(t.val);
  EXPECT_EQ(values.size(), 5U);
}

TEST(MaskArray, RefusesRndKeysUnlessAllowed) {
  const auto a = testing::three_tweets();
  EXPECT_THROW(mask_array(a, MaskSpec::parse("RND,DET,CLR"), fixed_key()), ConfigError);
  const auto m = mask_array(a, MaskSpec::parse("RND,DET,CLR"), fixed_key(), {}, MaskOptions{true});
  EXPECT_EQ(m.array.row_keys().size(), 3U);
}

TEST(MaskArray, OpeNeedsSession) {
  EXPECT_THROW(mask_array(testing::three_tweets(), MaskSpec::parse("DET,OPE,CLR"), fixed_key()),
               ConfigError);
}

TEST(MaskArray, MaskTriplesKeepsOrderAndMultiplicity) {
  const std::vector<Triple> t{{"b", "x", "1"}, {"a", "x", "1"}, {"b", "x", "1"}};
  const auto m = mask_triples(t, MaskSpec::parse("DET,DET,DET"), fixed_key());
  ASSERT_EQ(m.size(), 3U);
  EXPECT_EQ(m[0], m[2]);
  EXPECT_EQ(unmask_triples(m, MaskSpec::parse("DET,DET,DET"), fixed_key()), t);
}

TEST(MaskArray, RoundTripEveryLevel) {
  std::mt19937_64 rng(31);
  OpeRig rig(24);
  const OpeBindings ope{&rig.client, &rig.client, &rig.client};
  for (const char* spec : {"CLR,CLR,CLR", "DET,DET,RND", "OPE,OPE,OPE", "DET,OPE,AUT",
                           "AUT,AUT,DET", "OPE,DET,RND"}) {
    const auto a = testing::random_array(rng, 20, 10, 0.4);
    const auto m = mask_array(a, MaskSpec::parse(spec), fixed_key(), ope);
    EXPECT_EQ(unmask_array(m, fixed_key(), ope), a) << spec;
  }
}

TEST(MaskArray, OpeColumnsSortLikePlaintext) {
  OpeRig rig;
  const auto a = testing::three_tweets();
  const auto m = mask_array(a, MaskSpec::parse("DET,OPE,AUT"), fixed_key(), {nullptr, &rig.client});
  std::vector<OrderText> ordertexts;
  for (const auto& c : a.col_keys()) ordertexts.push_back(*rig.client.find(c));
  EXPECT_TRUE(std::is_sorted(ordertexts.begin(), ordertexts.end()));
  EXPECT_EQ(m.array.col_keys().size(), 3U);
}

TEST(MaskArray, UnmaskErrorsCarryContext) {
  auto m = mask_array(testing::three_tweets(), MaskSpec::parse("DET,DET,CLR"), fixed_key());
  ArrayBuilder b;
  b.set("not-base64!", m.array.col_keys()[0], "1");
  try {
    unmask_array({std::move(b).build(), m.spec}, fixed_key());
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("row masktext"), std::string::npos) << e.what();
  }
}

TEST(Correlate, ThreeTweetsHappyRow) {
  const MaskSpec spec = MaskSpec::parse("DET,DET,RND");
  const auto m = mask_array(testing::three_tweets(), spec, fixed_key());
  const std::vector<std::string> sel{mask_det("word|happy", fixed_key()).payload};
  const auto before = unmask_call_count();
  const auto c = correlate(m, sel);
  EXPECT_EQ(unmask_call_count(), before);  // the kernel never unmasks
  std::size_t warnings = 0;
  const auto clear = unmask_result(c, {MaskMode::DET, MaskMode::DET, MaskMode::RND}, fixed_key(), {},
                                   &warnings);
  EXPECT_EQ(warnings, 1U);
  EXPECT_EQ(clear.triples(), (std::vector<Triple>{{"word|happy", "word|happy", "2"},
                                                  {"word|happy", "word|rain", "1"},
                                                  {"word|happy", "word|sun", "1"}}));
  const auto t = threshold_masked(c, 1);
  EXPECT_EQ(unmask_result(t, {MaskMode::DET, MaskMode::DET, MaskMode::CLR}, fixed_key()).triples(),
            (std::vector<Triple>{{"word|happy", "word|happy", "2"}}));
}

TEST(Correlate, AbsentSelectorGivesEmptyResult) {
  const auto m = mask_array(testing::three_tweets(), MaskSpec::parse("DET,DET,CLR"), fixed_key());
  const std::vector<std::string> sel{mask_det("word|snow", fixed_key()).payload};
  EXPECT_TRUE(correlate(m, sel).array.empty());
}

TEST(Correlate, RndKeysAreRejected) {
  const auto m = mask_array(testing::three_tweets(), MaskSpec::parse("DET,RND,CLR"), fixed_key(), {},
                            MaskOptions{true});
  EXPECT_THROW(correlate(m, std::vector<std::string>{"x"}), ConfigError);
}

TEST(Correlate, NegativeThresholdIsArgumentError) {
  EXPECT_THROW(threshold_masked(CorrelationResult{}, -1), ArgumentError);
}

// Property: thread count does not change the output, and the store-scan
// path matches the in-memory kernel.
TEST(Correlate, ThreadsAndStorePathAgree) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const auto a = testing::random_array(rng, 40, 20, 0.3);
    const MaskSpec spec = MaskSpec::parse("DET,DET,DET");
    const auto m = mask_array(a, spec, fixed_key());
    std::vector<std::string> sel;
    for (const auto& c : m.array.col_keys()) {
      if (rng() % 3 == 0) sel.push_back(c);
    }
    const auto one = correlate(m, sel);
    EXPECT_EQ(correlate(m, sel, KernelOptions{4}).array, one.array);
    TripleStore store(spec);
    store.ingest(m);
    EXPECT_EQ(correlate(store, spec, sel).array, one.array);
  }
}

TEST(Correlate, MatchesBruteForceUnderOpeKeys) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    OpeRig rig(24);
    const auto a = testing::random_array(rng, 30, 12, 0.3);
    const MaskSpec spec = MaskSpec::parse("OPE,OPE,RND");
    const OpeBindings ope{&rig.client, &rig.client, nullptr};
    const auto m = mask_array(a, spec, fixed_key(), ope);
    std::vector<std::string> clear_sel;
    std::vector<std::string> sel;
    for (const auto& c : a.col_keys()) {
      if (rng() % 2 == 0) {
        clear_sel.push_back(c);
        sel.push_back(rig.client.find(c)->bits());
      }
    }
    const auto c = correlate(m, sel);
    const auto clear = unmask_result(c, {MaskMode::OPE, MaskMode::OPE, MaskMode::CLR}, fixed_key(), ope);
    EXPECT_EQ(testing::as_counts(clear), testing::brute_correlation(a, clear_sel));
  }
}

TEST(Correlate, AuthenticatedCounts) {
  const auto m = mask_array(testing::three_tweets(), MaskSpec::parse("DET,DET,CLR"), fixed_key());
  const std::vector<std::string> sel{mask_det("word|happy", fixed_key()).payload};
  const auto c = correlate(m, sel);
  auto tagged = authenticate_counts(c, fixed_key());
  EXPECT_EQ(verify_counts(tagged, fixed_key()).array, c.array);

  ArrayBuilder forged;
  for (const auto& t : tagged.array.triples()) {
    std::string v = t.val;
    if (v.ends_with(":2")) v.back() = '9';
    forged.set(t.row, t.col, v);
  }
  tagged.array = std::move(forged).build();
  EXPECT_THROW(verify_counts(tagged, fixed_key()), IntegrityError);
}

}  // namespace
}  // namespace maskstore
