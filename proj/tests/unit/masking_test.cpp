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
#include <set>

#include "maskstore/base64.hpp"
#include "maskstore/errors.hpp"
#include "maskstore/masking.hpp"
#include "test_support.hpp"

namespace maskstore {
namespace {

using testing::fixed_key;
using testing::from_hex;
using testing::kSalt;
using testing::to_hex;

std::string key_hex(const KeyMaterial& k) { return to_hex(std::span<const std::uint8_t>(k.key_bytes)); }

// Values below were computed with Python's hashlib/hmac and the
// `cryptography` package and are frozen here.

TEST(KeyDerivation, MatchesFrozenVectors) {
  EXPECT_EQ(key_hex(derive_key("pw", kSalt, 1)),
            "ff0c84306a85c6dcdf35a041c6bcd8deca5e72bebad46864c43879c196df6cd5");
  EXPECT_EQ(key_hex(fixed_key()),
            "e74117ba425777e767dc5255017ec703a3d6d1694d0c3c2c990d870d4c1d04c4");
}

TEST(KeyDerivation, AgreesWithReferenceLoop) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    const std::string pw = testing::random_printable(rng, 1, 20);
    const int rounds = 1 + static_cast<int>(rng() % 50);
    const std::string ref = testing::reference_pbkdf2_sha256(
        pw, std::string_view(reinterpret_cast<const char*>(kSalt.data()), kSalt.size()), rounds, 32);
    EXPECT_EQ(key_hex(derive_key(pw, kSalt, rounds)), to_hex(ref)) << pw << " rounds=" << rounds;
  }
}

TEST(KeyDerivation, RejectsBadInputs) {
  EXPECT_THROW(derive_key("", kSalt), ConfigError);
  const std::array<std::uint8_t, 4> short_salt{1, 2, 3, 4};
  EXPECT_THROW(derive_key("pw", short_salt), ConfigError);
  EXPECT_THROW(derive_key("pw", kSalt, 0), ConfigError);
}

TEST(KeyDerivation, RecordsParameters) {
  const KeyMaterial k = derive_key("pw", kSalt, 7, CipherMode::CBC);
  EXPECT_EQ(k.rounds, 7);
  EXPECT_EQ(k.cipher_mode, CipherMode::CBC);
  EXPECT_TRUE(std::equal(k.salt.begin(), k.salt.end(), kSalt.begin()));
}

TEST(Hmac, Rfc2202Sha1Cases) {
  const std::vector<std::uint8_t> key1(20, 0x0b);
  EXPECT_EQ(to_hex(hmac(HashAlgorithm::SHA1, key1, "Hi There")),
            "b617318655057264e28bc0b6fb378c8ef146be00");
  const std::string jefe = "Jefe";
  EXPECT_EQ(to_hex(hmac(HashAlgorithm::SHA1,
                        std::span(reinterpret_cast<const std::uint8_t*>(jefe.data()), jefe.size()),
                        "what do ya want for nothing?")),
            "effcdf6ae5eb2fa2d27416d5f184df9c259a7c79");
}

TEST(Hmac, AgreesWithReferenceConstruction) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const std::string key = testing::random_string(rng, 0, 100);
    const std::string data = testing::random_string(rng, 0, 300);
    for (auto h : {HashAlgorithm::SHA1, HashAlgorithm::SHA256}) {
      EXPECT_EQ(hmac(h, std::span(reinterpret_cast<const std::uint8_t*>(key.data()), key.size()), data),
                testing::reference_hmac(h, key, data));
    }
  }
}

TEST(Digest, KnownAnswers) {
  EXPECT_EQ(to_hex(digest(HashAlgorithm::SHA1, "abc")), "a9993e364706816aba3e25717850c26c9cd0d89d");
  EXPECT_EQ(to_hex(digest(HashAlgorithm::SHA256, "abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Det, IvIsTruncatedPlaintextDigest) {
  EXPECT_EQ(to_hex(std::span<const std::uint8_t>(det_iv("abc", HashAlgorithm::SHA1))),
            "a9993e364706816aba3e25717850c26c");
  EXPECT_EQ(to_hex(std::span<const std::uint8_t>(det_iv("abc", HashAlgorithm::SHA256))),
            "ba7816bf8f01cfea414140de5dae2223");
}

TEST(Det, MatchesFrozenCiphertexts) {
  EXPECT_EQ(mask_det("happy", fixed_key()).payload, "OXjQCXSO9UrW73v4Ub1VSU+4enw2ff57qNGgDBbxesk=");
  EXPECT_EQ(mask_det("", fixed_key()).payload, "2jmj7l5rSw0yVb/vlWAYkIk6MigO3/cSkWay8gFOU7g=");
  KeyMaterial sha256 = fixed_key();
  sha256.det_hash = HashAlgorithm::SHA256;
  EXPECT_EQ(mask_det("abc", sha256).payload, "ungWv48Bz+pBQUDeXa4iI67MYIsEnNXEqTI9G1cjzks=");
}

TEST(Det, PayloadCarriesIvThenOneBlockForShortInput) {
  const auto raw = base64::decode(mask_det("happy", fixed_key()).payload);
  ASSERT_EQ(raw.size(), kIvSize + kBlockSize);
  const auto iv = det_iv("happy", HashAlgorithm::SHA1);
  EXPECT_TRUE(std::equal(iv.begin(), iv.end(), raw.begin()));
  EXPECT_EQ(mask_det("happy", fixed_key()).payload.size(), 44U);
}

TEST(Det, EqualityIsPreservedAndDistinctInputsDiffer) {
  EXPECT_EQ(mask_det("x", fixed_key()), mask_det("x", fixed_key()));
  EXPECT_NE(mask_det("x", fixed_key()), mask_det("y", fixed_key()));
}

TEST(Det, IvMismatchIsAnIntegrityError) {
  // Same ciphertext body under another plaintext's IV decrypts to garbage
  // or to a plaintext whose digest disagrees with the IV.
  auto raw = base64::decode(mask_det("happy", fixed_key()).payload);
  raw[4] ^= 0x01;  // flips the fifth plaintext byte: y -> x
  const Masktext forged{MaskMode::DET, base64::encode(raw)};
  EXPECT_THROW(unmask_det(forged, fixed_key()), IntegrityError);

  KeyMaterial lax = fixed_key();
  lax.verify_det_iv = false;
  EXPECT_EQ(unmask_det(forged, lax), std::string("happx"));
}

TEST(Rnd, GcmFramingAndFreshness) {
  const Masktext a = mask_rnd("happy", fixed_key());
  const Masktext b = mask_rnd("happy", fixed_key());
  EXPECT_NE(a.payload, b.payload);
  EXPECT_EQ(base64::decode(a.payload).size(), kIvSize + 5 + kGcmTagSize);
  EXPECT_EQ(unmask_rnd(a, fixed_key()), "happy");
}

TEST(Rnd, CbcFramingLength) {
  KeyMaterial cbc = fixed_key();
  cbc.cipher_mode = CipherMode::CBC;
  const Masktext m = mask_rnd("happy", cbc);
  EXPECT_EQ(m.payload.size(), 44U);
  EXPECT_EQ(unmask_rnd(m, cbc), "happy");
}

TEST(Rnd, GcmTamperIsIntegrityError) {
  auto raw = base64::decode(mask_rnd("happy", fixed_key()).payload);
  raw[kIvSize] ^= 0x80;
  EXPECT_THROW(unmask_rnd({MaskMode::RND, base64::encode(raw)}, fixed_key()), IntegrityError);
}

TEST(Rnd, WrongKeyFails) {
  const KeyMaterial other = derive_key("other", kSalt);
  EXPECT_THROW(unmask_rnd(mask_rnd("happy", fixed_key()), other), UnmaskError);
  KeyMaterial cbc = fixed_key();
  cbc.cipher_mode = CipherMode::CBC;
  KeyMaterial other_cbc = other;
  other_cbc.cipher_mode = CipherMode::CBC;
  // CBC under a wrong key is caught by padding with high probability; the
  // DET IV check catches what padding lets through.
  int caught = 0;
  for (int i = 0; i < 20; ++i) {
    try {
      if (unmask_rnd(mask_rnd("happy", cbc), other_cbc) != "happy") ++caught;
    } catch (const UnmaskError&) {
      ++caught;
    }
  }
  EXPECT_EQ(caught, 20);
}

TEST(Aut, FrozenTagAndLayout) {
  const Masktext m = mask_aut("abc", fixed_key());
  EXPECT_EQ(m.payload, "6g6d3tTyzrrSh42weRzAALJgKiE=:abc");
  EXPECT_EQ(unmask_aut(m, fixed_key()), "abc");
}

TEST(Aut, TagMatchesReferenceHmac) {
  const std::string key(reinterpret_cast<const char*>(fixed_key().key_bytes.data()), kKeySize);
  const std::string tag = base64::encode(testing::reference_hmac(HashAlgorithm::SHA1, key, "abc"));
  EXPECT_EQ(mask_aut("abc", fixed_key()).payload, tag + ":abc");
}

TEST(Aut, PlaintextMayContainColons) {
  const Masktext m = mask_aut("a:b::c", fixed_key());
  EXPECT_EQ(unmask_aut(m, fixed_key()), "a:b::c");
}

TEST(Aut, RejectsForgeriesAndGarbage) {
  Masktext m = mask_aut("abc", fixed_key());
  m.payload.back() = 'd';
  EXPECT_THROW(unmask_aut(m, fixed_key()), IntegrityError);
  EXPECT_THROW(unmask_aut({MaskMode::AUT, "no separator"}, fixed_key()), FormatError);
  EXPECT_THROW(unmask_aut({MaskMode::AUT, "short:abc"}, fixed_key()), FormatError);
}

TEST(Dispatch, ClearIsIdentity) {
  EXPECT_EQ(mask("x\ty", MaskMode::CLR, fixed_key()).payload, "x\ty");
  EXPECT_EQ(unmask({MaskMode::CLR, "x"}, fixed_key()), "x");
}

TEST(Dispatch, OpeWithoutSessionIsConfigError) {
  EXPECT_THROW(mask("x", MaskMode::OPE, fixed_key()), ConfigError);
  EXPECT_THROW(unmask({MaskMode::OPE, "1000000000000000"}, fixed_key()), ConfigError);
}

TEST(Dispatch, ModeMismatchIsConfigError) {
  EXPECT_THROW(unmask_det(mask_rnd("x", fixed_key()), fixed_key()), ConfigError);
}

TEST(Dispatch, ParseModeNames) {
  for (auto m : {MaskMode::CLR, MaskMode::RND, MaskMode::DET, MaskMode::OPE, MaskMode::AUT}) {
    EXPECT_EQ(parse_mask_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_mask_mode("det"), ConfigError);
  EXPECT_THROW(parse_mask_mode(""), ConfigError);
}

TEST(Dispatch, CorruptPayloadsRaiseTypedErrors) {
  EXPECT_THROW(unmask({MaskMode::DET, "***"}, fixed_key()), FormatError);
  EXPECT_THROW(unmask({MaskMode::DET, "AAAA"}, fixed_key()), FormatError);
  EXPECT_THROW(unmask({MaskMode::RND, "AAAA"}, fixed_key()), FormatError);
}

TEST(Dispatch, UnmaskCounterAdvances) {
  const auto before = unmask_call_count();
  unmask_det(mask_det("x", fixed_key()), fixed_key());
  EXPECT_GT(unmask_call_count(), before);
}

TEST(KeyCheck, DependsOnKeyOnly) {
  EXPECT_EQ(key_check_token(fixed_key()), key_check_token(derive_key("hunter2", kSalt)));
  EXPECT_NE(key_check_token(fixed_key()), key_check_token(derive_key("hunter3", kSalt)));
}

// Property: every mode round-trips arbitrary bytes.
TEST(RoundTrip, ArbitraryBytesAllDirectModes) {
  std::mt19937_64 rng(99);
  KeyMaterial cbc = fixed_key();
  cbc.cipher_mode = CipherMode::CBC;
  for (int i = 0; i < 500; ++i) {
    const std::string p = testing::random_string(rng, 0, 256);
    for (auto mode : {MaskMode::CLR, MaskMode::RND, MaskMode::DET, MaskMode::AUT}) {
      ASSERT_EQ(unmask(mask(p, mode, fixed_key()), fixed_key()), p) << to_string(mode);
    }
    ASSERT_EQ(unmask(mask(p, MaskMode::RND, cbc), cbc), p);
  }
}

}  // namespace
}  // namespace maskstore
