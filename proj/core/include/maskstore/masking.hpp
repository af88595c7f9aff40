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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace maskstore {

class OpeClient;

/// Masking level applied to one dimension of an associative array.
///
///   CLR  identity, no protection
///   RND  randomized AES-256, decrypt only
///   DET  deterministic AES-256-CBC, equality queries
///   OPE  mutable order-preserving encoding, range queries
///   AUT  plaintext prefixed with an HMAC tag, integrity only
enum class MaskMode { CLR, RND, DET, OPE, AUT };

std::string_view to_string(MaskMode mode);
/// Case-sensitive, accepts "CLR", "RND", "DET", "OPE", "AUT". Throws ConfigError.
MaskMode parse_mask_mode(std::string_view text);

enum class CipherMode { CBC, GCM };
enum class HashAlgorithm { SHA1, SHA256 };

inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kSaltSize = 8;
inline constexpr std::size_t kIvSize = 16;
inline constexpr std::size_t kBlockSize = 16;
inline constexpr std::size_t kGcmTagSize = 16;
inline constexpr int kDefaultRounds = 1000;

using Salt = std::array<std::uint8_t, kSaltSize>;
using Iv = std::array<std::uint8_t, kIvSize>;

struct KeyMaterial {
  std::array<std::uint8_t, kKeySize> key_bytes{};
  Salt salt{};
  int rounds = kDefaultRounds;
  /// Cipher used by RND. DET always runs CBC with its hash-derived IV.
  CipherMode cipher_mode = CipherMode::GCM;
  HashAlgorithm det_hash = HashAlgorithm::SHA1;
  HashAlgorithm aut_hash = HashAlgorithm::SHA1;
  /// Re-derive the DET IV from the recovered plaintext and compare.
  bool verify_det_iv = true;
};

/// PBKDF2-HMAC-SHA256 over (password, salt, rounds) producing a 32-byte key.
/// Throws ConfigError on an empty password, a salt that is not 8 bytes, or
/// rounds < 1.
KeyMaterial derive_key(std::string_view password,
                       std::span<const std::uint8_t> salt,
                       int rounds = kDefaultRounds,
                       CipherMode cipher_mode = CipherMode::GCM);

/// Fills `out` from the OpenSSL CSPRNG. Throws CryptoError.
void random_bytes(std::span<std::uint8_t> out);
Salt random_salt();

/// Stored, printable form of a masked datum.
struct Masktext {
  MaskMode mode = MaskMode::CLR;
  std::string payload;

  friend bool operator==(const Masktext&, const Masktext&) = default;
};

Masktext mask_rnd(std::string_view plaintext, const KeyMaterial& key);
std::string unmask_rnd(const Masktext& masktext, const KeyMaterial& key);

Masktext mask_det(std::string_view plaintext, const KeyMaterial& key);
std::string unmask_det(const Masktext& masktext, const KeyMaterial& key);

Masktext mask_aut(std::string_view plaintext, const KeyMaterial& key);
std::string unmask_aut(const Masktext& masktext, const KeyMaterial& key);

/// Mode dispatch. OPE delegates to `ope`, which must be a live client
/// session; a null session for OPE raises ConfigError.
Masktext mask(std::string_view plaintext, MaskMode mode, const KeyMaterial& key,
              OpeClient* ope = nullptr);
std::string unmask(const Masktext& masktext, const KeyMaterial& key,
                   OpeClient* ope = nullptr);

/// The DET IV for `plaintext`: the first 16 bytes of its unkeyed digest.
Iv det_iv(std::string_view plaintext, HashAlgorithm hash);

/// Raw digest bytes (20 for SHA-1, 32 for SHA-256).
std::string digest(HashAlgorithm hash, std::string_view data);

/// Raw HMAC tag bytes.
std::string hmac(HashAlgorithm hash, std::span<const std::uint8_t> key,
                 std::string_view data);

/// Token an OPE server can be configured with to refuse clients holding a
/// different key. Derived from the key; reveals nothing about it.
std::string key_check_token(const KeyMaterial& key);

/// Number of unmask operations performed by this process. Used to assert
/// that server-side kernels never unmask.
std::uint64_t unmask_call_count();

}  // namespace maskstore
