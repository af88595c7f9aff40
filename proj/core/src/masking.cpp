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


#include "maskstore/masking.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <array>
#include <atomic>
#include <memory>
#include <vector>

#include "maskstore/base64.hpp"
#include "maskstore/errors.hpp"
#include "maskstore/ope_client.hpp"

namespace maskstore {
namespace {

std::atomic<std::uint64_t> g_unmask_calls{0};

void count_unmask() { g_unmask_calls.fetch_add(1, std::memory_order_relaxed); }

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

// One context per thread; EVP contexts are not shareable across threads.
// The CBC key schedule stays loaded while the same key and direction repeat.
struct ThreadCipher {
  CipherCtx ctx{EVP_CIPHER_CTX_new()};
  bool cbc_loaded = false;
  int cbc_enc = 0;
  std::array<std::uint8_t, kKeySize> cbc_key{};
};

ThreadCipher& thread_cipher() {
  thread_local ThreadCipher c;
  if (!c.ctx) throw CryptoError("EVP_CIPHER_CTX_new failed");
  return c;
}

EVP_CIPHER_CTX* thread_ctx() {
  ThreadCipher& c = thread_cipher();
  EVP_CIPHER_CTX_reset(c.ctx.get());
  c.cbc_loaded = false;
  return c.ctx.get();
}

const EVP_CIPHER* aes_cbc() {
  static const EVP_CIPHER* cipher = EVP_CIPHER_fetch(nullptr, "AES-256-CBC", nullptr);
  if (cipher == nullptr) throw CryptoError("AES-256-CBC unavailable");
  return cipher;
}

const EVP_CIPHER* aes_gcm() {
  static const EVP_CIPHER* cipher = EVP_CIPHER_fetch(nullptr, "AES-256-GCM", nullptr);
  if (cipher == nullptr) throw CryptoError("AES-256-GCM unavailable");
  return cipher;
}

const EVP_MD* message_digest(HashAlgorithm hash) {
  static const EVP_MD* sha1 = EVP_MD_fetch(nullptr, "SHA1", nullptr);
  static const EVP_MD* sha256 = EVP_MD_fetch(nullptr, "SHA256", nullptr);
  const EVP_MD* md = hash == HashAlgorithm::SHA1 ? sha1 : sha256;
  if (md == nullptr) throw CryptoError("message digest unavailable");
  return md;
}

// enc: 1 encrypt, 0 decrypt.
EVP_CIPHER_CTX* cbc_ctx(const KeyMaterial& key, int enc, const std::uint8_t* iv) {
  ThreadCipher& c = thread_cipher();
  EVP_CIPHER_CTX* ctx = c.ctx.get();
  if (c.cbc_loaded && c.cbc_enc == enc &&
      CRYPTO_memcmp(c.cbc_key.data(), key.key_bytes.data(), kKeySize) == 0) {
    if (EVP_CipherInit_ex(ctx, nullptr, nullptr, nullptr, iv, enc) != 1) {
      throw CryptoError("AES-256-CBC re-initialization failed");
    }
    return ctx;
  }
  EVP_CIPHER_CTX_reset(ctx);
  c.cbc_loaded = false;
  if (EVP_CipherInit_ex(ctx, aes_cbc(), nullptr, key.key_bytes.data(), iv, enc) != 1) {
    throw CryptoError("AES-256-CBC initialization failed");
  }
  c.cbc_loaded = true;
  c.cbc_enc = enc;
  c.cbc_key = key.key_bytes;
  return ctx;
}

const unsigned char* as_uchar(std::string_view s) {
  return reinterpret_cast<const unsigned char*>(s.data());
}

void require_mode(const Masktext& m, MaskMode expected) {
  if (m.mode != expected) {
    throw ConfigError("expected a " + std::string(to_string(expected)) +
                      " masktext, got " + std::string(to_string(m.mode)));
  }
}

std::vector<std::uint8_t> cbc_encrypt(const KeyMaterial& key, const Iv& iv,
                                      std::string_view plaintext) {
  EVP_CIPHER_CTX* ctx = cbc_ctx(key, 1, iv.data());
  std::vector<std::uint8_t> out(kIvSize + plaintext.size() + kBlockSize);
  std::copy(iv.begin(), iv.end(), out.begin());
  int n1 = 0;
  int n2 = 0;
  if (EVP_EncryptUpdate(ctx, out.data() + kIvSize, &n1, as_uchar(plaintext),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx, out.data() + kIvSize + n1, &n2) != 1) {
    throw CryptoError("AES-256-CBC encryption failed");
  }
  out.resize(kIvSize + static_cast<std::size_t>(n1 + n2));
  return out;
}

std::string cbc_decrypt(const KeyMaterial& key, std::span<const std::uint8_t> raw) {
  if (raw.size() < kIvSize + kBlockSize || (raw.size() - kIvSize) % kBlockSize != 0) {
    throw FormatError("CBC masktext must hold a 16-byte IV and whole cipher blocks");
  }
  EVP_CIPHER_CTX* ctx = cbc_ctx(key, 0, raw.data());
  const auto body = raw.subspan(kIvSize);
  std::string out(body.size(), '\0');
  auto* dst = reinterpret_cast<unsigned char*>(out.data());
  int n1 = 0;
  int n2 = 0;
  if (EVP_DecryptUpdate(ctx, dst, &n1, body.data(), static_cast<int>(body.size())) != 1) {
    throw CryptoError("AES-256-CBC decryption failed");
  }
  if (EVP_DecryptFinal_ex(ctx, dst + n1, &n2) != 1) {
    throw UnmaskError("bad padding: wrong key or corrupted ciphertext");
  }
  out.resize(static_cast<std::size_t>(n1 + n2));
  return out;
}

std::vector<std::uint8_t> gcm_encrypt(const KeyMaterial& key, const Iv& iv,
                                      std::string_view plaintext) {
  EVP_CIPHER_CTX* ctx = thread_ctx();
  std::vector<std::uint8_t> out(kIvSize + plaintext.size() + kGcmTagSize);
  std::copy(iv.begin(), iv.end(), out.begin());
  int n1 = 0;
  int n2 = 0;
  unsigned char* ct = out.data() + kIvSize;
  if (EVP_EncryptInit_ex(ctx, aes_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(kIvSize), nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx, nullptr, nullptr, key.key_bytes.data(), iv.data()) != 1 ||
      EVP_EncryptUpdate(ctx, ct, &n1, as_uchar(plaintext),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx, ct + n1, &n2) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, static_cast<int>(kGcmTagSize),
                          ct + n1 + n2) != 1) {
    throw CryptoError("AES-256-GCM encryption failed");
  }
  out.resize(kIvSize + static_cast<std::size_t>(n1 + n2) + kGcmTagSize);
  return out;
}

std::string gcm_decrypt(const KeyMaterial& key, std::span<const std::uint8_t> raw) {
  if (raw.size() < kIvSize + kGcmTagSize) {
    throw FormatError("GCM masktext must hold a 16-byte IV and a 16-byte tag");
  }
  const auto body = raw.subspan(kIvSize, raw.size() - kIvSize - kGcmTagSize);
  std::array<std::uint8_t, kGcmTagSize> tag{};
  std::copy(raw.end() - kGcmTagSize, raw.end(), tag.begin());

  EVP_CIPHER_CTX* ctx = thread_ctx();
  std::string out(body.size(), '\0');
  auto* dst = reinterpret_cast<unsigned char*>(out.data());
  int n1 = 0;
  int n2 = 0;
  if (EVP_DecryptInit_ex(ctx, aes_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(kIvSize), nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx, nullptr, nullptr, key.key_bytes.data(), raw.data()) != 1 ||
      EVP_DecryptUpdate(ctx, dst, &n1, body.data(), static_cast<int>(body.size())) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, static_cast<int>(kGcmTagSize),
                          tag.data()) != 1) {
    throw CryptoError("AES-256-GCM decryption failed");
  }
  if (EVP_DecryptFinal_ex(ctx, dst + n1, &n2) != 1) {
    throw IntegrityError("GCM tag mismatch: wrong key or corrupted ciphertext");
  }
  out.resize(static_cast<std::size_t>(n1 + n2));
  return out;
}

}  // namespace

std::string_view to_string(MaskMode mode) {
  switch (mode) {
    case MaskMode::CLR: return "CLR";
    case MaskMode::RND: return "RND";
    case MaskMode::DET: return "DET";
    case MaskMode::OPE: return "OPE";
    case MaskMode::AUT: return "AUT";
  }
  return "?";
}

MaskMode parse_mask_mode(std::string_view text) {
  if (text == "CLR") return MaskMode::CLR;
  if (text == "RND") return MaskMode::RND;
  if (text == "DET") return MaskMode::DET;
  if (text == "OPE") return MaskMode::OPE;
  if (text == "AUT") return MaskMode::AUT;
  throw ConfigError("unknown mask mode '" + std::string(text) + "'");
}

KeyMaterial derive_key(std::string_view password, std::span<const std::uint8_t> salt,
                       int rounds, CipherMode cipher_mode) {
  if (password.empty()) throw ConfigError("password must not be empty");
  if (salt.size() != kSaltSize) {
    throw ConfigError("salt must be exactly 8 bytes, got " + std::to_string(salt.size()));
  }
  if (rounds < 1) throw ConfigError("key derivation needs at least one round");

  KeyMaterial key;
  std::copy(salt.begin(), salt.end(), key.salt.begin());
  key.rounds = rounds;
  key.cipher_mode = cipher_mode;
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), rounds, message_digest(HashAlgorithm::SHA256),
                        static_cast<int>(kKeySize), key.key_bytes.data()) != 1) {
    throw CryptoError("PBKDF2 failed");
  }
  return key;
}

void random_bytes(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw CryptoError("RAND_bytes failed");
  }
}

Salt random_salt() {
  Salt salt{};
  random_bytes(salt);
  return salt;
}

Masktext mask_rnd(std::string_view plaintext, const KeyMaterial& key) {
  Iv iv{};
  random_bytes(iv);
  auto raw = key.cipher_mode == CipherMode::GCM ? gcm_encrypt(key, iv, plaintext)
                                                : cbc_encrypt(key, iv, plaintext);
  return {MaskMode::RND, base64::encode(raw)};
}

std::string unmask_rnd(const Masktext& masktext, const KeyMaterial& key) {
  require_mode(masktext, MaskMode::RND);
  count_unmask();
  const auto raw = base64::decode(masktext.payload);
  return key.cipher_mode == CipherMode::GCM ? gcm_decrypt(key, raw) : cbc_decrypt(key, raw);
}

Iv det_iv(std::string_view plaintext, HashAlgorithm hash) {
  const std::string d = digest(hash, plaintext);
  Iv iv{};
  std::copy_n(d.begin(), kIvSize, iv.begin());
  return iv;
}

Masktext mask_det(std::string_view plaintext, const KeyMaterial& key) {
  return {MaskMode::DET, base64::encode(cbc_encrypt(key, det_iv(plaintext, key.det_hash), plaintext))};
}

std::string unmask_det(const Masktext& masktext, const KeyMaterial& key) {
  require_mode(masktext, MaskMode::DET);
  count_unmask();
  const auto raw = base64::decode(masktext.payload);
  std::string plaintext = cbc_decrypt(key, raw);
  if (key.verify_det_iv) {
    const Iv expected = det_iv(plaintext, key.det_hash);
    if (CRYPTO_memcmp(expected.data(), raw.data(), kIvSize) != 0) {
      throw IntegrityError("DET IV does not match the recovered plaintext");
    }
  }
  return plaintext;
}

Masktext mask_aut(std::string_view plaintext, const KeyMaterial& key) {
  const std::string tag = hmac(key.aut_hash, key.key_bytes, plaintext);
  std::string payload = base64::encode(tag);
  payload.reserve(payload.size() + 1 + plaintext.size());
  payload.push_back(':');
  payload.append(plaintext);
  return {MaskMode::AUT, std::move(payload)};
}

std::string unmask_aut(const Masktext& masktext, const KeyMaterial& key) {
  require_mode(masktext, MaskMode::AUT);
  count_unmask();
  const std::string_view payload = masktext.payload;
  const auto sep = payload.find(':');
  if (sep == std::string_view::npos) throw FormatError("AUT masktext has no ':' separator");
  const auto stored = base64::decode(payload.substr(0, sep));
  const auto plaintext = payload.substr(sep + 1);
  const std::string expected = hmac(key.aut_hash, key.key_bytes, plaintext);
  if (stored.size() != expected.size() ||
      CRYPTO_memcmp(stored.data(), expected.data(), expected.size()) != 0) {
    throw IntegrityError("AUT tag mismatch");
  }
  return std::string(plaintext);
}

Masktext mask(std::string_view plaintext, MaskMode mode, const KeyMaterial& key,
              OpeClient* ope) {
  switch (mode) {
    case MaskMode::CLR: return {MaskMode::CLR, std::string(plaintext)};
    case MaskMode::RND: return mask_rnd(plaintext, key);
    case MaskMode::DET: return mask_det(plaintext, key);
    case MaskMode::AUT: return mask_aut(plaintext, key);
    case MaskMode::OPE:
      if (ope == nullptr) throw ConfigError("OPE masking requires a live OPE session");
      return {MaskMode::OPE, ope->insert(plaintext).bits()};
  }
  throw ConfigError("unknown mask mode");
}

std::string unmask(const Masktext& masktext, const KeyMaterial& key, OpeClient* ope) {
  switch (masktext.mode) {
    case MaskMode::CLR: count_unmask(); return masktext.payload;
    case MaskMode::RND: return unmask_rnd(masktext, key);
    case MaskMode::DET: return unmask_det(masktext, key);
    case MaskMode::AUT: return unmask_aut(masktext, key);
    case MaskMode::OPE: {
      if (ope == nullptr) throw ConfigError("OPE unmasking requires a live OPE session");
      count_unmask();
      return ope->plaintext_at(OrderText::parse(masktext.payload, ope->width()));
    }
  }
  throw ConfigError("unknown mask mode");
}

std::string digest(HashAlgorithm hash, std::string_view data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out, &len, message_digest(hash), nullptr) != 1) {
    throw CryptoError("digest failed");
  }
  return std::string(reinterpret_cast<const char*>(out), len);
}

std::string hmac(HashAlgorithm hash, std::span<const std::uint8_t> key, std::string_view data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (HMAC(message_digest(hash), key.data(), static_cast<int>(key.size()), as_uchar(data),
           data.size(), out, &len) == nullptr) {
    throw CryptoError("HMAC failed");
  }
  return std::string(reinterpret_cast<const char*>(out), len);
}

std::string key_check_token(const KeyMaterial& key) {
  return base64::encode(hmac(HashAlgorithm::SHA256, key.key_bytes, "maskstore/ope-key-check/v1"));
}

std::uint64_t unmask_call_count() { return g_unmask_calls.load(std::memory_order_relaxed); }

}  // namespace maskstore
