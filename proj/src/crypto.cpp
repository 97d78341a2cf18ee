#include "nims/crypto.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <memory>

namespace nims {

namespace {

struct CtxFree {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
  void operator()(EVP_MAC_CTX* p) const { EVP_MAC_CTX_free(p); }
  void operator()(EVP_MAC* p) const { EVP_MAC_free(p); }
};

Bytes digest(const EVP_MD* md, BytesView data) {
  std::unique_ptr<EVP_MD_CTX, CtxFree> ctx(EVP_MD_CTX_new());
  unsigned int out_len = 0;
  Bytes out(EVP_MD_get_size(md));
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      (!data.empty() &&
       EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1) ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &out_len) != 1 ||
      out_len != out.size())
    throw Error("digest failure");
  return out;
}

Bytes hmac_sha256(BytesView key, BytesView msg) {
  static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
  if (!mac) throw Error("HMAC unavailable");
  std::unique_ptr<EVP_MAC_CTX, CtxFree> ctx(EVP_MAC_CTX_new(mac));
  if (!ctx) throw Error("HMAC ctx");
  char digest_name[] = "SHA-256";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
      OSSL_PARAM_construct_end()};
  Bytes out(32);
  size_t out_len = 0;
  if (EVP_MAC_init(ctx.get(), key.data(), key.size(), params) != 1 ||
      (!msg.empty() && EVP_MAC_update(ctx.get(), msg.data(), msg.size()) != 1) ||
      EVP_MAC_final(ctx.get(), out.data(), &out_len, out.size()) != 1 ||
      out_len != 32)
    throw Error("HMAC failure");
  return out;
}

void check_key_len(BytesView k, uint32_t lambda, const char* who) {
  if (lambda % 8 != 0 || lambda == 0 || lambda > 256)
    throw ParamError(std::string(who) + ": bad lambda");
  if (k.size() != lambda / 8)
    throw ParamError(std::string(who) + ": key must be lambda/8 bytes");
}

}  // namespace

SubKeys derive_subkeys(BytesView master, uint32_t lambda) {
  check_key_len(master, lambda, "derive_subkeys");
  size_t len = lambda / 8;
  auto derive = [&](std::string_view label) {
    Bytes d = hmac_sha256(master, to_bytes(label));
    d.resize(len);
    return d;
  };
  return SubKeys{derive("NIMS/F1"), derive("NIMS/F2"), derive("NIMS/SE")};
}

Bytes prf_f1(BytesView k, uint64_t ctr, std::string_view w, uint32_t lambda) {
  check_key_len(k, lambda, "prf_f1");
  Bytes msg = u64_be(ctr);
  msg.insert(msg.end(), w.begin(), w.end());
  Bytes out = hmac_sha256(k, msg);
  out.resize(lambda / 8);
  return out;
}

Bytes prf_f2(BytesView k, BytesView ind, uint32_t lambda) {
  check_key_len(k, lambda, "prf_f2");
  if (ind.empty()) throw ParamError("prf_f2: empty identifier");
  Bytes out = hmac_sha256(k, ind);
  out.resize(lambda / 8);
  return out;
}

std::vector<uint8_t> hash_keyword(std::string_view w, uint32_t iota) {
  if (iota == 0 || iota > 256)
    throw ParamError("hash_keyword: iota out of range");
  Bytes d = digest(EVP_sha256(), to_bytes(w));
  std::vector<uint8_t> bits(iota);
  for (uint32_t i = 0; i < iota; ++i)
    bits[i] = (d[i / 8] >> (7 - i % 8)) & 1;
  return bits;
}

Bytes hash_h1(BytesView data) { return digest(EVP_sha512(), data); }

Bytes aead_encrypt(BytesView key, BytesView plaintext, Rng& rng) {
  if (key.size() != 32) throw ParamError("aead_encrypt: key must be 32 bytes");
  Bytes out = rng.bytes(kAeadNonceLen);
  std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx(EVP_CIPHER_CTX_new());
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         out.data()) != 1)
    throw Error("aead encrypt init");
  size_t at = out.size();
  out.resize(at + plaintext.size() + kAeadTagLen);
  int len = 0;
  if (!plaintext.empty() &&
      (EVP_EncryptUpdate(ctx.get(), out.data() + at, &len, plaintext.data(),
                         static_cast<int>(plaintext.size())) != 1 ||
       static_cast<size_t>(len) != plaintext.size()))
    throw Error("aead encrypt");
  int fin = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + at + len, &fin) != 1 || fin != 0)
    throw Error("aead encrypt final");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagLen,
                          out.data() + at + plaintext.size()) != 1)
    throw Error("aead tag");
  return out;
}

Bytes aead_decrypt(BytesView key, BytesView ciphertext) {
  if (key.size() != 32) throw ParamError("aead_decrypt: key must be 32 bytes");
  if (ciphertext.size() < kAeadOverhead)
    throw ParseError("aead_decrypt: ciphertext too short");
  const uint8_t* nonce = ciphertext.data();
  const uint8_t* body = ciphertext.data() + kAeadNonceLen;
  size_t body_len = ciphertext.size() - kAeadOverhead;
  Bytes tag(ciphertext.end() - kAeadTagLen, ciphertext.end());

  std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx(EVP_CIPHER_CTX_new());
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce) != 1)
    throw Error("aead decrypt init");
  Bytes out(body_len);
  int len = 0;
  if (body_len > 0 &&
      (EVP_DecryptUpdate(ctx.get(), out.data(), &len, body,
                         static_cast<int>(body_len)) != 1 ||
       static_cast<size_t>(len) != body_len))
    throw Error("aead decrypt");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagLen,
                          tag.data()) != 1)
    throw Error("aead set tag");
  int fin = 0;
  uint8_t finbuf[16];  // GCM final emits no bytes; buffer only for the API
  if (EVP_DecryptFinal_ex(ctx.get(), finbuf, &fin) != 1)
    throw AuthError("aead_decrypt: authentication failed");
  if (fin != 0) throw Error("aead decrypt final");
  return out;
}

}  // namespace nims
