#pragma once

#include <cstdint>
#include <string_view>

#include "nims/common.hpp"
#include "nims/rng.hpp"

namespace nims {

// Working keys derived from the owner's master key by domain separation.
struct SubKeys {
  Bytes k_f1;  // keyword-chain PRF
  Bytes k_f2;  // identifier PRF
  Bytes k_se;  // payload encryption
};

// HMAC-SHA-256(master, label) truncated to lambda/8 bytes per subkey.
SubKeys derive_subkeys(BytesView master, uint32_t lambda);

// PRF for per-epoch keyword chain heads: HMAC-SHA-256(k, be64(ctr) || w),
// truncated to lambda/8 bytes. The fixed-width counter keeps the message
// encoding prefix-free.
Bytes prf_f1(BytesView k, uint64_t ctr, std::string_view w, uint32_t lambda);

// PRF mapping a document identifier to its fixed-width encrypted-db handle.
Bytes prf_f2(BytesView k, BytesView ind, uint32_t lambda);

// Keyword fingerprint: SHA-256(w) truncated to iota bits, MSB first.
// Returned as a bit vector, bits[0] = most significant bit of the digest.
std::vector<uint8_t> hash_keyword(std::string_view w, uint32_t iota);

// Chain hash: SHA-512(data), giving 2*lambda bits at lambda = 256.
Bytes hash_h1(BytesView data);

// AES-256-GCM. Output layout: 12-byte nonce || ciphertext || 16-byte tag.
Bytes aead_encrypt(BytesView key, BytesView plaintext, Rng& rng);
// Throws AuthError on tag failure, ParseError if too short to contain
// nonce and tag.
Bytes aead_decrypt(BytesView key, BytesView ciphertext);

constexpr size_t kAeadNonceLen = 12;
constexpr size_t kAeadTagLen = 16;
constexpr size_t kAeadOverhead = kAeadNonceLen + kAeadTagLen;

}  // namespace nims
