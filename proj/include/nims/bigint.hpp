#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "nims/common.hpp"

namespace nims {

using BigInt = mpz_class;

static_assert(sizeof(long) == 8, "LP64 platform expected");

inline BigInt bigint_from_i64(int64_t v) { return BigInt(static_cast<long>(v)); }
inline BigInt bigint_from_u64(uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

// Wire form: sign byte (0x00 nonneg, 0x01 negative), 4-byte big-endian
// magnitude length, then the magnitude big-endian with no leading zeros.
// Zero encodes as sign 0x00 with empty magnitude.
void bigint_encode(Bytes& out, const BigInt& v);
BigInt bigint_decode(ByteReader& r);

inline Bytes bigint_encode(const BigInt& v) {
  Bytes out;
  bigint_encode(out, v);
  return out;
}

}  // namespace nims
