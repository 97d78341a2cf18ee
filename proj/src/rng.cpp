#include "nims/rng.hpp"

#include <openssl/rand.h>

namespace nims {

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw ParamError("below(0)");
  // Rejection sampling over the largest multiple of bound.
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = u64();
  } while (v >= limit);
  return v % bound;
}

void SystemRng::fill(uint8_t* out, size_t n) {
  if (n == 0) return;
  if (RAND_bytes(out, static_cast<int>(n)) != 1)
    throw Error("system randomness unavailable");
}

void SeededRng::fill(uint8_t* out, size_t n) {
  // One generator step per byte keeps the stream independent of how
  // callers chunk their reads.
  for (size_t i = 0; i < n; ++i) out[i] = static_cast<uint8_t>(gen_());
}

}  // namespace nims
