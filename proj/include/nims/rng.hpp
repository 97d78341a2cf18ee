#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "nims/common.hpp"

namespace nims {

// Randomness source. All scheme operations draw through this interface so
// tests can substitute a deterministic stream.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(uint8_t* out, size_t n) = 0;

  Bytes bytes(size_t n) {
    Bytes out(n);
    if (n) fill(out.data(), n);
    return out;
  }
  uint64_t u64() {
    uint8_t buf[8];
    fill(buf, 8);
    uint64_t v = 0;
    for (uint8_t b : buf) v = (v << 8) | b;
    return v;
  }
  // Uniform in [0, bound). bound must be nonzero.
  uint64_t below(uint64_t bound);
};

// OS-backed randomness (thread-safe; each call reads fresh entropy).
class SystemRng final : public Rng {
 public:
  void fill(uint8_t* out, size_t n) override;
};

// Deterministic stream seeded from a 64-bit value; for tests and replays.
class SeededRng final : public Rng {
 public:
  explicit SeededRng(uint64_t seed) : gen_(seed) {}
  void fill(uint8_t* out, size_t n) override;

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates over a vector, drawing from the given source.
template <class T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace nims
