#pragma once

#include <cstdint>
#include <vector>

#include "nims/bigint.hpp"
#include "nims/common.hpp"
#include "nims/rng.hpp"

namespace nims {

// Square matrix of arbitrary-precision integers, row major. Hidden
// indices, token elements, and blinding masks all live here. Masks and
// blinders are unit lower-triangular; products of those stay lower-
// triangular, but nothing forces a decoded matrix to be.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(uint32_t dim) : dim_(dim), cells_(size_t(dim) * dim) {}

  static IntMatrix identity(uint32_t dim);

  uint32_t dim() const { return dim_; }
  const BigInt& at(uint32_t i, uint32_t j) const { return cells_[size_t(i) * dim_ + j]; }
  BigInt& at(uint32_t i, uint32_t j) { return cells_[size_t(i) * dim_ + j]; }

  bool is_lower_triangular() const;

  bool operator==(const IntMatrix&) const = default;

  // Wire form: 2-byte big-endian dimension, then dim^2 signed bigints,
  // row major.
  void encode(Bytes& out) const;
  static IntMatrix decode(ByteReader& r);
  size_t encoded_size() const;

 private:
  uint32_t dim_ = 0;
  std::vector<BigInt> cells_;
};

// Generic product; skips zero entries so triangular operands pay only
// for their populated halves.
IntMatrix mul(const IntMatrix& a, const IntMatrix& b);

// trace(a * b) without forming the product: sum over a[i][k] * b[k][i].
BigInt trace_product(const IntMatrix& a, const IntMatrix& b);

// Random lower-triangular matrix with the given main diagonal; entries
// strictly below the diagonal are uniform in [-2^32, 2^32).
IntMatrix gen_low_tri(const std::vector<BigInt>& diag, Rng& rng);

// gen_low_tri with an all-ones diagonal: a random unimodular blinder.
IntMatrix gen_unit_low_tri(uint32_t dim, Rng& rng);

// Exact integer inverse of a unit lower-triangular matrix, by forward
// substitution. Entry growth is steep (roughly 31 bits per subdiagonal),
// which bounds practical dimensions; fine at this scheme's sizes.
IntMatrix unit_lower_inverse(const IntMatrix& a);

}  // namespace nims
