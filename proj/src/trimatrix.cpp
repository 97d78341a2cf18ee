#include "nims/trimatrix.hpp"

namespace nims {

IntMatrix IntMatrix::identity(uint32_t dim) {
  IntMatrix m(dim);
  for (uint32_t i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

bool IntMatrix::is_lower_triangular() const {
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = i + 1; j < dim_; ++j)
      if (sgn(at(i, j)) != 0) return false;
  return true;
}

void IntMatrix::encode(Bytes& out) const {
  if (dim_ > 0xFFFF) throw ParamError("matrix too large to encode");
  put_u16_be(out, static_cast<uint16_t>(dim_));
  for (const BigInt& v : cells_) bigint_encode(out, v);
}

IntMatrix IntMatrix::decode(ByteReader& r) {
  uint16_t dim = r.u16();
  if (dim == 0) throw ParseError("matrix dimension zero");
  IntMatrix m(dim);
  for (BigInt& v : m.cells_) v = bigint_decode(r);
  return m;
}

size_t IntMatrix::encoded_size() const {
  size_t total = 2;
  for (const BigInt& v : cells_) {
    size_t mag = sgn(v) == 0 ? 0 : (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    total += 5 + mag;
  }
  return total;
}

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.dim() != b.dim()) throw ParamError("mul: dimension mismatch");
  uint32_t n = a.dim();
  IntMatrix c(n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t k = 0; k < n; ++k) {
      const BigInt& aik = a.at(i, k);
      if (sgn(aik) == 0) continue;  // triangular operands skip half the work
      for (uint32_t j = 0; j < n; ++j) {
        const BigInt& bkj = b.at(k, j);
        if (sgn(bkj) == 0) continue;
        c.at(i, j) += aik * bkj;  // gmpxx folds this into one addmul
      }
    }
  return c;
}

BigInt trace_product(const IntMatrix& a, const IntMatrix& b) {
  if (a.dim() != b.dim()) throw ParamError("trace_product: dimension mismatch");
  uint32_t n = a.dim();
  BigInt acc = 0;
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t k = 0; k < n; ++k) acc += a.at(i, k) * b.at(k, i);
  return acc;
}

IntMatrix gen_low_tri(const std::vector<BigInt>& diag, Rng& rng) {
  uint32_t n = static_cast<uint32_t>(diag.size());
  if (n == 0) throw ParamError("gen_low_tri: empty diagonal");
  IntMatrix m(n);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < i; ++j) {
      // uniform in [-2^32, 2^32)
      long hi33 = static_cast<long>(rng.below(uint64_t(1) << 33));
      m.at(i, j) = BigInt(hi33 - (1L << 32));
    }
    m.at(i, i) = diag[i];
  }
  return m;
}

IntMatrix gen_unit_low_tri(uint32_t dim, Rng& rng) {
  return gen_low_tri(std::vector<BigInt>(dim, BigInt(1)), rng);
}

IntMatrix unit_lower_inverse(const IntMatrix& a) {
  uint32_t n = a.dim();
  for (uint32_t i = 0; i < n; ++i)
    if (a.at(i, i) != 1) throw ParamError("unit_lower_inverse: diagonal not 1");
  if (!a.is_lower_triangular())
    throw ParamError("unit_lower_inverse: not lower-triangular");
  // Column-by-column forward substitution: X[i][j] solves (A X)[i][j] = δij.
  IntMatrix x(n);
  for (uint32_t j = 0; j < n; ++j) {
    x.at(j, j) = 1;
    for (uint32_t i = j + 1; i < n; ++i) {
      BigInt acc = 0;
      for (uint32_t k = j; k < i; ++k) acc += a.at(i, k) * x.at(k, j);
      x.at(i, j) = -acc;
    }
  }
  return x;
}

}  // namespace nims
