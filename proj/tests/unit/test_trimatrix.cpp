#include <doctest.h>

#include "helpers.hpp"
#include "nims/rng.hpp"
#include "nims/trimatrix.hpp"

using namespace nims;

namespace {

IntMatrix random_dense(uint32_t dim, Rng& rng) {
  IntMatrix m(dim);
  for (uint32_t i = 0; i < dim; ++i)
    for (uint32_t j = 0; j < dim; ++j)
      m.at(i, j) = bigint_from_i64(int64_t(rng.u64()) >> 20);
  return m;
}

// Textbook O(n^3) product, the oracle for mul().
IntMatrix naive_mul(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.dim());
  for (uint32_t i = 0; i < a.dim(); ++i)
    for (uint32_t j = 0; j < a.dim(); ++j) {
      BigInt s = 0;
      for (uint32_t k = 0; k < a.dim(); ++k) s += a.at(i, k) * b.at(k, j);
      c.at(i, j) = s;
    }
  return c;
}

BigInt naive_trace(const IntMatrix& m) {
  BigInt t = 0;
  for (uint32_t i = 0; i < m.dim(); ++i) t += m.at(i, i);
  return t;
}

}  // namespace

TEST_CASE("mul agrees with the naive product") {
  SeededRng rng(11);
  for (uint32_t dim : {1u, 2u, 5u, 9u}) {
    IntMatrix a = random_dense(dim, rng);
    IntMatrix b = random_dense(dim, rng);
    CHECK(mul(a, b) == naive_mul(a, b));
  }
}

TEST_CASE("trace_product equals trace of the full product") {
  SeededRng rng(12);
  for (uint32_t dim : {1u, 3u, 8u}) {
    IntMatrix a = random_dense(dim, rng);
    IntMatrix b = random_dense(dim, rng);
    CHECK(trace_product(a, b) == naive_trace(naive_mul(a, b)));
  }
}

TEST_CASE("identity is neutral") {
  SeededRng rng(13);
  IntMatrix a = random_dense(6, rng);
  IntMatrix id = IntMatrix::identity(6);
  CHECK(mul(a, id) == a);
  CHECK(mul(id, a) == a);
}

TEST_CASE("gen_low_tri honors the requested diagonal and stays triangular") {
  SeededRng rng(14);
  std::vector<BigInt> diag{3, -7, 0, BigInt(1) << 80};
  IntMatrix m = gen_low_tri(diag, rng);
  REQUIRE(m.dim() == 4);
  CHECK(m.is_lower_triangular());
  for (uint32_t i = 0; i < 4; ++i) CHECK(m.at(i, i) == diag[i]);
  int64_t lo = -(int64_t(1) << 32), hi = int64_t(1) << 32;
  for (uint32_t i = 0; i < 4; ++i)
    for (uint32_t j = 0; j < i; ++j) {
      CHECK(m.at(i, j) >= lo);
      CHECK(m.at(i, j) < hi);
    }
}

TEST_CASE("unit lower inverse is exact over the integers") {
  SeededRng rng(15);
  for (uint32_t dim : {1u, 2u, 10u, 30u}) {
    IntMatrix m = gen_unit_low_tri(dim, rng);
    IntMatrix inv = unit_lower_inverse(m);
    CHECK(mul(m, inv) == IntMatrix::identity(dim));
    CHECK(mul(inv, m) == IntMatrix::identity(dim));
  }
}

TEST_CASE("unit lower inverse rejects non-unit or non-triangular input") {
  IntMatrix bad(2);
  bad.at(0, 0) = 2;
  bad.at(1, 1) = 1;
  CHECK_THROWS_AS(unit_lower_inverse(bad), ParamError);
  IntMatrix upper = IntMatrix::identity(2);
  upper.at(0, 1) = 5;
  CHECK_THROWS_AS(unit_lower_inverse(upper), ParamError);
}

TEST_CASE("triangular products preserve diagonals elementwise") {
  // The core trace identity leans on this: for lower-triangular factors
  // the product diagonal is the elementwise diagonal product.
  SeededRng rng(16);
  std::vector<BigInt> d1{2, 5, -3, 11, 7};
  std::vector<BigInt> d2{1, -1, 4, 9, 2};
  IntMatrix a = gen_low_tri(d1, rng);
  IntMatrix b = gen_low_tri(d2, rng);
  IntMatrix p = mul(a, b);
  CHECK(p.is_lower_triangular());
  BigInt dot = 0;
  for (uint32_t i = 0; i < 5; ++i) {
    CHECK(p.at(i, i) == d1[i] * d2[i]);
    dot += d1[i] * d2[i];
  }
  CHECK(trace_product(a, b) == dot);
}

TEST_CASE("matrix wire form round trips") {
  SeededRng rng(17);
  IntMatrix m = random_dense(7, rng);
  Bytes enc;
  m.encode(enc);
  CHECK(enc.size() == m.encoded_size());
  ByteReader r(enc);
  CHECK(IntMatrix::decode(r) == m);
  CHECK(r.done());
}

TEST_CASE("matrix decode rejects junk") {
  Bytes zero_dim = hex_decode("0000");
  ByteReader r1(zero_dim);
  CHECK_THROWS_AS(IntMatrix::decode(r1), ParseError);
  Bytes truncated = hex_decode("0002" "0000000000");  // 1 of 4 cells
  ByteReader r2(truncated);
  CHECK_THROWS_AS(IntMatrix::decode(r2), ParseError);
}
