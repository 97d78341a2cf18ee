#include <doctest.h>

#include "helpers.hpp"
#include "nims/crypto.hpp"
#include "nims/hk.hpp"

using namespace nims;
using nims::testutil::pat;

namespace {

// Small dimensions keep these tests fast; the algebra is size-agnostic.
const SchemeParams kP{256, 8, 4, 0};

BigInt key_int(const Bytes& key) {
  BigInt v = 0;
  for (uint8_t b : key) v = (v << 8) + b;
  return v;
}

}  // namespace

TEST_CASE("matching probe recovers exactly the hidden key integer") {
  SeededRng rng(21);
  HkMasks masks = gen_masks(kP.dim(), rng);
  Bytes key = rng.bytes(32);
  key[0] |= 1;  // nonzero
  HiddenIndex idx = hk_data(masks, kP, "cat", 5, key, rng);

  // Exact-point pattern and all-wildcard pattern both cover ts = 5.
  for (const auto& p : {pat("0101"), pat("****"), pat("01**")}) {
    IntMatrix elem = hk_token_element(masks, kP, "cat", p, rng);
    CHECK(hk_probe(idx, elem) == key_int(key));
  }
}

TEST_CASE("mismatched keyword or timestamp probes strictly negative") {
  SeededRng rng(22);
  HkMasks masks = gen_masks(kP.dim(), rng);
  Bytes key = rng.bytes(32);
  key[0] |= 1;
  HiddenIndex idx = hk_data(masks, kP, "cat", 5, key, rng);

  REQUIRE(hash_keyword("cat", 8) != hash_keyword("dog", 8));
  CHECK(hk_probe(idx, hk_token_element(masks, kP, "dog", pat("****"), rng)) < 0);
  CHECK(hk_probe(idx, hk_token_element(masks, kP, "cat", pat("0100"), rng)) < 0);
  CHECK(hk_probe(idx, hk_token_element(masks, kP, "cat", pat("1***"), rng)) < 0);
}

TEST_CASE("trace identity: masked trace equals plain diagonal dot product") {
  SeededRng rng(23);
  HkMasks masks = gen_masks(kP.dim(), rng);
  Bytes key = rng.bytes(32);
  key[0] |= 1;
  BigInt u = key_int(key);
  BigInt r_u = u + 12345;
  BigInt r_m = 7;

  auto du = hk_data_diag(kP, "cat", 5, key, r_u);
  auto dq = hk_query_diag(kP, "cat", pat("01**"), r_m);
  REQUIRE(du.size() == kP.dim());
  REQUIRE(dq.size() == kP.dim());

  IntMatrix u_star = hk_wrap_data(masks, du, rng);
  IntMatrix q_star = hk_wrap_query(masks, dq, rng);
  BigInt dot = 0;
  for (size_t i = 0; i < du.size(); ++i) dot += du[i] * dq[i];
  CHECK(trace_product(u_star, q_star) == dot);
  CHECK(dot == u);  // covering block: the scaled terms cancel

  // wrapped matrices are not the plain ones
  IntMatrix plain = gen_low_tri(du, rng);
  CHECK(u_star.at(kP.dim() - 1, kP.dim() - 1) == u);  // diagonal survives masking
  CHECK(trace_product(u_star, q_star) == trace_product(plain, gen_low_tri(dq, rng)));
}

TEST_CASE("token covers a range with shuffled cover blocks") {
  SeededRng rng(24);
  HkMasks masks = gen_masks(kP.dim(), rng);
  // [1, 6] over 4 bits: 4 cover blocks
  HiddenToken tok = hk_token(masks, kP, "cat", 1, 6, rng);
  CHECK(tok.elems.size() == 4);
  for (const auto& e : tok.elems) CHECK(e.dim() == kP.dim());

  Bytes key(32, 0);
  key[31] = 9;
  for (uint64_t ts = 0; ts < 16; ++ts) {
    HiddenIndex idx = hk_data(masks, kP, "cat", ts, key, rng);
    HkQueryResult res = hk_query(idx, tok, kP.lambda);
    CHECK(res.flag == (ts >= 1 && ts <= 6));
    if (res.flag) CHECK(res.key == key);
    CHECK(res.probes >= 1);
    CHECK(res.probes <= tok.elems.size());
    if (!res.flag) CHECK(res.probes == tok.elems.size());
  }
}

TEST_CASE("hk_query returns the key padded to lambda bits") {
  SeededRng rng(25);
  HkMasks masks = gen_masks(kP.dim(), rng);
  Bytes key(32, 0);
  key[31] = 1;  // tiny integer, needs full zero padding
  HiddenIndex idx = hk_data(masks, kP, "w", 3, key, rng);
  HiddenToken tok = hk_token(masks, kP, "w", 0, 15, rng);
  HkQueryResult res = hk_query(idx, tok, kP.lambda);
  REQUIRE(res.flag);
  CHECK(res.key.size() == 32);
  CHECK(res.key == key);
}

TEST_CASE("hk_data validates its inputs") {
  SeededRng rng(26);
  HkMasks masks = gen_masks(kP.dim(), rng);
  Bytes key = rng.bytes(32);
  key[0] |= 1;
  CHECK_THROWS_AS(hk_data(masks, kP, "w", 16, key, rng), ParamError);  // ts too wide
  CHECK_THROWS_AS(hk_data(masks, kP, "w", 0, Bytes(31), rng), ParamError);
  CHECK_THROWS_AS(hk_data(masks, kP, "w", 0, Bytes(32, 0), rng), ParamError);
  CHECK_THROWS_AS(hk_token_element(masks, kP, "w", pat("011"), rng), ParamError);
}

TEST_CASE("masks are unimodular and mutually inverse") {
  SeededRng rng(27);
  HkMasks masks = gen_masks(10, rng);
  CHECK(mul(masks.m1, masks.m1_inv) == IntMatrix::identity(10));
  CHECK(mul(masks.m2, masks.m2_inv) == IntMatrix::identity(10));
  CHECK(masks.m1.is_lower_triangular());
  CHECK(masks.m2.is_lower_triangular());
  for (uint32_t i = 0; i < 10; ++i) {
    CHECK(masks.m1.at(i, i) == 1);
    CHECK(masks.m2.at(i, i) == 1);
  }
  CHECK(masks.m1 != masks.m2);
}

TEST_CASE("repeated blinding never repeats bytes") {
  SeededRng rng(28);
  HkMasks masks = gen_masks(kP.dim(), rng);
  Bytes key = rng.bytes(32);
  key[0] |= 1;
  Bytes a, b;
  hk_data(masks, kP, "cat", 5, key, rng).mat.encode(a);
  hk_data(masks, kP, "cat", 5, key, rng).mat.encode(b);
  CHECK(a != b);
}
