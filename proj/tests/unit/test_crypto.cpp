#include <doctest.h>

#include "helpers.hpp"
#include "nims/crypto.hpp"
#include "nims/rng.hpp"

using namespace nims;
using nims::testutil::load_tsv;

// Frozen fixtures generated by an independent implementation
// (scripts/gen_crypto_vectors.py); every primitive must replay them.
TEST_CASE("committed crypto vectors replay") {
  auto rows = load_tsv("crypto.tsv");
  REQUIRE(rows.size() > 20);
  int covered = 0;
  for (const auto& row : rows) {
    const std::string& op = row[0];
    if (op == "subkeys") {
      SubKeys sk = derive_subkeys(hex_decode(row[1]), 256);
      CHECK(sk.k_f1 == hex_decode(row[2]));
      CHECK(sk.k_f2 == hex_decode(row[3]));
      CHECK(sk.k_se == hex_decode(row[4]));
    } else if (op == "prf_f1") {
      Bytes w = hex_decode(row[3]);
      std::string ws(w.begin(), w.end());
      CHECK(prf_f1(hex_decode(row[1]), std::stoull(row[2]), ws, 256) ==
            hex_decode(row[4]));
    } else if (op == "prf_f2") {
      CHECK(prf_f2(hex_decode(row[1]), hex_decode(row[2]), 256) ==
            hex_decode(row[3]));
    } else if (op == "hash_keyword") {
      Bytes w = hex_decode(row[1]);
      std::string ws(w.begin(), w.end());
      auto got = hash_keyword(ws, uint32_t(std::stoul(row[2])));
      REQUIRE(got.size() == row[3].size());
      for (size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == uint8_t(row[3][i] - '0'));
    } else if (op == "hash_h1") {
      CHECK(hash_h1(hex_decode(row[1])) == hex_decode(row[2]));
    } else if (op == "aead_dec") {
      CHECK(aead_decrypt(hex_decode(row[1]), hex_decode(row[2])) ==
            hex_decode(row[3]));
    } else if (op == "aead_fail") {
      CHECK_THROWS_AS(aead_decrypt(hex_decode(row[1]), hex_decode(row[2])),
                      AuthError);
    } else {
      FAIL("unknown vector op: ", op);
    }
    covered += 1;
  }
  CHECK(covered == int(rows.size()));
}

TEST_CASE("aead round trips and authenticates") {
  SystemRng rng;
  Bytes key = rng.bytes(32);
  for (size_t n : {size_t(0), size_t(1), size_t(300)}) {
    Bytes pt = rng.bytes(n);
    Bytes ct = aead_encrypt(key, pt, rng);
    CHECK(ct.size() == n + kAeadOverhead);
    CHECK(aead_decrypt(key, ct) == pt);
    Bytes tampered = ct;
    tampered[tampered.size() / 2] ^= 1;
    CHECK_THROWS_AS(aead_decrypt(key, tampered), AuthError);
    Bytes wrong_key = rng.bytes(32);
    CHECK_THROWS_AS(aead_decrypt(wrong_key, ct), AuthError);
  }
  CHECK_THROWS_AS(aead_decrypt(key, Bytes(kAeadOverhead - 1)), ParseError);
}

TEST_CASE("aead hides equal plaintexts behind fresh nonces") {
  SystemRng rng;
  Bytes key = rng.bytes(32);
  Bytes pt = to_bytes("same plaintext");
  CHECK(aead_encrypt(key, pt, rng) != aead_encrypt(key, pt, rng));
}

TEST_CASE("keyword fingerprint is a bit-prefix and keyword-sensitive") {
  auto full = hash_keyword("cat", 256);
  auto short8 = hash_keyword("cat", 8);
  REQUIRE(full.size() == 256);
  REQUIRE(short8.size() == 8);
  for (size_t i = 0; i < 8; ++i) CHECK(full[i] == short8[i]);
  CHECK(hash_keyword("cat", 64) != hash_keyword("dog", 64));
}

TEST_CASE("prf key width is enforced") {
  CHECK_THROWS_AS(prf_f1(Bytes(16), 0, "w", 256), ParamError);
  CHECK_THROWS_AS(derive_subkeys(Bytes(16), 256), ParamError);
}
