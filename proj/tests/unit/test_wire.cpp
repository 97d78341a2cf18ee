#include <doctest.h>

#include "helpers.hpp"
#include "nims/roles.hpp"
#include "nims/wire.hpp"

using namespace nims;

namespace {
const SchemeParams kP{256, 8, 4, 0};

AddBatch sample_batch(Rng& rng) {
  // params-shaped batch without needing an owner
  AddBatch b;
  b.epoch_ts = 9;
  Bytes handle = rng.bytes(kP.id_len());
  b.dic_entries.emplace_back(handle, rng.bytes(kP.id_len() + kAeadOverhead));
  b.dic_entries.emplace_back(rng.bytes(2 * kP.id_len()), rng.bytes(2 * kP.id_len()));
  std::vector<BigInt> diag(kP.dim(), 1);
  b.new_mat.push_back(gen_low_tri(diag, rng));
  return b;
}
}  // namespace

TEST_CASE("frames round trip and signal incompleteness") {
  Frame f{MsgType::kPing, Bytes{1, 2, 3}};
  Bytes enc = encode_frame(f);
  CHECK(enc.size() == 4 + 1 + 3);
  auto dec = try_decode_frame(enc);
  REQUIRE(dec.has_value());
  CHECK(dec->frame.type == MsgType::kPing);
  CHECK(dec->frame.body == f.body);
  CHECK(dec->consumed == enc.size());

  // any strict prefix is "need more data"
  for (size_t cut = 0; cut < enc.size(); ++cut) {
    Bytes part(enc.begin(), enc.begin() + ptrdiff_t(cut));
    CHECK_FALSE(try_decode_frame(part).has_value());
  }

  // trailing bytes stay untouched
  Bytes two = enc;
  two.insert(two.end(), enc.begin(), enc.end());
  auto first = try_decode_frame(two);
  REQUIRE(first.has_value());
  CHECK(first->consumed == enc.size());
}

TEST_CASE("frame decode rejects absurd lengths") {
  Bytes zero_len = hex_decode("00000000");
  CHECK_THROWS_AS(try_decode_frame(zero_len), ParseError);
  Bytes huge = hex_decode("ffffffff" "01");
  CHECK_THROWS_AS(try_decode_frame(huge), ParseError);
}

TEST_CASE("add batch round trips over the wire codec") {
  SeededRng rng(61);
  AddBatch b = sample_batch(rng);
  Bytes body = encode_add(b, kP);
  AddBatch back = decode_add(body, kP);
  CHECK(back.epoch_ts == b.epoch_ts);
  CHECK(back.dic_entries == b.dic_entries);
  CHECK(back.new_mat == b.new_mat);
}

TEST_CASE("add decode rejects malformed entries") {
  SeededRng rng(62);
  AddBatch b = sample_batch(rng);
  Bytes body = encode_add(b, kP);
  Bytes trunc(body.begin(), body.end() - 1);
  CHECK_THROWS_AS(decode_add(trunc, kP), ParseError);
  Bytes junk = body;
  junk.push_back(0);
  CHECK_THROWS_AS(decode_add(junk, kP), ParseError);

  AddBatch bad = b;
  bad.dic_entries[0].first.pop_back();  // wrong handle width
  CHECK_THROWS_AS(decode_add(encode_add(bad, kP), kP), Error);
}

TEST_CASE("delete and results codecs round trip") {
  SeededRng rng(63);
  Bytes eid = rng.bytes(kP.id_len());
  CHECK(decode_delete(encode_delete(eid), kP) == eid);
  CHECK_THROWS_AS(decode_delete(Bytes(7), kP), ParseError);

  std::vector<Bytes> cts{rng.bytes(40), Bytes{}, rng.bytes(1)};
  CHECK(decode_results(encode_results(cts)) == cts);
  CHECK(decode_results(encode_results({})).empty());
}

TEST_CASE("search token codec enforces element count and dimension") {
  SeededRng rng(64);
  HiddenToken tok;
  std::vector<BigInt> diag(kP.dim(), 2);
  tok.elems.push_back(gen_low_tri(diag, rng));
  tok.elems.push_back(gen_low_tri(diag, rng));
  HiddenToken back = decode_search(encode_search(tok), kP);
  CHECK(back.elems == tok.elems);

  HiddenToken empty;
  CHECK_THROWS_AS(decode_search(encode_search(empty), kP), ParseError);

  HiddenToken oversized;
  for (uint32_t i = 0; i < 2 * kP.kappa + 1; ++i)
    oversized.elems.push_back(tok.elems[0]);
  CHECK_THROWS_AS(decode_search(encode_search(oversized), kP), ParseError);

  HiddenToken wrong_dim;
  wrong_dim.elems.push_back(gen_low_tri(std::vector<BigInt>(5, 1), rng));
  CHECK_THROWS_AS(decode_search(encode_search(wrong_dim), kP), ParseError);
}

TEST_CASE("ack, pong, and error codecs round trip") {
  auto [entries, mats] = decode_add_ok(encode_add_ok(7, 3));
  CHECK(entries == 7);
  CHECK(mats == 3);
  CHECK(decode_delete_ok(encode_delete_ok(true)));
  CHECK_FALSE(decode_delete_ok(encode_delete_ok(false)));
  CHECK_THROWS_AS(decode_delete_ok(Bytes{2}), ParseError);

  PongInfo info{123456, 42, 99999};
  PongInfo back = decode_pong(encode_pong(info));
  CHECK(back.epoch_ts == info.epoch_ts);
  CHECK(back.mat_count == info.mat_count);
  CHECK(back.cdb_count == info.cdb_count);

  WireError err = decode_error(encode_error(ErrCode::kBrokenChain, "chain gap"));
  CHECK(err.code == ErrCode::kBrokenChain);
  CHECK(err.message == "chain gap");
}
