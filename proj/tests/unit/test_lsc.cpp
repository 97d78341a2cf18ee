#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "nims/lsc.hpp"
#include "nims/rng.hpp"

using namespace nims;

namespace {
constexpr size_t kL = 32;  // lambda/8

// Store three chained blocks and return their keys, oldest first.
struct MiniChain {
  std::map<Bytes, Bytes> store;
  std::vector<Bytes> keys;
  std::vector<Bytes> datas;

  explicit MiniChain(Rng& rng, size_t n) {
    Bytes prev_key = chain_terminator(kL);
    for (size_t i = 0; i < n; ++i) {
      Bytes key = rng.bytes(kL);
      key[0] |= 1;
      Bytes data = rng.bytes(kL);
      ChainBlock b = encrypt_block(key, data, prev_key);
      store[b.addr] = b.val;
      keys.push_back(key);
      datas.push_back(data);
      prev_key = key;
    }
  }

  std::function<const Bytes*(const Bytes&)> lookup() const {
    return [this](const Bytes& addr) -> const Bytes* {
      auto it = store.find(addr);
      return it == store.end() ? nullptr : &it->second;
    };
  }
};

}  // namespace

TEST_CASE("block encrypt/decode round trips") {
  SeededRng rng(31);
  Bytes key = rng.bytes(kL);
  key[0] |= 1;
  Bytes data = rng.bytes(kL);
  Bytes kpr = rng.bytes(kL);
  ChainBlock b = encrypt_block(key, data, kpr);
  CHECK(b.addr.size() == 2 * kL);
  CHECK(b.val.size() == 2 * kL);
  BlockPayload p = decode_block(key, b.val, kL);
  CHECK(p.data == data);
  CHECK(p.kpr == kpr);
}

TEST_CASE("address and value derive from different hash domains") {
  SeededRng rng(32);
  Bytes key = rng.bytes(kL);
  key[0] |= 1;
  ChainBlock b = encrypt_block(key, chain_sentinel(kL), chain_terminator(kL));
  CHECK(b.addr != b.val);
  // same key, different data: same address, different value
  Bytes other(kL, 0x42);
  ChainBlock b2 = encrypt_block(key, other, chain_terminator(kL));
  CHECK(b2.addr == b.addr);
  CHECK(b2.val != b.val);
}

TEST_CASE("zero key is reserved for termination") {
  CHECK_THROWS_AS(encrypt_block(Bytes(kL, 0), Bytes(kL, 1), Bytes(kL, 0)),
                  ParamError);
  CHECK(chain_terminator(kL) == Bytes(kL, 0));
  CHECK(chain_sentinel(kL) == Bytes(kL, 0xff));
}

TEST_CASE("walk returns newest-first data fields and counts steps") {
  SeededRng rng(33);
  MiniChain chain(rng, 3);
  size_t steps = 0;
  auto datas = walk_chain(chain.lookup(), chain.keys.back(), kL, 10, &steps);
  REQUIRE(datas.size() == 3);
  CHECK(steps == 3);
  CHECK(datas[0] == chain.datas[2]);
  CHECK(datas[1] == chain.datas[1]);
  CHECK(datas[2] == chain.datas[0]);
}

TEST_CASE("walk from a middle key sees only the older suffix") {
  SeededRng rng(34);
  MiniChain chain(rng, 3);
  auto datas = walk_chain(chain.lookup(), chain.keys[1], kL, 10);
  REQUIRE(datas.size() == 2);
  CHECK(datas[0] == chain.datas[1]);
  CHECK(datas[1] == chain.datas[0]);
}

TEST_CASE("missing block breaks the walk but keeps partial data") {
  SeededRng rng(35);
  MiniChain chain(rng, 3);
  // delete the oldest block
  ChainBlock oldest = encrypt_block(chain.keys[0], chain.datas[0], chain_terminator(kL));
  chain.store.erase(oldest.addr);
  size_t steps = 0;
  try {
    walk_chain(chain.lookup(), chain.keys.back(), kL, 10, &steps);
    FAIL("expected BrokenChainError");
  } catch (const BrokenChainError& e) {
    CHECK(e.partial.size() == 2);
    CHECK(e.partial[0] == chain.datas[2]);
    CHECK(steps == 2);
  }
}

TEST_CASE("step budget caps rogue chains") {
  SeededRng rng(36);
  MiniChain chain(rng, 5);
  CHECK_THROWS_AS(walk_chain(chain.lookup(), chain.keys.back(), kL, 3),
                  BrokenChainError);
  CHECK_NOTHROW(walk_chain(chain.lookup(), chain.keys.back(), kL, 5));
}

TEST_CASE("walk rejects malformed head keys") {
  SeededRng rng(37);
  MiniChain chain(rng, 1);
  CHECK_THROWS_AS(walk_chain(chain.lookup(), Bytes(kL, 0), kL, 10), ParamError);
  CHECK_THROWS_AS(walk_chain(chain.lookup(), Bytes(kL - 1, 1), kL, 10), ParamError);
}
