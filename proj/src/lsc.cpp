#include "nims/lsc.hpp"

#include <algorithm>

#include "nims/crypto.hpp"

namespace nims {

namespace {

bool all_zero(BytesView b) {
  return std::all_of(b.begin(), b.end(), [](uint8_t x) { return x == 0; });
}

Bytes keyed_hash(BytesView key, uint8_t suffix) {
  Bytes in(key.begin(), key.end());
  in.push_back(suffix);
  return hash_h1(in);
}

}  // namespace

Bytes chain_sentinel(size_t lambda_bytes) { return Bytes(lambda_bytes, 0xFF); }
Bytes chain_terminator(size_t lambda_bytes) { return Bytes(lambda_bytes, 0x00); }

ChainBlock encrypt_block(BytesView key, BytesView data, BytesView kpr) {
  size_t lb = key.size();
  if (lb == 0 || data.size() != lb || kpr.size() != lb)
    throw ParamError("encrypt_block: key/data/kpr must share lambda width");
  if (all_zero(key)) throw ParamError("encrypt_block: zero key is the terminator");

  ChainBlock out;
  out.addr = keyed_hash(key, 0x00);
  out.val = keyed_hash(key, 0x01);
  if (out.val.size() != 2 * lb)
    throw ParamError("encrypt_block: lambda incompatible with chain hash width");
  for (size_t i = 0; i < lb; ++i) out.val[i] ^= data[i];
  for (size_t i = 0; i < lb; ++i) out.val[lb + i] ^= kpr[i];
  return out;
}

BlockPayload decode_block(BytesView key, BytesView val, size_t lambda_bytes) {
  if (key.size() != lambda_bytes || val.size() != 2 * lambda_bytes)
    throw ParamError("decode_block: bad widths");
  Bytes mask = keyed_hash(key, 0x01);
  BlockPayload out;
  out.data.resize(lambda_bytes);
  out.kpr.resize(lambda_bytes);
  for (size_t i = 0; i < lambda_bytes; ++i) out.data[i] = val[i] ^ mask[i];
  for (size_t i = 0; i < lambda_bytes; ++i)
    out.kpr[i] = val[lambda_bytes + i] ^ mask[lambda_bytes + i];
  return out;
}

std::vector<Bytes> walk_chain(
    const std::function<const Bytes*(const Bytes&)>& lookup, BytesView head_key,
    size_t lambda_bytes, size_t max_steps, size_t* steps) {
  if (head_key.size() != lambda_bytes || all_zero(head_key))
    throw ParamError("walk_chain: head key must be lambda bits and nonzero");

  std::vector<Bytes> fields;
  size_t n = 0;
  Bytes key(head_key.begin(), head_key.end());
  for (;;) {
    if (n >= max_steps) {
      if (steps) *steps = n;
      throw BrokenChainError("walk_chain: step budget exceeded", std::move(fields));
    }
    Bytes addr = keyed_hash(key, 0x00);
    const Bytes* val = lookup(addr);
    if (!val) {
      if (steps) *steps = n;
      throw BrokenChainError("walk_chain: missing block", std::move(fields));
    }
    BlockPayload p = decode_block(key, *val, lambda_bytes);
    ++n;
    fields.push_back(std::move(p.data));
    if (all_zero(p.kpr)) break;
    key = std::move(p.kpr);
  }
  if (steps) *steps = n;
  return fields;
}

}  // namespace nims
