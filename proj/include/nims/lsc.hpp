#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nims/common.hpp"

namespace nims {

// A chain walk hit a dangling link: an address the store does not hold,
// or a walk that exceeded the step budget. Carries whatever data fields
// were recovered before the break.
class BrokenChainError : public IntegrityError {
 public:
  BrokenChainError(const std::string& msg, std::vector<Bytes> partial)
      : IntegrityError(msg), partial(std::move(partial)) {}
  std::vector<Bytes> partial;
};

// One encrypted cell of a keyword's storage chain.
struct ChainBlock {
  Bytes addr;  // 2*lambda bits
  Bytes val;   // 2*lambda bits
};

struct BlockPayload {
  Bytes data;  // lambda bits: an encrypted-db handle, or all-ones sentinel
  Bytes kpr;   // lambda bits: previous block's key, all-zero terminates
};

// Address and value derive from one block key k (lambda bits, nonzero):
//   addr = H1(k || 0x00)
//   val  = H1(k || 0x01) xor (data || kpr)
// so holding k reveals exactly this block and the key of its predecessor.
ChainBlock encrypt_block(BytesView key, BytesView data, BytesView kpr);

BlockPayload decode_block(BytesView key, BytesView val, size_t lambda_bytes);

// All-ones data field marking an epoch boundary block.
Bytes chain_sentinel(size_t lambda_bytes);
// All-zero key terminating a chain.
Bytes chain_terminator(size_t lambda_bytes);

// Follow the chain from head_key, newest block first, collecting data
// fields until the terminator. lookup returns the stored value for an
// address, or nullptr. steps, when given, receives the number of blocks
// decoded (also filled when the walk throws).
std::vector<Bytes> walk_chain(
    const std::function<const Bytes*(const Bytes&)>& lookup, BytesView head_key,
    size_t lambda_bytes, size_t max_steps, size_t* steps = nullptr);

}  // namespace nims
