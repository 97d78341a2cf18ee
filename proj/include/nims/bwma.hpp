#pragma once

#include <cstdint>
#include <vector>

#include "nims/common.hpp"

namespace nims {

// Plain bit vector, most significant bit first. Values are 0 or 1.
using BitVec = std::vector<uint8_t>;

// Pattern symbol: fixed bit or wildcard.
enum class Sym : uint8_t { Zero = 0, One = 1, Star = 2 };
using WildcardVec = std::vector<Sym>;

// Signed arithmetic form of a bit vector or pattern (one extra tail slot).
using IntVec = std::vector<int64_t>;

// value as a width-bit big-endian bit vector; value must fit.
BitVec binary_encode(uint64_t value, uint32_t width);

// Bits map 0 -> +1, 1 -> -1; a constant +1 is appended. Length m+1.
IntVec trans_index(const BitVec& bits);

// Pattern symbols map 0 -> +1, 1 -> -1, * -> 0; the appended tail is
// -(number of non-wildcard positions). A transformed index and a
// transformed pattern of equal source length then satisfy:
//   dot(trans_index(x), trans_query(p)) == -2 * (#fixed positions where
//   x disagrees with p)
// so the dot product is zero exactly on a wildcard match.
IntVec trans_query(const WildcardVec& pattern);

// Match by dot product. Vectors must have equal length.
bool bwma_match(const IntVec& index_vec, const IntVec& query_vec);

// Canonical decomposition of [lo, hi] into maximal aligned dyadic blocks,
// scanned left to right: each block is the widest power-of-two run that
// starts at the cursor, stays aligned, and fits in the range. Each block
// is a kappa-symbol pattern (fixed prefix, wildcard suffix). Requires
// lo <= hi and hi < 2^kappa. At most 2*kappa - 2 blocks for kappa >= 2.
std::vector<WildcardVec> wildcard_cover(uint64_t lo, uint64_t hi, uint32_t kappa);

}  // namespace nims
