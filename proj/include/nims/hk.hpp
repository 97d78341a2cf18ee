#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nims/bwma.hpp"
#include "nims/params.hpp"
#include "nims/rng.hpp"
#include "nims/trimatrix.hpp"

namespace nims {

// Owner/user masking matrices. m1 and m2 are unit lower-triangular; the
// inverses are exact over the integers.
struct HkMasks {
  IntMatrix m1, m2, m1_inv, m2_inv;
};

HkMasks gen_masks(uint32_t dim, Rng& rng);

// Blinded (keyword, timestamp) index: a single masked matrix.
struct HiddenIndex {
  IntMatrix mat;
};

// Blinded range query: one masked matrix per block of the range's dyadic
// cover. Elements are probed independently.
struct HiddenToken {
  std::vector<IntMatrix> elems;
};

// Blind one (keyword, timestamp, chain-head key) triple.
//
// The plain vector is trans_index(hash_keyword(w) || binary_encode(ts)).
// Its entries are scaled by a random r_u chosen strictly above the head
// key's integer value u, u itself rides in the last diagonal slot, and the
// matrix is wrapped as m1 * B * U * B * m2 with one fresh unit lower-
// triangular blinder B on both sides. Unit diagonals everywhere mean the
// wrap preserves the diagonal, which is all the probe reads.
HiddenIndex hk_data(const HkMasks& masks, const SchemeParams& params,
                    std::string_view w, uint64_t ts, BytesView key, Rng& rng);

// Blind one cover block of a range query for keyword w.
//
// The plain vector is trans_query(keyword bits as fixed symbols ||
// ts_pattern); entries are scaled by a random positive r_m and the last
// diagonal slot is 1, so a probe against a hidden index evaluates to
//   r_u * r_m * dot + u
// where dot is the wildcard-match dot product: 0 on match (probe == u,
// the hidden key), strictly negative otherwise (probe < 0, since
// r_u > u). Wrapped as m2_inv * B * Q * B * m1_inv with a fresh blinder.
IntMatrix hk_token_element(const HkMasks& masks, const SchemeParams& params,
                           std::string_view w, const WildcardVec& ts_pattern,
                           Rng& rng);

// Full token: one element per block of wildcard_cover(lo, hi, kappa),
// in shuffled order (element order would otherwise hint at range shape).
HiddenToken hk_token(const HkMasks& masks, const SchemeParams& params,
                     std::string_view w, uint64_t lo, uint64_t hi, Rng& rng);

// Probe one token element against one hidden index: the raw trace value.
// Equals the hidden head key's integer value exactly when (keyword,
// timestamp) matches the element's block; strictly negative otherwise.
BigInt hk_probe(const HiddenIndex& index, const IntMatrix& token_elem);

// Probe a whole token, stopping at the first positive trace. On a hit,
// key is the recovered head key as lambda bits big-endian. probes counts
// trace evaluations. Throws IntegrityError if a positive trace does not
// fit lambda bits (corrupt index or mismatched parameters).
struct HkQueryResult {
  bool flag = false;
  Bytes key;
  size_t probes = 0;
};
HkQueryResult hk_query(const HiddenIndex& index, const HiddenToken& token,
                       uint32_t lambda);

// Exposed plumbing for white-box tests of the trace algebra: the plain
// diagonals fed to gen_low_tri, and the mask-conjugation wrappers.
std::vector<BigInt> hk_data_diag(const SchemeParams& params, std::string_view w,
                                 uint64_t ts, BytesView key, const BigInt& r_u);
std::vector<BigInt> hk_query_diag(const SchemeParams& params, std::string_view w,
                                  const WildcardVec& ts_pattern, const BigInt& r_m);
IntMatrix hk_wrap_data(const HkMasks& masks, const std::vector<BigInt>& diag, Rng& rng);
IntMatrix hk_wrap_query(const HkMasks& masks, const std::vector<BigInt>& diag, Rng& rng);

}  // namespace nims
