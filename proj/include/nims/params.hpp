#pragma once

#include <cstdint>

#include "nims/common.hpp"

namespace nims {

// Scheme dimensioning, fixed at setup and shared by every party.
//   lambda : symmetric security parameter, bits (key / identifier widths)
//   iota   : keyword fingerprint width, bits
//   kappa  : timestamp width, bits (timestamps live in [0, 2^kappa))
//   genesis: epoch-seconds origin; timestamps count seconds since it
struct SchemeParams {
  uint32_t lambda = 256;
  uint32_t iota = 64;
  uint32_t kappa = 32;
  int64_t genesis = 0;

  // Hidden vectors append one slot for the keyword/timestamp split marker
  // and one for the count term, on top of iota + kappa data slots.
  uint32_t dim() const { return iota + kappa + 2; }
  size_t id_len() const { return lambda / 8; }

  void validate() const {
    if (lambda != 256) throw ParamError("lambda must be 256");
    if (iota == 0 || iota > 256 || iota % 8 != 0)
      throw ParamError("iota must be a multiple of 8 in [8,256]");
    if (kappa == 0 || kappa > 64) throw ParamError("kappa must be in [1,64]");
  }

  bool operator==(const SchemeParams&) const = default;
};

inline void encode_params(Bytes& out, const SchemeParams& p) {
  put_u32_be(out, p.lambda);
  put_u32_be(out, p.iota);
  put_u32_be(out, p.kappa);
  put_u64_be(out, static_cast<uint64_t>(p.genesis));
}

inline SchemeParams decode_params(ByteReader& r) {
  SchemeParams p;
  p.lambda = r.u32();
  p.iota = r.u32();
  p.kappa = r.u32();
  p.genesis = static_cast<int64_t>(r.u64());
  p.validate();
  return p;
}

}  // namespace nims
