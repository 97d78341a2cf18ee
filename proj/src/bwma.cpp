#include "nims/bwma.hpp"

#include <bit>

namespace nims {

BitVec binary_encode(uint64_t value, uint32_t width) {
  if (width == 0 || width > 64) throw ParamError("binary_encode: bad width");
  if (width < 64 && value >> width)
    throw ParamError("binary_encode: value does not fit width");
  BitVec out(width);
  for (uint32_t i = 0; i < width; ++i)
    out[i] = (value >> (width - 1 - i)) & 1;
  return out;
}

IntVec trans_index(const BitVec& bits) {
  if (bits.empty()) throw ParamError("trans_index: empty vector");
  IntVec out;
  out.reserve(bits.size() + 1);
  for (uint8_t b : bits) {
    if (b > 1) throw ParamError("trans_index: non-bit entry");
    out.push_back(b ? -1 : 1);
  }
  out.push_back(1);
  return out;
}

IntVec trans_query(const WildcardVec& pattern) {
  if (pattern.empty()) throw ParamError("trans_query: empty pattern");
  IntVec out;
  out.reserve(pattern.size() + 1);
  int64_t fixed = 0;
  for (Sym s : pattern) {
    switch (s) {
      case Sym::Zero: out.push_back(1); ++fixed; break;
      case Sym::One: out.push_back(-1); ++fixed; break;
      case Sym::Star: out.push_back(0); break;
      default: throw ParamError("trans_query: bad symbol");
    }
  }
  out.push_back(-fixed);
  return out;
}

bool bwma_match(const IntVec& index_vec, const IntVec& query_vec) {
  if (index_vec.size() != query_vec.size())
    throw ParamError("bwma_match: length mismatch");
  int64_t dot = 0;
  for (size_t i = 0; i < index_vec.size(); ++i)
    dot += index_vec[i] * query_vec[i];
  return dot == 0;
}

std::vector<WildcardVec> wildcard_cover(uint64_t lo, uint64_t hi, uint32_t kappa) {
  if (kappa == 0 || kappa > 64) throw ParamError("wildcard_cover: bad kappa");
  if (lo > hi) throw ParamError("wildcard_cover: lo > hi");
  if (kappa < 64 && (hi >> kappa))
    throw ParamError("wildcard_cover: hi does not fit kappa bits");

  std::vector<WildcardVec> cover;
  uint64_t cur = lo;
  for (;;) {
    // Widest aligned block starting at cur that stays inside [cur, hi]:
    // limited by cur's alignment and by the remaining span.
    uint32_t align = cur == 0 ? kappa : std::min<uint32_t>(std::countr_zero(cur), kappa);
    uint64_t span_minus1 = hi - cur;
    uint32_t fit = span_minus1 == UINT64_MAX ? 64 : std::bit_width(span_minus1 + 1) - 1;
    uint32_t k = std::min(align, fit);

    WildcardVec block(kappa, Sym::Star);
    for (uint32_t i = 0; i + k < kappa; ++i)
      block[i] = (cur >> (kappa - 1 - i)) & 1 ? Sym::One : Sym::Zero;
    cover.push_back(std::move(block));

    uint64_t end = cur + ((k == 64 ? 0 : (uint64_t(1) << k)) - 1);  // k=64: whole domain
    if (end >= hi) break;
    cur = end + 1;
  }
  return cover;
}

}  // namespace nims
