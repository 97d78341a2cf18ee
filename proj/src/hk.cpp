#include "nims/hk.hpp"

#include <algorithm>

#include "nims/crypto.hpp"

namespace nims {

namespace {

BigInt bigint_from_bytes(BytesView b) {
  BigInt v;
  if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return v;
}

// r_u in (u, u + 2^64], r_m in [1, 2^64].
BigInt draw_r_u(const BigInt& u, Rng& rng) {
  return u + 1 + bigint_from_u64(rng.u64());
}
BigInt draw_r_m(Rng& rng) { return 1 + bigint_from_u64(rng.u64()); }

}  // namespace

HkMasks gen_masks(uint32_t dim, Rng& rng) {
  if (dim < 2) throw ParamError("gen_masks: dim must be >= 2");
  auto sample = [&] {
    IntMatrix m(dim);
    for (uint32_t i = 0; i < dim; ++i) {
      for (uint32_t j = 0; j < i; ++j) {
        // uniform in [-2^31, 2^31)
        long v = static_cast<long>(rng.below(uint64_t(1) << 32));
        m.at(i, j) = BigInt(v - (1L << 31));
      }
      m.at(i, i) = 1;
    }
    return m;
  };
  HkMasks out;
  out.m1 = sample();
  out.m2 = sample();
  out.m1_inv = unit_lower_inverse(out.m1);
  out.m2_inv = unit_lower_inverse(out.m2);
  return out;
}

std::vector<BigInt> hk_data_diag(const SchemeParams& params, std::string_view w,
                                 uint64_t ts, BytesView key, const BigInt& r_u) {
  if (params.kappa < 64 && (ts >> params.kappa))
    throw ParamError("hk_data: timestamp does not fit kappa bits");
  if (key.size() != params.id_len())
    throw ParamError("hk_data: key must be lambda bits");
  BigInt u = bigint_from_bytes(key);
  if (sgn(u) == 0) throw ParamError("hk_data: zero key");

  BitVec bits = hash_keyword(w, params.iota);
  BitVec ts_bits = binary_encode(ts, params.kappa);
  bits.insert(bits.end(), ts_bits.begin(), ts_bits.end());
  IntVec pt = trans_index(bits);  // length iota + kappa + 1

  std::vector<BigInt> diag;
  diag.reserve(params.dim());
  for (int64_t e : pt) diag.push_back(r_u * BigInt(static_cast<long>(e)));
  diag.push_back(u);
  return diag;
}

std::vector<BigInt> hk_query_diag(const SchemeParams& params, std::string_view w,
                                  const WildcardVec& ts_pattern, const BigInt& r_m) {
  if (ts_pattern.size() != params.kappa)
    throw ParamError("hk_token: pattern length must be kappa");
  WildcardVec full;
  full.reserve(params.iota + params.kappa);
  for (uint8_t b : hash_keyword(w, params.iota))
    full.push_back(b ? Sym::One : Sym::Zero);
  full.insert(full.end(), ts_pattern.begin(), ts_pattern.end());
  IntVec qt = trans_query(full);  // length iota + kappa + 1

  std::vector<BigInt> diag;
  diag.reserve(params.dim());
  for (int64_t e : qt) diag.push_back(r_m * BigInt(static_cast<long>(e)));
  diag.push_back(BigInt(1));
  return diag;
}

IntMatrix hk_wrap_data(const HkMasks& masks, const std::vector<BigInt>& diag,
                       Rng& rng) {
  uint32_t n = static_cast<uint32_t>(diag.size());
  IntMatrix u_mat = gen_low_tri(diag, rng);
  IntMatrix bl = gen_unit_low_tri(n, rng);  // one blinder, both sides
  return mul(mul(masks.m1, bl), mul(mul(u_mat, bl), masks.m2));
}

IntMatrix hk_wrap_query(const HkMasks& masks, const std::vector<BigInt>& diag,
                        Rng& rng) {
  uint32_t n = static_cast<uint32_t>(diag.size());
  IntMatrix q_mat = gen_low_tri(diag, rng);
  IntMatrix bl = gen_unit_low_tri(n, rng);
  return mul(mul(masks.m2_inv, bl), mul(mul(q_mat, bl), masks.m1_inv));
}

HiddenIndex hk_data(const HkMasks& masks, const SchemeParams& params,
                    std::string_view w, uint64_t ts, BytesView key, Rng& rng) {
  BigInt u = bigint_from_bytes(key);
  BigInt r_u = draw_r_u(u, rng);
  return HiddenIndex{hk_wrap_data(masks, hk_data_diag(params, w, ts, key, r_u), rng)};
}

IntMatrix hk_token_element(const HkMasks& masks, const SchemeParams& params,
                           std::string_view w, const WildcardVec& ts_pattern,
                           Rng& rng) {
  BigInt r_m = draw_r_m(rng);
  return hk_wrap_query(masks, hk_query_diag(params, w, ts_pattern, r_m), rng);
}

HiddenToken hk_token(const HkMasks& masks, const SchemeParams& params,
                     std::string_view w, uint64_t lo, uint64_t hi, Rng& rng) {
  HiddenToken token;
  for (const WildcardVec& block : wildcard_cover(lo, hi, params.kappa))
    token.elems.push_back(hk_token_element(masks, params, w, block, rng));
  // Element order would otherwise mirror the cover's low-to-high scan.
  shuffle_vec(token.elems, rng);
  return token;
}

BigInt hk_probe(const HiddenIndex& index, const IntMatrix& token_elem) {
  return trace_product(index.mat, token_elem);
}

HkQueryResult hk_query(const HiddenIndex& index, const HiddenToken& token,
                       uint32_t lambda) {
  HkQueryResult out;
  BigInt bound = BigInt(1) << lambda;
  for (const IntMatrix& elem : token.elems) {
    ++out.probes;
    BigInt res = hk_probe(index, elem);
    if (sgn(res) > 0) {
      if (res >= bound)
        throw IntegrityError("hk_query: recovered key exceeds lambda bits");
      out.flag = true;
      out.key.assign(lambda / 8, 0);
      size_t bytes = (mpz_sizeinbase(res.get_mpz_t(), 2) + 7) / 8;
      mpz_export(out.key.data() + (lambda / 8 - bytes), nullptr, 1, 1, 1, 0,
                 res.get_mpz_t());
      return out;
    }
  }
  return out;
}

}  // namespace nims
