#include "nims/bigint.hpp"

namespace nims {

void bigint_encode(Bytes& out, const BigInt& v) {
  out.push_back(sgn(v) < 0 ? 0x01 : 0x00);
  if (sgn(v) == 0) {
    put_u32_be(out, 0);
    return;
  }
  size_t bytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  put_u32_be(out, static_cast<uint32_t>(bytes));
  size_t at = out.size();
  out.resize(at + bytes);
  size_t written = 0;
  mpz_export(out.data() + at, &written, 1, 1, 1, 0, v.get_mpz_t());
  // mpz_export emits exactly the minimal big-endian magnitude.
  if (written != bytes) throw Error("bigint export width mismatch");
}

BigInt bigint_decode(ByteReader& r) {
  uint8_t sign = r.u8();
  if (sign > 1) throw ParseError("bad bigint sign byte");
  uint32_t len = r.u32();
  if (len > (1u << 24)) throw ParseError("bigint magnitude too large");
  BytesView mag = r.view(len);
  if (len == 0) {
    if (sign != 0) throw ParseError("negative zero bigint");
    return BigInt(0);
  }
  if (mag[0] == 0) throw ParseError("bigint magnitude has leading zero");
  BigInt v;
  mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, mag.data());
  if (sign) mpz_neg(v.get_mpz_t(), v.get_mpz_t());
  return v;
}

}  // namespace nims
