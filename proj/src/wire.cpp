#include "nims/wire.hpp"

namespace nims {

namespace {

// Address-width tags for store entries.
constexpr uint8_t kTagHandle = 1;  // lambda-bit payload handle
constexpr uint8_t kTagChain = 2;   // 2*lambda-bit chain address

void put_blob32(Bytes& out, BytesView b) {
  put_u32_be(out, static_cast<uint32_t>(b.size()));
  out.insert(out.end(), b.begin(), b.end());
}

}  // namespace

Bytes encode_frame(const Frame& f) {
  if (f.body.size() + 1 > kMaxFrameLen) throw ParamError("frame too large");
  Bytes out;
  out.reserve(5 + f.body.size());
  put_u32_be(out, static_cast<uint32_t>(1 + f.body.size()));
  out.push_back(static_cast<uint8_t>(f.type));
  out.insert(out.end(), f.body.begin(), f.body.end());
  return out;
}

std::optional<DecodedFrame> try_decode_frame(BytesView buf) {
  if (buf.size() < 4) return std::nullopt;
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | buf[i];
  if (len == 0) throw ParseError("frame length zero");
  if (len > kMaxFrameLen) throw ParseError("frame exceeds length cap");
  if (buf.size() < 4 + size_t(len)) return std::nullopt;
  DecodedFrame out;
  out.frame.type = static_cast<MsgType>(buf[4]);
  out.frame.body.assign(buf.begin() + 5, buf.begin() + 4 + len);
  out.consumed = 4 + size_t(len);
  return out;
}

Bytes encode_add(const AddBatch& batch, const SchemeParams& params) {
  Bytes out;
  put_u64_be(out, batch.epoch_ts);
  put_u32_be(out, static_cast<uint32_t>(batch.dic_entries.size()));
  size_t id_len = params.id_len();
  for (const auto& [addr, val] : batch.dic_entries) {
    if (addr.size() == id_len) {
      out.push_back(kTagHandle);
    } else if (addr.size() == 2 * id_len) {
      out.push_back(kTagChain);
    } else {
      throw ParamError("encode_add: bad address width");
    }
    out.insert(out.end(), addr.begin(), addr.end());
    put_blob32(out, val);
  }
  put_u32_be(out, static_cast<uint32_t>(batch.new_mat.size()));
  for (const IntMatrix& m : batch.new_mat) m.encode(out);
  return out;
}

AddBatch decode_add(BytesView body, const SchemeParams& params) {
  ByteReader r(body);
  AddBatch batch;
  batch.epoch_ts = r.u64();
  uint32_t entries = r.u32();
  size_t id_len = params.id_len();
  batch.dic_entries.reserve(entries);
  for (uint32_t i = 0; i < entries; ++i) {
    uint8_t tag = r.u8();
    size_t addr_len;
    if (tag == kTagHandle) {
      addr_len = id_len;
    } else if (tag == kTagChain) {
      addr_len = 2 * id_len;
    } else {
      throw ParseError("decode_add: unknown address tag");
    }
    Bytes addr = r.bytes(addr_len);
    uint32_t vlen = r.u32();
    batch.dic_entries.emplace_back(std::move(addr), r.bytes(vlen));
  }
  uint32_t mats = r.u32();
  batch.new_mat.reserve(mats);
  for (uint32_t i = 0; i < mats; ++i) batch.new_mat.push_back(IntMatrix::decode(r));
  r.expect_done();
  return batch;
}

Bytes encode_delete(const Bytes& eid) { return eid; }

Bytes decode_delete(BytesView body, const SchemeParams& params) {
  if (body.size() != params.id_len())
    throw ParseError("decode_delete: handle must be lambda bits");
  return Bytes(body.begin(), body.end());
}

Bytes encode_search(const HiddenToken& token) {
  Bytes out;
  put_u32_be(out, static_cast<uint32_t>(token.elems.size()));
  for (const IntMatrix& m : token.elems) m.encode(out);
  return out;
}

HiddenToken decode_search(BytesView body, const SchemeParams& params) {
  ByteReader r(body);
  uint32_t count = r.u32();
  if (count == 0 || count > 2 * params.kappa)
    throw ParseError("decode_search: token element count out of range");
  HiddenToken token;
  token.elems.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    token.elems.push_back(IntMatrix::decode(r));
    if (token.elems.back().dim() != params.dim())
      throw ParseError(
          "decode_search: token elements are " +
          std::to_string(token.elems.back().dim()) + "x" +
          std::to_string(token.elems.back().dim()) +
          " but this database expects " + std::to_string(params.dim()) + "x" +
          std::to_string(params.dim()) +
          " (iota/kappa disagree between owner setup and server)");
  }
  r.expect_done();
  return token;
}

Bytes encode_add_ok(uint32_t entries, uint32_t mats) {
  Bytes out;
  put_u32_be(out, entries);
  put_u32_be(out, mats);
  return out;
}

std::pair<uint32_t, uint32_t> decode_add_ok(BytesView body) {
  ByteReader r(body);
  uint32_t entries = r.u32();
  uint32_t mats = r.u32();
  r.expect_done();
  return {entries, mats};
}

Bytes encode_delete_ok(bool found) { return Bytes{found ? uint8_t(1) : uint8_t(0)}; }

bool decode_delete_ok(BytesView body) {
  ByteReader r(body);
  uint8_t v = r.u8();
  r.expect_done();
  if (v > 1) throw ParseError("decode_delete_ok: bad flag");
  return v == 1;
}

Bytes encode_results(const std::vector<Bytes>& cts) {
  Bytes out;
  put_u32_be(out, static_cast<uint32_t>(cts.size()));
  for (const Bytes& ct : cts) put_blob32(out, ct);
  return out;
}

std::vector<Bytes> decode_results(BytesView body) {
  ByteReader r(body);
  uint32_t count = r.u32();
  std::vector<Bytes> cts;
  cts.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t len = r.u32();
    cts.push_back(r.bytes(len));
  }
  r.expect_done();
  return cts;
}

Bytes encode_pong(const PongInfo& info) {
  Bytes out;
  put_u64_be(out, info.epoch_ts);
  put_u32_be(out, info.mat_count);
  put_u64_be(out, info.cdb_count);
  return out;
}

PongInfo decode_pong(BytesView body) {
  ByteReader r(body);
  PongInfo info;
  info.epoch_ts = r.u64();
  info.mat_count = r.u32();
  info.cdb_count = r.u64();
  r.expect_done();
  return info;
}

Bytes encode_error(ErrCode code, std::string_view message) {
  Bytes out;
  out.push_back(static_cast<uint8_t>(code));
  Bytes msg = to_bytes(message);
  if (msg.size() > 4096) msg.resize(4096);
  put_blob32(out, msg);
  return out;
}

WireError decode_error(BytesView body) {
  ByteReader r(body);
  WireError e;
  e.code = static_cast<ErrCode>(r.u8());
  uint32_t len = r.u32();
  e.message = to_string(r.view(len));
  r.expect_done();
  return e;
}

}  // namespace nims
