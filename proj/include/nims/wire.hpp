#pragma once

#include <cstdint>
#include <optional>

#include "nims/roles.hpp"

namespace nims {

// Framing: 4-byte big-endian length, then a 1-byte message type, then the
// body. The length counts the type byte plus the body.
enum class MsgType : uint8_t {
  kAdd = 0x01,
  kDelete = 0x02,
  kSearch = 0x03,
  kPing = 0x04,
  kAddOk = 0x81,
  kDeleteOk = 0x82,
  kResults = 0x83,
  kPong = 0x84,
  kError = 0x7F,
};

enum class ErrCode : uint8_t {
  kMalformed = 1,
  kDuplicateAddress = 2,
  kBrokenChain = 3,
  kUnknownType = 4,
  kInternal = 5,
};

struct Frame {
  MsgType type;
  Bytes body;
};

constexpr size_t kMaxFrameLen = size_t(1) << 28;

Bytes encode_frame(const Frame& f);

// Decodes one frame from the front of buf. Returns nothing if the buffer
// holds only a prefix (nothing is consumed); throws ParseError on a
// length field that is zero or exceeds the cap.
struct DecodedFrame {
  Frame frame;
  size_t consumed;
};
std::optional<DecodedFrame> try_decode_frame(BytesView buf);

// Message bodies. Store entries carry a width tag (1 = lambda-bit handle
// address, 2 = 2*lambda-bit chain address) so the decoder can check
// widths without guessing.
Bytes encode_add(const AddBatch& batch, const SchemeParams& params);
AddBatch decode_add(BytesView body, const SchemeParams& params);

Bytes encode_delete(const Bytes& eid);
Bytes decode_delete(BytesView body, const SchemeParams& params);

Bytes encode_search(const HiddenToken& token);
HiddenToken decode_search(BytesView body, const SchemeParams& params);

Bytes encode_add_ok(uint32_t entries, uint32_t mats);
std::pair<uint32_t, uint32_t> decode_add_ok(BytesView body);

Bytes encode_delete_ok(bool found);
bool decode_delete_ok(BytesView body);

Bytes encode_results(const std::vector<Bytes>& cts);
std::vector<Bytes> decode_results(BytesView body);

struct PongInfo {
  uint64_t epoch_ts = 0;
  uint32_t mat_count = 0;
  uint64_t cdb_count = 0;
};
Bytes encode_pong(const PongInfo& info);
PongInfo decode_pong(BytesView body);

struct WireError {
  ErrCode code;
  std::string message;
};
Bytes encode_error(ErrCode code, std::string_view message);
WireError decode_error(BytesView body);

}  // namespace nims
