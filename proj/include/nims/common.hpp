#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nims {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

// Base of all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition or argument violation.
class ParamError : public Error {
 public:
  explicit ParamError(const std::string& msg) : Error(msg) {}
};

// Malformed serialized input.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// AEAD tag verification failed (wrong key or tampered ciphertext).
class AuthError : public Error {
 public:
  explicit AuthError(const std::string& msg) : Error(msg) {}
};

// A recovered value is outside its legal domain; signals corruption.
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_string(BytesView b) {
  return std::string(b.begin(), b.end());
}

inline Bytes concat(BytesView a, BytesView b) {
  Bytes out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string hex_encode(BytesView data);
Bytes hex_decode(std::string_view hex);  // throws ParseError

// Whole-file helpers. write_file_atomic goes through a temp sibling +
// rename so readers never observe a partial file.
Bytes read_file(const std::string& path);          // throws Error
void write_file_atomic(const std::string& path, BytesView data);

inline void put_u16_be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32_be(Bytes& out, uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(v >> s));
}

inline void put_u64_be(Bytes& out, uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(v >> s));
}

inline Bytes u64_be(uint64_t v) {
  Bytes out;
  put_u64_be(out, v);
  return out;
}

// Sequential big-endian reader over a borrowed buffer.
class ByteReader {
 public:
  explicit ByteReader(BytesView data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = (uint16_t(data_[pos_]) << 8) | data_[pos_ + 1];
    pos_ += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
  }
  Bytes bytes(size_t n) {
    need(n);
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }
  BytesView view(size_t n) {
    need(n);
    BytesView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  void expect_done() const {
    if (!done()) throw ParseError("trailing bytes after message");
  }

 private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) throw ParseError("truncated input");
  }
  BytesView data_;
  size_t pos_ = 0;
};

}  // namespace nims
