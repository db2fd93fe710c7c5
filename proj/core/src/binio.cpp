// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/io/binio.hpp"

namespace hhekit::io {

void BinWriter::u16(hhekit::u16 v) {
  const hhekit::u8 b[2] = {hhekit::u8(v), hhekit::u8(v >> 8)};
  raw(b, 2);
}

void BinWriter::u32(hhekit::u32 v) {
  hhekit::u8 b[4];
  for (int i = 0; i < 4; ++i) b[i] = hhekit::u8(v >> (8 * i));
  raw(b, 4);
}

void BinWriter::u64(hhekit::u64 v) {
  hhekit::u8 b[8];
  for (int i = 0; i < 8; ++i) b[i] = hhekit::u8(v >> (8 * i));
  raw(b, 8);
}

void BinWriter::bytes(std::span<const hhekit::u8> data) {
  u64(data.size());
  raw(data.data(), data.size());
}

void BinWriter::raw(const void* data, std::size_t len) {
  os_.write(static_cast<const char*>(data), std::streamsize(len));
  if (!os_) throw SerializationError("binio: write failed");
}

void BinWriter::str(const std::string& s) {
  u64(s.size());
  raw(s.data(), s.size());
}

hhekit::u8 BinReader::u8() {
  hhekit::u8 v;
  raw(&v, 1);
  return v;
}

hhekit::u16 BinReader::u16() {
  hhekit::u8 b[2];
  raw(b, 2);
  return hhekit::u16(b[0] | (hhekit::u16(b[1]) << 8));
}

hhekit::u32 BinReader::u32() {
  hhekit::u8 b[4];
  raw(b, 4);
  hhekit::u32 v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

hhekit::u64 BinReader::u64() {
  hhekit::u8 b[8];
  raw(b, 8);
  hhekit::u64 v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void BinReader::expect_magic(const char (&m)[4], const char* what) {
  char got[4];
  raw(got, 4);
  if (std::memcmp(got, m, 4) != 0) {
    throw SerializationError(std::string("bad magic for ") + what);
  }
}

std::vector<hhekit::u8> BinReader::bytes(hhekit::u64 max_len) {
  const hhekit::u64 len = u64();
  if (len > max_len) throw SerializationError("binio: length field exceeds limit");
  std::vector<hhekit::u8> out(len);
  raw(out.data(), out.size());
  return out;
}

void BinReader::raw(void* data, std::size_t len) {
  is_.read(static_cast<char*>(data), std::streamsize(len));
  if (std::size_t(is_.gcount()) != len) {
    throw SerializationError("binio: unexpected end of data");
  }
}

std::string BinReader::str(hhekit::u64 max_len) {
  const hhekit::u64 len = u64();
  if (len > max_len) throw SerializationError("binio: string length exceeds limit");
  std::string out(len, '\0');
  raw(out.data(), out.size());
  return out;
}

} // namespace hhekit::io
