// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstring>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hhekit/common.hpp"

namespace hhekit::io {

/// Little-endian binary writer over an std::ostream.
class BinWriter {
public:
  explicit BinWriter(std::ostream& os) : os_(os) {}

  void u8(hhekit::u8 v) { raw(&v, 1); }
  void u16(hhekit::u16 v);
  void u32(hhekit::u32 v);
  void u64(hhekit::u64 v);
  void magic(const char (&m)[4]) { raw(m, 4); }
  void bytes(std::span<const hhekit::u8> data); // u64 length prefix + payload
  void raw(const void* data, std::size_t len);
  /// u64 length prefix + UTF-8 bytes.
  void str(const std::string& s);

private:
  std::ostream& os_;
};

/// Little-endian binary reader over an std::istream. All reads throw
/// SerializationError on truncation.
class BinReader {
public:
  explicit BinReader(std::istream& is) : is_(is) {}

  hhekit::u8 u8();
  hhekit::u16 u16();
  hhekit::u32 u32();
  hhekit::u64 u64();
  void expect_magic(const char (&m)[4], const char* what);
  std::vector<hhekit::u8> bytes(hhekit::u64 max_len = (1ull << 33));
  void raw(void* data, std::size_t len);
  std::string str(hhekit::u64 max_len = (1ull << 24));

private:
  std::istream& is_;
};

/// Serializes through a callback into a byte vector.
template <typename Fn>
std::vector<u8> to_bytes(Fn&& write_fn) {
  std::ostringstream oss(std::ios::binary);
  BinWriter w(oss);
  write_fn(w);
  const std::string s = oss.str();
  return std::vector<u8>(s.begin(), s.end());
}

/// Wraps a byte vector in an istream and runs a reader callback on it.
template <typename Fn>
auto from_bytes(std::span<const u8> data, Fn&& read_fn) {
  std::istringstream iss(std::string(data.begin(), data.end()), std::ios::binary);
  BinReader r(iss);
  return read_fn(r);
}

} // namespace hhekit::io
