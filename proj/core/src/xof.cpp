// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/ring/xof.hpp"

#include <sodium.h>

#include <bit>
#include <cstring>
#include <mutex>

namespace hhekit::ring {

void ensure_sodium() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) throw Error("libsodium initialization failed");
  });
}

Xof::Xof(std::string_view domain_tag) {
  ensure_sodium();
  absorb_str(domain_tag);
}

Xof& Xof::absorb(std::span<const u8> data) {
  if (squeezing_) throw DomainError("Xof: absorb after squeeze");
  absorbed_.insert(absorbed_.end(), data.begin(), data.end());
  return *this;
}

Xof& Xof::absorb_str(std::string_view s) {
  absorb_u64(s.size());
  return absorb(std::span<const u8>(reinterpret_cast<const u8*>(s.data()), s.size()));
}

Xof& Xof::absorb_u64(u64 v) {
  u8 b[8];
  for (int i = 0; i < 8; ++i) b[i] = u8(v >> (8 * i));
  return absorb(std::span<const u8>(b, 8));
}

void Xof::finalize_if_needed() {
  if (squeezing_) return;
  crypto_generichash(key_.data(), key_.size(), absorbed_.data(), absorbed_.size(),
                     nullptr, 0);
  squeezing_ = true;
  buf_pos_ = buf_.size(); // force a refill on first squeeze
  chunk_counter_ = 0;
}

void Xof::squeeze(std::span<u8> out) {
  finalize_if_needed();
  std::size_t written = 0;
  while (written < out.size()) {
    if (buf_pos_ == buf_.size()) {
      u8 nonce[crypto_stream_chacha20_NONCEBYTES];
      for (int i = 0; i < 8; ++i) nonce[i] = u8(chunk_counter_ >> (8 * i));
      crypto_stream_chacha20(buf_.data(), buf_.size(), nonce, key_.data());
      ++chunk_counter_;
      buf_pos_ = 0;
    }
    const std::size_t take = std::min(out.size() - written, buf_.size() - buf_pos_);
    std::memcpy(out.data() + written, buf_.data() + buf_pos_, take);
    written += take;
    buf_pos_ += take;
  }
}

u64 Xof::next_u64() {
  u8 b[8];
  squeeze(std::span<u8>(b, 8));
  u64 v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

u64 Xof::uniform(u64 bound) {
  if (bound == 0) throw ParameterError("Xof::uniform: bound must be positive");
  if (bound == 1) return 0;
  const unsigned bits = unsigned(std::bit_width(bound));
  const unsigned k = std::min(8u, (bits + 8 + 7) / 8);
  const u128 limit = u128(1) << (8 * k);
  const u64 cutoff_mod = u64(limit % bound);
  // Accept draws below limit - (limit mod bound); each residue then has
  // exactly limit/bound preimages.
  for (;;) {
    u8 b[8] = {0};
    squeeze(std::span<u8>(b, k));
    u64 draw = 0;
    for (int i = 7; i >= 0; --i) draw = (draw << 8) | b[i];
    if (u128(draw) < limit - cutoff_mod) return draw % bound;
  }
}

Xof Xof::fork(std::string_view child_tag) const {
  Xof child("hhekit-xof-fork");
  const auto k = key();
  child.absorb(std::span<const u8>(k.data(), k.size()));
  child.absorb_str(child_tag);
  return child;
}

std::array<u8, 32> Xof::key() const {
  if (squeezing_) return key_;
  std::array<u8, 32> k{};
  crypto_generichash(k.data(), k.size(), absorbed_.data(), absorbed_.size(), nullptr,
                     0);
  return k;
}

} // namespace hhekit::ring
