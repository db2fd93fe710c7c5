// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hhekit/common.hpp"

namespace hhekit::ring {

/// Deterministic extendable-output function with domain separation.
///
/// Absorb phase: BLAKE2b over a framed input (length-prefixed strings, LE
/// integers). Squeeze phase: the 256-bit BLAKE2b digest keys a ChaCha20
/// stream whose 64-bit block nonce is an output-chunk counter. The same
/// absorbed input always yields the same output stream; all randomness in the
/// library (key generation, encryption, affine-layer derivation, dataset
/// synthesis) flows through this type so whole pipelines replay bit-exactly
/// from a seed.
class Xof {
public:
  /// Starts a new XOF in the absorb phase, keyed by a domain tag.
  explicit Xof(std::string_view domain_tag);

  /// Absorbs raw bytes. Throws DomainError once squeezing has started.
  Xof& absorb(std::span<const u8> data);
  /// Absorbs a length-prefixed string (unambiguous framing).
  Xof& absorb_str(std::string_view s);
  /// Absorbs a little-endian 64-bit integer.
  Xof& absorb_u64(u64 v);

  /// Produces the next `out.size()` bytes of the stream (finalizes absorb on
  /// first call).
  void squeeze(std::span<u8> out);

  /// Next 64-bit word of the stream.
  u64 next_u64();

  /// Exactly uniform draw from [0, bound) by rejection sampling: draws of
  /// k = min(8, ceil((bits(bound) + 8) / 8)) bytes are rejected above the
  /// largest multiple of `bound` so every residue is equally likely.
  u64 uniform(u64 bound);

  /// Derives an independent child XOF: child absorbs this XOF's (finalized)
  /// key followed by the child tag. Does not disturb this XOF's own stream.
  Xof fork(std::string_view child_tag) const;

  /// The finalized 32-byte key (absorb digest); finalizes a copy if needed.
  std::array<u8, 32> key() const;

private:
  struct AbsorbState;
  void finalize_if_needed();

  std::vector<u8> absorbed_;            // framed absorb transcript
  bool squeezing_ = false;
  std::array<u8, 32> key_{};            // ChaCha20 key once squeezing
  u64 chunk_counter_ = 0;               // ChaCha20 nonce value
  std::array<u8, 1024> buf_{};          // current output chunk
  std::size_t buf_pos_ = 0;             // consumed bytes within buf_
};

/// Ensures libsodium is initialized (idempotent, thread-safe).
void ensure_sodium();

} // namespace hhekit::ring
