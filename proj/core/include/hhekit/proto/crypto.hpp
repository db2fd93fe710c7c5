// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

#include "hhekit/common.hpp"
#include "hhekit/ring/xof.hpp"

namespace hhekit::proto {

/// Envelope crypto for the protocol layer, bound to vetted primitives:
/// Ed25519 signatures (EUF-CMA), X25519 sealed boxes (IND-CCA2 public-key
/// encryption against the sealed-box anonymity/robustness profile), and
/// BLAKE2b-256 as the collision-resistant hash. Key generation and sealing
/// draw their randomness from the deterministic XOF so whole protocol
/// transcripts replay bit-exactly from a seed.

inline constexpr std::size_t kHashBytes = 32;
inline constexpr std::size_t kSignatureBytes = 64;
inline constexpr std::size_t kVerifyKeyBytes = 32;
inline constexpr std::size_t kSignKeyBytes = 64;
inline constexpr std::size_t kPkeKeyBytes = 32;
/// Sealed-box overhead: ephemeral public key (32) + authentication tag (16).
inline constexpr std::size_t kSealOverheadBytes = 48;

/// Ed25519 key pair. `sign` embeds the seed and public half per libsodium's
/// secret-key layout.
struct SignKeyPair {
  std::array<u8, kVerifyKeyBytes> verify{};
  std::array<u8, kSignKeyBytes> sign{};
};

/// X25519 key pair for sealed boxes.
struct PkeKeyPair {
  std::array<u8, kPkeKeyBytes> pk{};
  std::array<u8, kPkeKeyBytes> sk{};
};

/// BLAKE2b-256 digest.
std::array<u8, kHashBytes> hash256(std::span<const u8> data);

/// Deterministic Ed25519 key pair from a 32-byte XOF draw.
SignKeyPair sign_keygen(const ring::Xof& seed);

/// Detached Ed25519 signature over `msg`.
std::array<u8, kSignatureBytes> sign_detached(const SignKeyPair& key,
                                              std::span<const u8> msg);

/// True iff `sig` is a valid signature of `msg` under `verify_key`.
bool verify_detached(const std::array<u8, kVerifyKeyBytes>& verify_key,
                     std::span<const u8> msg,
                     const std::array<u8, kSignatureBytes>& sig);

/// Deterministic X25519 key pair from a 32-byte XOF draw.
PkeKeyPair pke_keygen(const ring::Xof& seed);

/// Seals `msg` to `recipient_pk`. The wire format is the standard sealed
/// box (ephemeral public key, then the authenticated box under the nonce
/// BLAKE2b-192(ephemeral_pk || recipient_pk)); the ephemeral key pair is
/// derived from `seed` instead of process randomness so sealing is
/// replayable. Opening is unchanged.
std::vector<u8> pke_seal(const std::array<u8, kPkeKeyBytes>& recipient_pk,
                         std::span<const u8> msg, const ring::Xof& seed);

/// Opens a sealed box. Throws ProtocolError when the ciphertext was not
/// sealed for this key pair or fails authentication.
std::vector<u8> pke_unseal(const PkeKeyPair& key, std::span<const u8> sealed);

} // namespace hhekit::proto
