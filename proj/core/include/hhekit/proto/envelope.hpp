// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iostream>
#include <string_view>
#include <vector>

#include "hhekit/proto/crypto.hpp"

namespace hhekit::proto {

/// Protocol roles. User envelopes additionally carry a user index inside
/// their payload; the role alone names the signing identity class.
enum class PartyId : u8 {
  user = 1,
  csp = 2,
  analyst = 3,
  tee = 4,
};

std::string_view party_name(PartyId id);

/// Payload discriminator inside an envelope.
enum class PayloadType : u16 {
  publish_pk = 1,   ///< lattice public key, keyholder -> everyone
  transfer_evk = 2, ///< evaluation-key bundle, keyholder -> CSP
  upload = 3,       ///< stream ciphertext + encrypted key, user -> CSP
  eval_request = 4, ///< encrypted model, analyst -> CSP
  result_ct = 5,    ///< evaluated lattice ciphertext, CSP -> decryptor
  result_sealed = 6 ///< sealed plaintext scores, TEE -> analyst
};

std::string_view payload_type_name(PayloadType type);

/// A signed, timestamped protocol message. Timestamps are per-sender
/// monotonic counters, not wall clocks, so sessions replay deterministically;
/// receivers reject any envelope whose counter does not strictly increase.
/// The signature covers the whole serialized frame up to itself (sender,
/// timestamp, payload type and payload), hashed with BLAKE2b-256, so a
/// single flipped bit anywhere in the frame invalidates it.
struct Envelope {
  PartyId sender = PartyId::user;
  u64 timestamp = 0;
  PayloadType type = PayloadType::publish_pk;
  std::vector<u8> payload;
  std::array<u8, kSignatureBytes> signature{};
};

/// Builds and signs an envelope.
Envelope make_envelope(PartyId sender, u64 timestamp, PayloadType type,
                       std::vector<u8> payload, const SignKeyPair& key);

/// Verifies the signature against `verify_key`. Throws ProtocolError on
/// failure.
void verify_envelope(const Envelope& env,
                     const std::array<u8, kVerifyKeyBytes>& verify_key);

/// The signed digest of an envelope's frame (also the transcript hash of the
/// message).
std::array<u8, kHashBytes> envelope_digest(const Envelope& env);

/// Wire format: magic "HHEM", version (u16), sender (u8), timestamp (u64),
/// payload type (u16), payload length (u64), payload bytes, signature.
void save(const Envelope& env, std::ostream& os);
Envelope load_envelope(std::istream& is);

/// Serialized size in bytes (header + payload + signature).
std::size_t wire_size(const Envelope& env);

/// Serialized frame as bytes.
std::vector<u8> wire_bytes(const Envelope& env);

} // namespace hhekit::proto
