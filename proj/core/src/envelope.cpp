// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/proto/envelope.hpp"

#include <sstream>

#include "hhekit/io/binio.hpp"

namespace hhekit::proto {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 2 + 1 + 8 + 2 + 8;

void write_frame(io::BinWriter& w, const Envelope& env) {
  w.magic(kMagicMsg);
  w.u16(kFormatVersion);
  w.u8(static_cast<u8>(env.sender));
  w.u64(env.timestamp);
  w.u16(static_cast<u16>(env.type));
  w.u64(env.payload.size());
  w.raw(env.payload.data(), env.payload.size());
}

} // namespace

std::string_view party_name(PartyId id) {
  switch (id) {
  case PartyId::user:
    return "user";
  case PartyId::csp:
    return "csp";
  case PartyId::analyst:
    return "analyst";
  case PartyId::tee:
    return "tee";
  }
  throw ProtocolError("unknown party id");
}

std::string_view payload_type_name(PayloadType type) {
  switch (type) {
  case PayloadType::publish_pk:
    return "publish-pk";
  case PayloadType::transfer_evk:
    return "transfer-evk";
  case PayloadType::upload:
    return "upload";
  case PayloadType::eval_request:
    return "eval-request";
  case PayloadType::result_ct:
    return "result-ct";
  case PayloadType::result_sealed:
    return "result-sealed";
  }
  throw ProtocolError("unknown payload type");
}

std::array<u8, kHashBytes> envelope_digest(const Envelope& env) {
  const std::vector<u8> frame =
      io::to_bytes([&](io::BinWriter& w) { write_frame(w, env); });
  return hash256(frame);
}

Envelope make_envelope(PartyId sender, u64 timestamp, PayloadType type,
                       std::vector<u8> payload, const SignKeyPair& key) {
  Envelope env;
  env.sender = sender;
  env.timestamp = timestamp;
  env.type = type;
  env.payload = std::move(payload);
  env.signature = sign_detached(key, envelope_digest(env));
  return env;
}

void verify_envelope(const Envelope& env,
                     const std::array<u8, kVerifyKeyBytes>& verify_key) {
  if (!verify_detached(verify_key, envelope_digest(env), env.signature)) {
    throw ProtocolError("envelope signature verification failed");
  }
}

void save(const Envelope& env, std::ostream& os) {
  io::BinWriter w(os);
  write_frame(w, env);
  w.raw(env.signature.data(), env.signature.size());
}

Envelope load_envelope(std::istream& is) {
  io::BinReader r(is);
  r.expect_magic(kMagicMsg, "protocol envelope");
  if (r.u16() != kFormatVersion) {
    throw SerializationError("unsupported protocol envelope version");
  }
  Envelope env;
  const u8 sender = r.u8();
  if (sender < static_cast<u8>(PartyId::user) ||
      sender > static_cast<u8>(PartyId::tee)) {
    throw SerializationError("protocol envelope names an unknown sender");
  }
  env.sender = static_cast<PartyId>(sender);
  env.timestamp = r.u64();
  const u16 type = r.u16();
  if (type < static_cast<u16>(PayloadType::publish_pk) ||
      type > static_cast<u16>(PayloadType::result_sealed)) {
    throw SerializationError("protocol envelope carries an unknown payload type");
  }
  env.type = static_cast<PayloadType>(type);
  const u64 len = r.u64();
  if (len > (1ull << 33)) {
    throw SerializationError("protocol envelope payload length is implausible");
  }
  env.payload.resize(static_cast<std::size_t>(len));
  r.raw(env.payload.data(), env.payload.size());
  r.raw(env.signature.data(), env.signature.size());
  return env;
}

std::size_t wire_size(const Envelope& env) {
  return kHeaderBytes + env.payload.size() + env.signature.size();
}

std::vector<u8> wire_bytes(const Envelope& env) {
  return io::to_bytes([&](io::BinWriter& w) {
    write_frame(w, env);
    w.raw(env.signature.data(), env.signature.size());
  });
}

} // namespace hhekit::proto
