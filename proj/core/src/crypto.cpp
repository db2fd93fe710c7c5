// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/proto/crypto.hpp"

#include <sodium.h>

#include <cstring>

namespace hhekit::proto {

namespace {

const u8* ptr_or_dummy(std::span<const u8> data) {
  static const u8 dummy = 0;
  return data.empty() ? &dummy : data.data();
}

} // namespace

std::array<u8, kHashBytes> hash256(std::span<const u8> data) {
  ring::ensure_sodium();
  std::array<u8, kHashBytes> out{};
  crypto_generichash(out.data(), out.size(), ptr_or_dummy(data), data.size(),
                     nullptr, 0);
  return out;
}

SignKeyPair sign_keygen(const ring::Xof& seed) {
  ring::ensure_sodium();
  static_assert(kVerifyKeyBytes == crypto_sign_PUBLICKEYBYTES);
  static_assert(kSignKeyBytes == crypto_sign_SECRETKEYBYTES);
  std::array<u8, crypto_sign_SEEDBYTES> s{};
  ring::Xof rng = seed;
  rng.squeeze(s);
  SignKeyPair kp;
  crypto_sign_seed_keypair(kp.verify.data(), kp.sign.data(), s.data());
  sodium_memzero(s.data(), s.size());
  return kp;
}

std::array<u8, kSignatureBytes> sign_detached(const SignKeyPair& key,
                                              std::span<const u8> msg) {
  ring::ensure_sodium();
  static_assert(kSignatureBytes == crypto_sign_BYTES);
  std::array<u8, kSignatureBytes> sig{};
  crypto_sign_detached(sig.data(), nullptr, ptr_or_dummy(msg), msg.size(),
                       key.sign.data());
  return sig;
}

bool verify_detached(const std::array<u8, kVerifyKeyBytes>& verify_key,
                     std::span<const u8> msg,
                     const std::array<u8, kSignatureBytes>& sig) {
  ring::ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), ptr_or_dummy(msg), msg.size(),
                                     verify_key.data()) == 0;
}

PkeKeyPair pke_keygen(const ring::Xof& seed) {
  ring::ensure_sodium();
  static_assert(kPkeKeyBytes == crypto_box_PUBLICKEYBYTES);
  static_assert(kPkeKeyBytes == crypto_box_SECRETKEYBYTES);
  std::array<u8, crypto_box_SEEDBYTES> s{};
  ring::Xof rng = seed;
  rng.squeeze(s);
  PkeKeyPair kp;
  crypto_box_seed_keypair(kp.pk.data(), kp.sk.data(), s.data());
  sodium_memzero(s.data(), s.size());
  return kp;
}

std::vector<u8> pke_seal(const std::array<u8, kPkeKeyBytes>& recipient_pk,
                         std::span<const u8> msg, const ring::Xof& seed) {
  ring::ensure_sodium();
  static_assert(kSealOverheadBytes == crypto_box_SEALBYTES);
  std::array<u8, crypto_box_SEEDBYTES> s{};
  ring::Xof rng = seed.fork("hhekit/pke-seal/ephemeral");
  rng.squeeze(s);
  std::array<u8, crypto_box_PUBLICKEYBYTES> epk{};
  std::array<u8, crypto_box_SECRETKEYBYTES> esk{};
  crypto_box_seed_keypair(epk.data(), esk.data(), s.data());
  sodium_memzero(s.data(), s.size());

  // Sealed-box nonce: BLAKE2b-192 over ephemeral_pk || recipient_pk.
  std::array<u8, crypto_box_NONCEBYTES> nonce{};
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, nonce.size());
  crypto_generichash_update(&st, epk.data(), epk.size());
  crypto_generichash_update(&st, recipient_pk.data(), recipient_pk.size());
  crypto_generichash_final(&st, nonce.data(), nonce.size());

  std::vector<u8> out(crypto_box_SEALBYTES + msg.size());
  std::memcpy(out.data(), epk.data(), epk.size());
  if (crypto_box_easy(out.data() + epk.size(), ptr_or_dummy(msg), msg.size(),
                      nonce.data(), recipient_pk.data(), esk.data()) != 0) {
    sodium_memzero(esk.data(), esk.size());
    throw ProtocolError("public-key encryption failed");
  }
  sodium_memzero(esk.data(), esk.size());
  return out;
}

std::vector<u8> pke_unseal(const PkeKeyPair& key, std::span<const u8> sealed) {
  ring::ensure_sodium();
  if (sealed.size() < crypto_box_SEALBYTES) {
    throw ProtocolError("sealed ciphertext is shorter than the sealed-box overhead");
  }
  // One spare byte keeps the output pointer valid for empty messages.
  std::vector<u8> out(sealed.size() - crypto_box_SEALBYTES + 1);
  if (crypto_box_seal_open(out.data(), sealed.data(), sealed.size(),
                           key.pk.data(), key.sk.data()) != 0) {
    throw ProtocolError(
        "public-key decryption failed: the ciphertext was not sealed for this "
        "recipient or has been altered");
  }
  out.resize(sealed.size() - crypto_box_SEALBYTES);
  return out;
}

} // namespace hhekit::proto
