// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iostream>

#include "hhekit/bfv/ciphertext.hpp"
#include "hhekit/bfv/keys.hpp"
#include "hhekit/bfv/plaintext.hpp"
#include "hhekit/io/binio.hpp"

namespace hhekit::bfv {

/// Object tags inside the lattice container format. Every object is framed
/// as: magic "HHEB", format version (u16), 32-byte parameter hash, kind tag
/// (u8), then the kind-specific payload of little-endian words. Loads reject
/// wrong magic, unknown versions, foreign parameter hashes, wrong kinds and
/// truncated payloads.
enum class ObjectKind : u8 {
  plaintext = 1,
  ciphertext = 2,
  secret_key = 3,
  public_key = 4,
  relin_key = 5,
  galois_keys = 6,
};

void save(const Plaintext& pt, const BfvContext& ctx, std::ostream& os);
void save(const Ciphertext& ct, const BfvContext& ctx, std::ostream& os);
void save(const SecretKey& sk, const BfvContext& ctx, std::ostream& os);
void save(const PublicKey& pk, const BfvContext& ctx, std::ostream& os);
void save(const KswitchKey& ksk, const BfvContext& ctx, std::ostream& os,
          ObjectKind kind = ObjectKind::relin_key);
void save(const GaloisKeys& gk, const BfvContext& ctx, std::ostream& os);

Plaintext load_plaintext(const BfvContext& ctx, std::istream& is);
Ciphertext load_ciphertext(const BfvContext& ctx, std::istream& is);
SecretKey load_secret_key(const BfvContext& ctx, std::istream& is);
PublicKey load_public_key(const BfvContext& ctx, std::istream& is);
KswitchKey load_kswitch_key(const BfvContext& ctx, std::istream& is,
                            ObjectKind kind = ObjectKind::relin_key);
GaloisKeys load_galois_keys(const BfvContext& ctx, std::istream& is);

/// Convenience byte-vector round trips.
template <typename T>
std::vector<u8> save_bytes(const T& obj, const BfvContext& ctx) {
  std::ostringstream oss(std::ios::binary);
  save(obj, ctx, oss);
  const std::string s = oss.str();
  return std::vector<u8>(s.begin(), s.end());
}

} // namespace hhekit::bfv
