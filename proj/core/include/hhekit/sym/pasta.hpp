// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iostream>
#include <span>
#include <string_view>
#include <vector>

#include "hhekit/ring/modmath.hpp"
#include "hhekit/ring/xof.hpp"

namespace hhekit::sym {

/// Two-branch stream cipher profile over F_p. Tied to a lattice profile of
/// the same name: p equals the plaintext modulus and 2t slots fit one
/// ciphertext row.
struct CipherProfile {
  std::string_view name; ///< paired lattice profile name
  u8 id = 0;             ///< stable serialization id (1-based)
  std::size_t t = 0;     ///< branch width in field words
  int rounds = 0;        ///< round count
  u64 p = 0;             ///< field prime
};

/// Profile of a paired lattice profile name ("paper-16384", "test-8192",
/// "tiny-1024"). Throws ParameterError for unknown names.
CipherProfile cipher_profile(std::string_view name);
/// Profile from a serialized id. Throws SerializationError for unknown ids.
CipherProfile cipher_profile_by_id(u8 id);

/// Symmetric key: 2t words, left branch first.
struct SymKey {
  std::vector<u64> words;
};

using Nonce = std::array<u8, 16>;

/// Additive stream ciphertext: words c_j = (x_j + z_j) mod p under the
/// keystream z of (key, nonce); block j of t words uses block index j.
struct SymCiphertext {
  u8 profile_id = 0;
  Nonce nonce{};
  std::vector<u64> words;
};

/// One XOF-derived affine layer y = M x + c over F_p (row-major M).
struct AffineLayer {
  std::vector<u64> matrix;   ///< t*t, row-major
  std::vector<u64> constant; ///< t
};

/// 2t uniform words from a seeded XOF.
SymKey ske_gen(const CipherProfile& prof, const ring::Xof& seed);

/// Deterministic affine layer for (nonce, block, round, branch), guaranteed
/// invertible: singular draws are retried with the attempt counter folded
/// into the XOF domain tag (bounded; exceeding the bound is an internal
/// error of negligible probability).
AffineLayer gen_affine(const CipherProfile& prof, const Nonce& nonce,
                       u64 block_index, u32 round, u32 branch);

/// y = M x + c.
std::vector<u64> apply_affine(const CipherProfile& prof, const AffineLayer& a,
                              std::span<const u64> x);

/// t keystream words for one block.
std::vector<u64> keystream(const CipherProfile& prof, const SymKey& key,
                           const Nonce& nonce, u64 block_index);

/// Additive encryption of an arbitrary-length word vector (last block may be
/// short). Words must be < p (DomainError otherwise).
SymCiphertext ske_enc(const CipherProfile& prof, const SymKey& key,
                      const Nonce& nonce, std::span<const u64> x);
std::vector<u64> ske_dec(const CipherProfile& prof, const SymKey& key,
                         const SymCiphertext& ct);

/// Container format: magic "HHES", version, profile id, nonce, word count,
/// little-endian words.
void save(const SymCiphertext& ct, std::ostream& os);
SymCiphertext load_sym_ciphertext(std::istream& is);

} // namespace hhekit::sym
