// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hhekit/bfv/params.hpp"
#include "hhekit/ring/sampling.hpp"
#include "hhekit/ring/xof.hpp"

namespace hhekit::bfv {

/// Secret key: ternary s, kept as NTT limbs over the full q basis plus the
/// special-prime limb (for key-switching key generation), and as raw signed
/// coefficients (for serialization and test oracles).
struct SecretKey {
  ring::RnsPoly s_ntt;          ///< all q limbs, NTT domain
  std::vector<u64> s_sp_ntt;    ///< special-prime limb, NTT domain
  std::vector<int> s_coeff;     ///< ternary coefficients in {-1, 0, 1}
};

/// Public key (b, a) with b = e - a*s over the full q basis, NTT domain.
struct PublicKey {
  ring::RnsPoly b;
  ring::RnsPoly a;
};

/// One digit of a hybrid key-switching key, over q basis + special prime.
struct KskDigit {
  ring::RnsPoly b_q;
  ring::RnsPoly a_q;
  std::vector<u64> b_sp;
  std::vector<u64> a_sp;
};

/// Key-switching key from some source secret to the main secret: digit j
/// carries sp * E_j * s_src in its b part, where E_j is a CRT idempotent over
/// the full q basis — which makes the same key valid at every prefix level.
struct KswitchKey {
  std::vector<KskDigit> digits;
};

using RelinKey = KswitchKey;

/// Galois element for a cyclic left row rotation by `step` slots (negative
/// steps rotate right). step is taken modulo the row size; 0 maps to the
/// identity element 1.
u64 galois_elt_from_step(const BfvContext& ctx, long step);

/// Galois element for the row swap (X -> X^(2n-1)).
u64 galois_elt_row_swap(const BfvContext& ctx);

/// Key bundle for the rotation steps a workload declared up front. Requests
/// for undeclared elements throw ParameterError.
struct GaloisKeys {
  std::map<u64, KswitchKey> keys;

  bool has(u64 elt) const { return keys.count(elt) != 0; }
  const KswitchKey& at(u64 elt) const;
};

/// Deterministic key generation from a seeded XOF: every key material draw
/// comes from a domain-separated fork, so the same seed reproduces the same
/// bundle byte for byte.
class KeyGenerator {
public:
  KeyGenerator(std::shared_ptr<const BfvContext> ctx, const ring::Xof& seed);

  const SecretKey& secret_key() const { return sk_; }

  PublicKey make_public_key();
  RelinKey make_relin_key();
  KswitchKey make_galois_key(u64 elt);

  /// Keys for the declared rotation steps (plus the row swap when asked).
  GaloisKeys make_galois_keys(std::span<const long> steps, bool row_swap);

private:
  KswitchKey make_kswitch_key(const ring::RnsPoly& s_src_ntt,
                              const std::string& tag);

  std::shared_ptr<const BfvContext> ctx_;
  ring::Xof base_;
  ring::GaussianSampler gauss_;
  SecretKey sk_;
};

} // namespace hhekit::bfv
