// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "hhekit/bfv/ciphertext.hpp"
#include "hhekit/bfv/keys.hpp"
#include "hhekit/bfv/plaintext.hpp"

namespace hhekit::bfv {

/// Public-key encryption. Fresh ciphertexts sit at the full level and carry
/// the profile's multiplicative-depth budget.
class Encryptor {
public:
  Encryptor(std::shared_ptr<const BfvContext> ctx, PublicKey pk);

  Ciphertext encrypt(const Plaintext& pt, ring::Xof& rng) const;

  /// Encryption of the zero plaintext (used where only randomization is
  /// needed).
  Ciphertext encrypt_zero(ring::Xof& rng) const;

private:
  std::shared_ptr<const BfvContext> ctx_;
  PublicKey pk_;
  ring::GaussianSampler gauss_;
};

/// Secret-key decryption with exact big-integer rescaling and the
/// invariant-noise budget readout.
class Decryptor {
public:
  Decryptor(std::shared_ptr<const BfvContext> ctx, const SecretKey& sk);

  Plaintext decrypt(const Ciphertext& ct) const;

  /// floor(log2(Q_ell / (2 max|r|))) clamped at 0; a ciphertext whose
  /// decryption is no longer guaranteed correct reports <= 0.
  int invariant_noise_budget(const Ciphertext& ct) const;

private:
  ring::RnsPoly phase(const Ciphertext& ct) const;

  std::shared_ptr<const BfvContext> ctx_;
  ring::RnsPoly s_ntt_;
  ring::RnsPoly s2_ntt_;
};

} // namespace hhekit::bfv
