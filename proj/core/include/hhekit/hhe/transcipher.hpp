// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hhekit/bfv/encryptor.hpp"
#include "hhekit/bfv/evaluator.hpp"
#include "hhekit/bfv/plaintext.hpp"
#include "hhekit/hhe/bundle.hpp"
#include "hhekit/sym/pasta.hpp"

namespace hhekit::hhe {

/// The homomorphically encrypted symmetric key: one ciphertext whose slots
/// 0..2t-1 hold the key words (left branch first) and whose remaining slots
/// are zero. Fresh encryptions of a profile all serialize to the same size.
struct EncryptedSymKey {
  bfv::Ciphertext ct;
};

/// One transciphered data block: slots j with j mod 2t < t of the first
/// 2t-slot window hold the block's plaintext words (the same t words repeat
/// in every window); the other slots carry keystream residue that downstream
/// circuits mask away. A short final block leaves its tail slots as residue
/// too.
struct TranscipheredInput {
  bfv::Ciphertext ct;
  u64 block_index = 0;
  sym::Nonce nonce{};
};

/// A one-layer linear circuit with confidential coefficients: the weights
/// and the bias vector travel as ciphertexts under the keyholder's public
/// key; only the dimensions are public. Weight row r is split along the
/// input blocks, one ciphertext per (row, block) pair at index
/// r * ceil(in_dim / t) + b, each matching the corresponding transciphered
/// block's slot layout so the product needs no repacking (and no repacking
/// noise). Row r of the result lands in slot r of the output ciphertext.
struct LinearLayerCircuit {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<bfv::Ciphertext> w_rows; ///< out_dim * ceil(in_dim/t) cts
  bfv::Ciphertext bias;                ///< row r's bias in slot r
};

/// Transciphering engine for one lattice/cipher profile pair. Symmetric
/// ciphertexts come in under the stream cipher; `hhe_decomp` turns them into
/// lattice ciphertexts by evaluating the cipher's decryption homomorphically;
/// `hhe_eval` then runs an encrypted linear layer over the blocks.
///
/// Operation counters are split by phase so cost reports can separate the
/// per-message key expansion from the per-block transciphering work:
/// `block_ops` grows by exactly the same amount for every block.
class Transcipher {
public:
  explicit Transcipher(std::shared_ptr<const bfv::BfvContext> ctx);

  const sym::CipherProfile& cipher() const { return prof_; }
  const bfv::BatchEncoder& encoder() const { return encoder_; }

  /// Client-side encryption: derives a fresh symmetric key and nonce from
  /// `seed`, stream-encrypts `x` (words < p, non-empty), and encrypts the
  /// key under `pk`. The symmetric key itself is not returned. Throws
  /// DomainError for an empty or out-of-range input.
  std::pair<sym::SymCiphertext, EncryptedSymKey>
  hhe_enc(const bfv::PublicKey& pk, std::span<const u64> x,
          const ring::Xof& seed) const;

  /// Encrypts an existing symmetric key under `pk` (key words in slots
  /// 0..2t-1, zeros elsewhere). Lets a client keep one long-lived key and
  /// ship the same encrypted key alongside many stream ciphertexts.
  EncryptedSymKey encrypt_key(const bfv::PublicKey& pk, const sym::SymKey& key,
                              const ring::Xof& seed) const;

  /// Server-side transciphering: homomorphically decrypts every block of `c`
  /// under the encrypted key, spending five depth units per block (two
  /// Feistel squarings, a two-unit cube, and one aggregate plaintext-mask
  /// unit). Block b of the result carries block_index b and the input's
  /// nonce.
  std::vector<TranscipheredInput> hhe_decomp(const EvaluationKey& evk,
                                             const sym::SymCiphertext& c,
                                             const EncryptedSymKey& ck);

  /// Encrypts a linear layer (row-major signed weights, one bias per row)
  /// for `hhe_eval`. Requires 1 <= out_dim <= 8 and 1 <= in_dim <= 8t.
  LinearLayerCircuit make_linear_circuit(const bfv::PublicKey& pk,
                                         std::size_t in_dim,
                                         std::size_t out_dim,
                                         std::span<const i64> weights,
                                         std::span<const i64> bias,
                                         const ring::Xof& seed) const;

  /// Applies the encrypted linear layer to the transciphered blocks of one
  /// message (consecutive block indices from zero, one shared nonce, block
  /// count matching ceil(in_dim / t)). Slot r of the result holds
  /// sum_j w[r][j] x[j] + b[r] mod p (repeated every eight slots). Spends
  /// the remaining two depth units (one ciphertext product, one aggregate
  /// mask unit).
  bfv::Ciphertext hhe_eval(const EvaluationKey& evk,
                           const LinearLayerCircuit& circuit,
                           std::span<const TranscipheredInput> inputs);

  /// Expands an encrypted key into the 2t-periodic state layout every block
  /// evaluation starts from (doubling shifts plus one row swap).
  bfv::Ciphertext expand_key(const EvaluationKey& evk,
                             const EncryptedSymKey& ck);

  /// Homomorphic keystream state for one block: slots j with j mod 2t < t
  /// hold the keystream words of `keystream(prof, key, nonce, block_index)`.
  bfv::Ciphertext keystream_ct(const EvaluationKey& evk,
                               const bfv::Ciphertext& expanded,
                               const sym::Nonce& nonce, u64 block_index);

  /// Phase-split operation counters (accumulated; reset with `reset_ops`).
  const OpCounters& expand_ops() const { return expand_ops_; }
  const OpCounters& block_ops() const { return block_ops_; }
  const OpCounters& eval_ops() const { return eval_ops_; }
  void reset_ops();

private:
  bfv::Ciphertext keystream_internal(const EvaluationKey& evk,
                                     const bfv::Ciphertext& expanded,
                                     const sym::Nonce& nonce,
                                     u64 block_index);
  bfv::Ciphertext decomp_block(const EvaluationKey& evk,
                               const sym::SymCiphertext& c,
                               const bfv::Ciphertext& expanded,
                               u64 block_index);

  std::shared_ptr<const bfv::BfvContext> ctx_;
  sym::CipherProfile prof_;
  bfv::BatchEncoder encoder_;
  bfv::Evaluator eval_;
  bfv::EncodedPlaintext feistel_mask_; ///< 2t-periodic [0, 1^(t-1)] x 2
  // Repeated decompositions under one encrypted key skip the re-expansion.
  std::vector<u64> cached_ck_;
  bfv::Ciphertext cached_expanded_;
  bool has_cache_ = false;
  OpCounters expand_ops_;
  OpCounters block_ops_;
  OpCounters eval_ops_;
};

/// Decrypts and decodes an evaluation result with the bundle's secret key.
/// Throws NoiseError when the ciphertext's invariant noise budget is
/// exhausted (the plaintext would be garbage).
std::vector<u64> hhe_dec(const HheKeyBundle& bundle, const bfv::Ciphertext& ct);

} // namespace hhekit::hhe
