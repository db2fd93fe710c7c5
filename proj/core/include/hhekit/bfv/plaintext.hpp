// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hhekit/bfv/params.hpp"

namespace hhekit::bfv {

/// A plaintext polynomial: n coefficients modulo t.
class Plaintext {
public:
  Plaintext() = default;
  explicit Plaintext(std::size_t n) : c_(n, 0) {}

  std::size_t n() const { return c_.size(); }
  std::span<u64> coeffs() { return c_; }
  std::span<const u64> coeffs() const { return c_; }
  u64& operator[](std::size_t i) { return c_[i]; }
  u64 operator[](std::size_t i) const { return c_[i]; }

  bool operator==(const Plaintext&) const = default;

private:
  std::vector<u64> c_;
};

/// A plaintext lifted (centered) into the ciphertext RNS basis and
/// NTT-transformed once per limb, ready for repeated pointwise
/// ciphertext-plaintext products. Stores all q limbs; a ciphertext at a lower
/// level simply uses the prefix.
class EncodedPlaintext {
public:
  EncodedPlaintext() = default;
  EncodedPlaintext(std::size_t limbs, std::size_t n)
      : limbs_(limbs), n_(n), data_(limbs * n, 0) {}

  std::size_t limbs() const { return limbs_; }
  std::size_t n() const { return n_; }
  std::span<u64> limb(std::size_t l) { return {data_.data() + l * n_, n_}; }
  std::span<const u64> limb(std::size_t l) const {
    return {data_.data() + l * n_, n_};
  }

  bool operator==(const EncodedPlaintext&) const = default;

private:
  std::size_t limbs_ = 0, n_ = 0;
  std::vector<u64> data_;
};

/// SIMD batching codec: packs n values of F_t into the n slots of a
/// plaintext polynomial (two rows of n/2; rotations act cyclically within
/// rows, the row swap exchanges them). Slot i of row 0 corresponds to
/// evaluation at psi^(3^i mod 2n), row 1 to psi^(-3^i mod 2n).
class BatchEncoder {
public:
  explicit BatchEncoder(std::shared_ptr<const BfvContext> ctx);

  std::size_t slot_count() const { return ctx_->n(); }
  std::size_t row_size() const { return ctx_->n() / 2; }

  /// values.size() <= n; missing slots are zero; every value must be < t.
  Plaintext encode(std::span<const u64> values) const;
  std::vector<u64> decode(const Plaintext& pt) const;

  /// Encodes a pattern of power-of-two length T (T | n/2) replicated
  /// periodically across both rows: slot i of either row holds
  /// pattern[i mod T]. Same result as encode() of the expanded vector.
  Plaintext encode_periodic(std::span<const u64> pattern) const;

  /// Lifts+transforms a plaintext for ct-pt products (dense path: one
  /// forward NTT per limb).
  EncodedPlaintext prepare(const Plaintext& pt) const;

  /// Fast path for periodic plaintexts: exploits that a T-periodic,
  /// row-symmetric slot vector has coefficients supported on multiples of
  /// n/(2T), so each limb needs a size-2T transform plus a table gather
  /// instead of a full NTT. Exactly equals prepare(encode_periodic(pattern)).
  EncodedPlaintext prepare_periodic(std::span<const u64> pattern) const;

  /// prepare_periodic for the special key-switching prime: one NTT-domain
  /// limb modulo sp, used to multiply masks into extended-basis products
  /// before the mod-down.
  std::vector<u64> prepare_periodic_sp(std::span<const u64> pattern) const;

  /// Compressed form of prepare_periodic + prepare_periodic_sp: k+1 blocks
  /// of 2T small-transform words (q limbs first, special prime last). The
  /// full-ring value at NTT position pos is block[periodic_positions(T)[pos]],
  /// so consumers can gather lazily instead of materializing n words per
  /// limb. Empty result when the period has no precomputed tables.
  std::vector<u64> prepare_periodic_small(std::span<const u64> pattern) const;
  /// NTT position -> small-transform slot for period T; empty if uncovered.
  std::span<const u32> periodic_positions(std::size_t T) const;

  const std::vector<u32>& index_map() const { return index_map_; }

private:
  // Per-period precomputation: a T-periodic row-symmetric slot vector lives
  // in a 2T-dimensional subring, so encoding reduces to one size-2T inverse
  // transform mod t and preparation to one size-2T forward transform per
  // limb. All small transforms use powers of the full ring's roots so their
  // outputs land on the same evaluation points.
  struct PeriodicTables {
    ring::NttTables ntt_t;             // size-2T tables mod t
    std::vector<ring::NttTables> ntt;  // per q limb, then the special prime
    std::vector<u32> eval_src;         // small-transform slot -> pattern index
    std::vector<u32> pos_to_eval;      // NTT position -> small-transform slot
  };
  // pattern -> centered 2T coefficient vector mod t (small inverse NTT)
  std::vector<u64> periodic_coeffs(std::span<const u64> pattern,
                                   const PeriodicTables& tabs) const;
  void prepare_periodic_limb(std::span<const u64> coeffs,
                             const PeriodicTables& tabs, std::size_t mod_idx,
                             const ring::Modulus& m, u64* dst) const;

  std::shared_ptr<const BfvContext> ctx_;
  std::vector<u32> index_map_; // slot -> NTT position
  std::map<std::size_t, PeriodicTables> periodic_;
};

} // namespace hhekit::bfv
