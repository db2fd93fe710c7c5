// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hhekit/ring/modmath.hpp"

namespace hhekit::ring {

/// Precomputed tables for the negacyclic number-theoretic transform over
/// Z_q[X]/(X^n + 1), n a power of two, q ≡ 1 (mod 2n).
///
/// The forward transform evaluates a polynomial at the odd powers of a fixed
/// primitive 2n-th root of unity ψ; outputs are in bit-reversed evaluation
/// order: forward(a)[j] = a(ψ^(2·bitrev(j) + 1)). The inverse transform is the
/// exact mirror (Gentleman–Sande) with a final n^{-1} scaling. Pointwise
/// multiplication in the transformed domain realizes negacyclic convolution.
class NttTables {
public:
  NttTables() = default;
  NttTables(const Modulus& mod, std::size_t n);
  /// Builds tables around a caller-chosen primitive 2n-th root (used for
  /// small transforms that must agree with powers of a larger ring's root).
  NttTables(const Modulus& mod, std::size_t n, u64 psi);

  const Modulus& modulus() const { return mod_; }
  std::size_t n() const { return n_; }
  unsigned log_n() const { return log_n_; }
  u64 psi() const { return psi_; }

  /// In-place forward NTT of n coefficients (coefficient -> evaluation).
  void forward(u64* a) const;
  /// In-place inverse NTT of n values (evaluation -> coefficient).
  void inverse(u64* a) const;

private:
  Modulus mod_;
  std::size_t n_ = 0;
  unsigned log_n_ = 0;
  u64 psi_ = 0;
  std::vector<u64> roots_, roots_shoup_;         // ψ^bitrev(i), Shoup pairs
  std::vector<u64> inv_roots_, inv_roots_shoup_; // inverses of roots_
  u64 inv_n_ = 0, inv_n_shoup_ = 0;
  u64 w_last_ = 0, w_last_shoup_ = 0; // inv_roots_[1] / n, for the last stage
};

/// Reverses the lowest `bits` bits of v.
inline u64 bit_reverse(u64 v, unsigned bits) {
  u64 r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | ((v >> i) & 1);
  }
  return r;
}

} // namespace hhekit::ring
