// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/ring/ntt.hpp"

namespace hhekit::ring {

namespace {

// Deterministically finds a primitive 2n-th root of unity mod q. For n a
// power of two, any x with x^((q-1)/2n) raising to the n-th power equal to -1
// necessarily has exact order 2n.
u64 find_primitive_root(const Modulus& mod, u64 two_n) {
  const u64 q = mod.q;
  if ((q - 1) % two_n != 0) {
    throw ParameterError("NttTables: modulus not NTT-friendly for this n");
  }
  const u64 exp = (q - 1) / two_n;
  for (u64 x = 2;; ++x) {
    if (x >= q) throw ParameterError("NttTables: no primitive root found");
    const u64 cand = pow_mod(x, exp, mod);
    if (pow_mod(cand, two_n / 2, mod) == q - 1) return cand;
  }
}

} // namespace

NttTables::NttTables(const Modulus& mod, std::size_t n)
    : NttTables(mod, n, find_primitive_root(mod, u64(2 * n))) {}

NttTables::NttTables(const Modulus& mod, std::size_t n, u64 psi)
    : mod_(mod), n_(n) {
  if (n < 4 || (n & (n - 1)) != 0) {
    throw ParameterError("NttTables: n must be a power of two >= 4");
  }
  log_n_ = 0;
  while ((std::size_t(1) << log_n_) < n) ++log_n_;
  if (psi == 0 || pow_mod(psi, u64(n), mod) != mod.q - 1) {
    throw ParameterError("NttTables: psi is not a primitive 2n-th root");
  }
  psi_ = psi;

  roots_.resize(n);
  roots_shoup_.resize(n);
  inv_roots_.resize(n);
  inv_roots_shoup_.resize(n);
  const u64 psi_inv = inv_mod(psi_, mod_);
  u64 power = 1, inv_power = 1;
  // roots_[bitrev(i)] = psi^i  (filled by iterating i and scattering).
  std::vector<u64> pows(n), inv_pows(n);
  for (std::size_t i = 0; i < n; ++i) {
    pows[i] = power;
    inv_pows[i] = inv_power;
    power = mul_mod(power, psi_, mod_);
    inv_power = mul_mod(inv_power, psi_inv, mod_);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = std::size_t(bit_reverse(i, log_n_));
    roots_[j] = pows[i];
    inv_roots_[j] = inv_pows[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    roots_shoup_[i] = shoup_precompute(roots_[i], mod_);
    inv_roots_shoup_[i] = shoup_precompute(inv_roots_[i], mod_);
  }
  inv_n_ = inv_mod(u64(n), mod_);
  inv_n_shoup_ = shoup_precompute(inv_n_, mod_);
  w_last_ = mul_mod(inv_roots_[1], inv_n_, mod_);
  w_last_shoup_ = shoup_precompute(w_last_, mod_);
}

void NttTables::forward(u64* a) const {
  // Harvey-style lazy butterflies: values stay in [0, 4q) between stages and
  // are normalized once at the end. Requires 4q < 2^64 (q < 2^62, guaranteed
  // by Modulus).
  const u64 q = mod_.q;
  const u64 two_q = 2 * q;
  std::size_t t = n_ >> 1;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const u64 w = roots_[m + i];
      const u64 ws = roots_shoup_[m + i];
      u64* x = a + j1;
      u64* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        // (x, y) -> (x + w*y, x - w*y), x reduced to [0,2q), w*y in [0,2q).
        u64 u = x[j];
        u -= (u >= two_q) ? two_q : 0;
        const u64 hi = u64((u128(y[j]) * ws) >> 64);
        const u64 v = y[j] * w - hi * q;
        x[j] = u + v;
        y[j] = u - v + two_q;
      }
      j1 += 2 * t;
    }
    t >>= 1;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    u64 r = a[i];
    r -= (r >= two_q) ? two_q : 0;
    r -= (r >= q) ? q : 0;
    a[i] = r;
  }
}

void NttTables::inverse(u64* a) const {
  // Lazy mirror butterflies with values in [0, 2q); the final stage folds the
  // 1/n scaling into its twiddle so no separate normalization pass is needed.
  const u64 q = mod_.q;
  const u64 two_q = 2 * q;
  std::size_t t = 1;
  for (std::size_t m = n_ >> 1; m > 1; m >>= 1) {
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const u64 w = inv_roots_[m + i];
      const u64 ws = inv_roots_shoup_[m + i];
      u64* x = a + j1;
      u64* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        // (x, y) -> (x + y, (x - y) * w), both outputs in [0, 2q).
        const u64 u = x[j];
        const u64 v = y[j];
        u64 s = u + v;
        s -= (s >= two_q) ? two_q : 0;
        x[j] = s;
        const u64 d = u - v + two_q;
        const u64 hi = u64((u128(d) * ws) >> 64);
        y[j] = d * w - hi * q;
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  // Last stage (m == 1): multiply the sum branch by 1/n and the difference
  // branch by inv_roots_[1]/n, fully reduced.
  u64* x = a;
  u64* y = a + t;
  for (std::size_t j = 0; j < t; ++j) {
    const u64 u = x[j];
    const u64 v = y[j];
    x[j] = mul_mod_shoup(u + v, inv_n_, inv_n_shoup_, mod_);
    y[j] = mul_mod_shoup(u - v + two_q, w_last_, w_last_shoup_, mod_);
  }
}

} // namespace hhekit::ring
