// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hhekit/common.hpp"

namespace hhekit::ring {

/// A word-sized modulus together with its Barrett constant floor(2^128 / q),
/// enabling division-free reduction of 128-bit products. Moduli are required
/// to be odd primes below 2^62 (the library uses <= 60-bit NTT limbs).
struct Modulus {
  u64 q = 0;
  u64 ratio0 = 0; ///< low word of floor(2^128 / q)
  u64 ratio1 = 0; ///< high word of floor(2^128 / q)

  Modulus() = default;
  explicit Modulus(u64 value);

  bool operator==(const Modulus& o) const { return q == o.q; }
};

/// Reduces a 128-bit value modulo m (Barrett).
inline u64 reduce128(u128 x, const Modulus& m) {
  const u64 xlo = u64(x), xhi = u64(x >> 64);
  u64 carry = u64((u128(xlo) * m.ratio0) >> 64);
  u128 prod = u128(xlo) * m.ratio1;
  u64 lo = u64(prod), hi = u64(prod >> 64);
  const u64 tmp1a = lo + carry;
  const u64 tmp3 = hi + (tmp1a < lo);
  prod = u128(xhi) * m.ratio0;
  lo = u64(prod);
  hi = u64(prod >> 64);
  const u64 tmp1b = tmp1a + lo;
  carry = hi + (tmp1b < tmp1a);
  const u64 quot = xhi * m.ratio1 + tmp3 + carry;
  u64 res = xlo - quot * m.q;
  return res >= m.q ? res - m.q : res;
}

/// Reduces an arbitrary 64-bit value modulo m.
inline u64 reduce64(u64 x, const Modulus& m) { return reduce128(u128(x), m); }

inline u64 add_mod(u64 a, u64 b, const Modulus& m) {
  u64 s = a + b;
  return s >= m.q ? s - m.q : s;
}

inline u64 sub_mod(u64 a, u64 b, const Modulus& m) {
  return a >= b ? a - b : a + m.q - b;
}

inline u64 neg_mod(u64 a, const Modulus& m) { return a == 0 ? 0 : m.q - a; }

inline u64 mul_mod(u64 a, u64 b, const Modulus& m) {
  return reduce128(u128(a) * b, m);
}

/// Shoup precomputation floor(w * 2^64 / q) for a fixed multiplicand w < q.
inline u64 shoup_precompute(u64 w, const Modulus& m) {
  return u64((u128(w) << 64) / m.q);
}

/// Multiplies x by the fixed w given its Shoup constant. Requires q < 2^63.
inline u64 mul_mod_shoup(u64 x, u64 w, u64 w_shoup, const Modulus& m) {
  const u64 hi = u64((u128(x) * w_shoup) >> 64);
  const u64 r = x * w - hi * m.q;
  return r >= m.q ? r - m.q : r;
}

/// Modular exponentiation (square and multiply).
u64 pow_mod(u64 base, u64 exp, const Modulus& m);

/// Modular inverse. Throws ParameterError when a is not invertible (this
/// includes inversion of zero).
u64 inv_mod(u64 a, const Modulus& m);

/// Deterministic Miller-Rabin primality test, exact for 64-bit inputs.
bool is_prime(u64 n);

/// Returns `count` distinct primes p with p ≡ 1 (mod two_n), found by a
/// deterministic descending search from 2^bits, skipping the first `skip`
/// hits. Used for NTT-friendly limb generation.
std::vector<u64> find_ntt_primes(unsigned bits, u64 two_n, std::size_t count,
                                 std::size_t skip = 0);

/// Arithmetic in the prime field F_p. A thin, checked wrapper around Modulus
/// used by the symmetric cipher and the ML layer (p = 2^16 + 1 throughout).
class PrimeField {
public:
  explicit PrimeField(u64 p);

  u64 p() const { return m_.q; }
  const Modulus& modulus() const { return m_; }

  u64 add(u64 a, u64 b) const { return add_mod(a, b, m_); }
  u64 sub(u64 a, u64 b) const { return sub_mod(a, b, m_); }
  u64 neg(u64 a) const { return neg_mod(a, m_); }
  u64 mul(u64 a, u64 b) const { return mul_mod(a, b, m_); }
  u64 pow(u64 a, u64 e) const { return pow_mod(a, e, m_); }
  /// Throws ParameterError on inv(0).
  u64 inv(u64 a) const { return inv_mod(a, m_); }
  u64 reduce(u64 a) const { return reduce64(a, m_); }

private:
  Modulus m_;
};

} // namespace hhekit::ring
