// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/ring/modmath.hpp"

namespace hhekit::ring {

Modulus::Modulus(u64 value) : q(value) {
  if (q < 2 || q >= (u64(1) << 62)) {
    throw ParameterError("Modulus must be in [2, 2^62)");
  }
  // floor(2^128 / q) from the max-u128 division.
  const u128 all_ones = ~u128(0);
  u128 ratio = all_ones / q;
  const u128 rem = all_ones % q;
  if (rem == u128(q - 1)) ratio += 1;
  ratio0 = u64(ratio);
  ratio1 = u64(ratio >> 64);
}

u64 pow_mod(u64 base, u64 exp, const Modulus& m) {
  u64 result = 1;
  u64 b = reduce64(base, m);
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, const Modulus& m) {
  a = reduce64(a, m);
  if (a == 0) throw ParameterError("inv_mod: zero is not invertible");
  // Extended Euclid on (a, q); works for any modulus, not just primes.
  i64 t = 0, new_t = 1;
  u64 r = m.q, new_r = a;
  while (new_r != 0) {
    const u64 quotient = r / new_r;
    const i64 tmp_t = t - i64(quotient) * new_t;
    t = new_t;
    new_t = tmp_t;
    const u64 tmp_r = r - quotient * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) throw ParameterError("inv_mod: value not invertible");
  return t < 0 ? u64(t + i64(m.q)) : u64(t);
}

namespace {

u64 mulmod_u128(u64 a, u64 b, u64 n) { return u64(u128(a) * b % n); }

u64 powmod_u128(u64 a, u64 e, u64 n) {
  u64 r = 1;
  a %= n;
  while (e != 0) {
    if (e & 1) r = mulmod_u128(r, a, n);
    a = mulmod_u128(a, a, n);
    e >>= 1;
  }
  return r;
}

} // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Deterministic witness set, exact for all 64-bit integers.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod_u128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mulmod_u128(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> find_ntt_primes(unsigned bits, u64 two_n, std::size_t count,
                                 std::size_t skip) {
  if (bits < 10 || bits > 61) throw ParameterError("find_ntt_primes: bits out of range");
  if (two_n == 0 || (two_n & (two_n - 1)) != 0) {
    throw ParameterError("find_ntt_primes: two_n must be a power of two");
  }
  std::vector<u64> out;
  out.reserve(count);
  // Largest candidate of the form k * two_n + 1 below 2^bits.
  u64 value = ((u64(1) << bits) - 1) / two_n * two_n + 1;
  while (out.size() < count) {
    if (value <= two_n) throw ParameterError("find_ntt_primes: search exhausted");
    if (is_prime(value)) {
      if (skip > 0) {
        --skip;
      } else {
        out.push_back(value);
      }
    }
    value -= two_n;
  }
  return out;
}

PrimeField::PrimeField(u64 p) : m_(p) {
  if (!is_prime(p)) throw ParameterError("PrimeField: modulus must be prime");
}

} // namespace hhekit::ring
