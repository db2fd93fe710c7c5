// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/ring/ring.hpp"

#include <sodium.h>

#include "hhekit/ring/xof.hpp"

namespace hhekit::ring {

NttBasis::NttBasis(std::size_t n, const std::vector<u64>& primes) : n_(n) {
  if (primes.empty()) throw ParameterError("NttBasis: empty prime list");
  mods_.reserve(primes.size());
  ntt_.reserve(primes.size());
  for (u64 p : primes) {
    if (!is_prime(p)) throw ParameterError("NttBasis: limb is not prime");
    mods_.emplace_back(p);
    ntt_.emplace_back(mods_.back(), n);
  }
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      if (primes[i] == primes[j]) throw ParameterError("NttBasis: duplicate limb");
    }
  }
}

RnsPoly::RnsPoly(const NttBasis& basis, std::size_t limbs, Domain domain)
    : basis_(&basis), limbs_(limbs), domain_(domain) {
  if (limbs == 0 || limbs > basis.size()) {
    throw ParameterError("RnsPoly: limb count out of range");
  }
  data_.assign(limbs * basis.n(), 0);
}

void RnsPoly::set_zero() { std::fill(data_.begin(), data_.end(), 0); }

void RnsPoly::to_ntt() {
  if (domain_ == Domain::ntt) throw DomainError("RnsPoly: already in NTT domain");
  for (std::size_t l = 0; l < limbs_; ++l) {
    basis_->ntt(l).forward(limb(l).data());
  }
  domain_ = Domain::ntt;
}

void RnsPoly::to_coeff() {
  if (domain_ == Domain::coeff) {
    throw DomainError("RnsPoly: already in coefficient domain");
  }
  for (std::size_t l = 0; l < limbs_; ++l) {
    basis_->ntt(l).inverse(limb(l).data());
  }
  domain_ = Domain::coeff;
}

void RnsPoly::check_compatible(const RnsPoly& o) const {
  if (basis_ != o.basis_) throw ParameterError("RnsPoly: basis mismatch");
  if (limbs_ != o.limbs_) throw DepthError("RnsPoly: level (limb count) mismatch");
  if (domain_ != o.domain_) throw DomainError("RnsPoly: domain mismatch");
}

RnsPoly& RnsPoly::add_inplace(const RnsPoly& o) {
  check_compatible(o);
  for (std::size_t l = 0; l < limbs_; ++l) {
    const Modulus& m = basis_->mod(l);
    u64* a = limb(l).data();
    const u64* b = o.limb(l).data();
    for (std::size_t i = 0; i < n(); ++i) a[i] = add_mod(a[i], b[i], m);
  }
  return *this;
}

RnsPoly& RnsPoly::sub_inplace(const RnsPoly& o) {
  check_compatible(o);
  for (std::size_t l = 0; l < limbs_; ++l) {
    const Modulus& m = basis_->mod(l);
    u64* a = limb(l).data();
    const u64* b = o.limb(l).data();
    for (std::size_t i = 0; i < n(); ++i) a[i] = sub_mod(a[i], b[i], m);
  }
  return *this;
}

RnsPoly& RnsPoly::negate_inplace() {
  for (std::size_t l = 0; l < limbs_; ++l) {
    const Modulus& m = basis_->mod(l);
    u64* a = limb(l).data();
    for (std::size_t i = 0; i < n(); ++i) a[i] = neg_mod(a[i], m);
  }
  return *this;
}

RnsPoly& RnsPoly::mul_pointwise_inplace(const RnsPoly& o) {
  check_compatible(o);
  if (domain_ != Domain::ntt) {
    throw DomainError("RnsPoly: pointwise product requires NTT domain");
  }
  for (std::size_t l = 0; l < limbs_; ++l) {
    const Modulus& m = basis_->mod(l);
    u64* a = limb(l).data();
    const u64* b = o.limb(l).data();
    for (std::size_t i = 0; i < n(); ++i) a[i] = mul_mod(a[i], b[i], m);
  }
  return *this;
}

RnsPoly& RnsPoly::mul_scalar_inplace(std::span<const u64> scalar_per_limb) {
  if (scalar_per_limb.size() < limbs_) {
    throw ParameterError("RnsPoly: scalar vector shorter than limb count");
  }
  for (std::size_t l = 0; l < limbs_; ++l) {
    const Modulus& m = basis_->mod(l);
    const u64 s = scalar_per_limb[l];
    const u64 s_shoup = shoup_precompute(reduce64(s, m), m);
    const u64 sr = reduce64(s, m);
    u64* a = limb(l).data();
    for (std::size_t i = 0; i < n(); ++i) a[i] = mul_mod_shoup(a[i], sr, s_shoup, m);
  }
  return *this;
}

void RnsPoly::drop_last_limb() {
  if (limbs_ <= 1) throw DepthError("RnsPoly: cannot drop the last remaining limb");
  --limbs_;
  data_.resize(limbs_ * n());
}

RnsPoly poly_mul(const RnsPoly& a, const RnsPoly& b) {
  if (&a.basis() != &b.basis()) throw ParameterError("poly_mul: basis mismatch");
  if (a.limbs() != b.limbs()) throw DepthError("poly_mul: level mismatch");
  if (a.domain() != Domain::coeff || b.domain() != Domain::coeff) {
    throw DomainError("poly_mul: operands must be in coefficient domain");
  }
  RnsPoly x = a, y = b;
  x.to_ntt();
  y.to_ntt();
  x.mul_pointwise_inplace(y);
  x.to_coeff();
  return x;
}

void apply_automorphism_coeff(const RnsPoly& in, u64 elt, RnsPoly& out) {
  if (in.domain() != Domain::coeff) {
    throw DomainError("apply_automorphism_coeff: input must be in coefficient domain");
  }
  const std::size_t n = in.n();
  if ((elt & 1) == 0 || elt >= 2 * n) {
    throw ParameterError("apply_automorphism_coeff: invalid Galois element");
  }
  out = RnsPoly(in.basis(), in.limbs(), Domain::coeff);
  for (std::size_t l = 0; l < in.limbs(); ++l) {
    const Modulus& m = in.basis().mod(l);
    const u64* src = in.limb(l).data();
    u64* dst = out.limb(l).data();
    u64 index = 0; // i * elt mod 2n, updated incrementally
    for (std::size_t i = 0; i < n; ++i) {
      if (index < n) {
        dst[index] = src[i];
      } else {
        dst[index - n] = neg_mod(src[i], m);
      }
      index += elt;
      if (index >= 2 * n) index -= 2 * n;
    }
  }
}

std::vector<u32> make_ntt_automorphism_perm(std::size_t n, unsigned log_n, u64 elt) {
  // Evaluation order: slot j holds the value at exponent e_j = 2*bitrev(j)+1.
  // The automorphism X -> X^elt sends the value at exponent e to exponent
  // position e*elt, so output slot j must read input slot j' with
  // e_{j'} = e_j * elt (mod 2n).
  std::vector<u32> perm(n);
  const u64 two_n = 2 * n;
  for (std::size_t j = 0; j < n; ++j) {
    const u64 e_j = 2 * bit_reverse(u64(j), log_n) + 1;
    const u64 src_exp = u64((u128(e_j) * elt) % two_n);
    const u64 j_src = bit_reverse((src_exp - 1) / 2, log_n);
    perm[j] = u32(j_src);
  }
  return perm;
}

RingParams::RingParams(std::size_t n, const std::vector<u64>& q_primes, u64 t)
    : q_basis_(n, q_primes), t_(t), t_ntt_(t_, n) {
  for (u64 q : q_primes) {
    if (q == t) throw ParameterError("RingParams: plaintext modulus among limbs");
    if (q <= t) throw ParameterError("RingParams: limb prime not larger than t");
  }
}

std::array<u8, 32> RingParams::params_hash() const {
  ensure_sodium();
  std::vector<u8> enc;
  auto push_u64 = [&enc](u64 v) {
    for (int i = 0; i < 8; ++i) enc.push_back(u8(v >> (8 * i)));
  };
  push_u64(u64(n()));
  push_u64(t_.q);
  push_u64(u64(q_basis_.size()));
  for (std::size_t l = 0; l < q_basis_.size(); ++l) push_u64(q_basis_.mod(l).q);
  std::array<u8, 32> out{};
  crypto_generichash(out.data(), out.size(), enc.data(), enc.size(), nullptr, 0);
  return out;
}

} // namespace hhekit::ring
