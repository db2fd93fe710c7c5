// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/bfv/encryptor.hpp"

#include "hhekit/bfv/rns_tool.hpp"

namespace hhekit::bfv {

namespace {

using ring::Domain;
using ring::Modulus;
using ring::RnsPoly;

// Centered lift of a value mod t into Z_q.
inline u64 lift_mod_t(u64 v, u64 t, const Modulus& q) {
  return v > t / 2 ? q.q - (t - v) : v;
}

} // namespace

Encryptor::Encryptor(std::shared_ptr<const BfvContext> ctx, PublicKey pk)
    : ctx_(std::move(ctx)), pk_(std::move(pk)), gauss_(3.2, 19) {}

Ciphertext Encryptor::encrypt_zero(ring::Xof& rng) const {
  const std::size_t k = ctx_->q_limbs();

  RnsPoly u(ctx_->basis_q(), k, Domain::coeff);
  ring::sample_ternary(u, rng);
  u.to_ntt();

  RnsPoly e0(ctx_->basis_q(), k, Domain::coeff);
  gauss_.sample(e0, rng);
  e0.to_ntt();
  RnsPoly e1(ctx_->basis_q(), k, Domain::coeff);
  gauss_.sample(e1, rng);
  e1.to_ntt();

  RnsPoly c0 = pk_.b;
  c0.mul_pointwise_inplace(u);
  c0.add_inplace(e0);
  RnsPoly c1 = pk_.a;
  c1.mul_pointwise_inplace(u);
  c1.add_inplace(e1);

  std::vector<RnsPoly> comps;
  comps.push_back(std::move(c0));
  comps.push_back(std::move(c1));
  return Ciphertext(std::move(comps), ctx_->spec().depth_budget);
}

Ciphertext Encryptor::encrypt(const Plaintext& pt, ring::Xof& rng) const {
  const std::size_t n = ctx_->n();
  const std::size_t k = ctx_->q_limbs();
  if (pt.n() != n) {
    throw ParameterError("plaintext degree does not match the ring");
  }
  const u64 t = ctx_->plain_t();

  Ciphertext ct = encrypt_zero(rng);

  // c0 += Delta_k * m, per-limb lifted and NTT-transformed.
  std::vector<u64> tmp(n);
  for (std::size_t i = 0; i < k; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    const u64 delta = ctx_->delta_q()[k][i];
    for (std::size_t c = 0; c < n; ++c) {
      tmp[c] = ring::mul_mod(delta, lift_mod_t(pt[c], t, qi), qi);
    }
    ctx_->basis_q().ntt(i).forward(tmp.data());
    auto dst = ct.comp(0).limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = ring::add_mod(dst[c], tmp[c], qi);
    }
  }
  return ct;
}

Decryptor::Decryptor(std::shared_ptr<const BfvContext> ctx,
                     const SecretKey& sk)
    : ctx_(std::move(ctx)), s_ntt_(sk.s_ntt) {
  s2_ntt_ = s_ntt_;
  s2_ntt_.mul_pointwise_inplace(s_ntt_);
}

ring::RnsPoly Decryptor::phase(const Ciphertext& ct) const {
  if (ct.size() < 2 || ct.size() > 3) {
    throw ParameterError("decryption expects 2 or 3 ciphertext components");
  }
  const std::size_t ell = ct.limbs();
  RnsPoly acc = ct.comp(0);
  RnsPoly c1s = ct.comp(1);
  c1s.mul_pointwise_inplace(prefix_copy(s_ntt_, ell));
  acc.add_inplace(c1s);
  if (ct.size() == 3) {
    RnsPoly c2s2 = ct.comp(2);
    c2s2.mul_pointwise_inplace(prefix_copy(s2_ntt_, ell));
    acc.add_inplace(c2s2);
  }
  acc.to_coeff();
  return acc;
}

Plaintext Decryptor::decrypt(const Ciphertext& ct) const {
  const DecryptScale ds = decrypt_scale_exact(*ctx_, phase(ct));
  Plaintext pt(ctx_->n());
  std::copy(ds.message.begin(), ds.message.end(), pt.coeffs().begin());
  return pt;
}

int Decryptor::invariant_noise_budget(const Ciphertext& ct) const {
  return decrypt_scale_exact(*ctx_, phase(ct)).noise_budget;
}

} // namespace hhekit::bfv
