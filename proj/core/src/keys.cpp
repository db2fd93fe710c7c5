// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/bfv/keys.hpp"

#include <bit>
#include <string>

namespace hhekit::bfv {

namespace {

using ring::Domain;
using ring::Modulus;
using ring::RnsPoly;

// Embeds a signed integer value into Z_q (centered lift).
inline u64 lift_signed(i64 v, const Modulus& q) {
  return v >= 0 ? static_cast<u64>(v) : q.q - static_cast<u64>(-v);
}

} // namespace

u64 galois_elt_from_step(const BfvContext& ctx, long step) {
  const std::size_t n = ctx.n();
  const u64 m = 2 * static_cast<u64>(n);
  const long row = static_cast<long>(n / 2);
  long k = step % row;
  if (k < 0) {
    k += row;
  }
  if (k == 0) {
    return 1;
  }
  return ring::pow_mod(3, static_cast<u64>(k), Modulus(m));
}

u64 galois_elt_row_swap(const BfvContext& ctx) {
  return 2 * static_cast<u64>(ctx.n()) - 1;
}

const KswitchKey& GaloisKeys::at(u64 elt) const {
  auto it = keys.find(elt);
  if (it == keys.end()) {
    throw ParameterError(
        "missing Galois key for element " + std::to_string(elt) +
        ": rotation step was not declared when the key set was generated");
  }
  return it->second;
}

KeyGenerator::KeyGenerator(std::shared_ptr<const BfvContext> ctx,
                           const ring::Xof& seed)
    : ctx_(std::move(ctx)), base_(seed.fork("hhekit/keygen")),
      gauss_(3.2, 19) {
  const std::size_t n = ctx_->n();
  const std::size_t k = ctx_->q_limbs();

  ring::Xof sk_xof = base_.fork("sk");
  sk_.s_coeff.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    sk_.s_coeff[c] = static_cast<int>(sk_xof.uniform(3)) - 1;
  }
  sk_.s_ntt = RnsPoly(ctx_->basis_q(), k, Domain::coeff);
  for (std::size_t i = 0; i < k; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    auto dst = sk_.s_ntt.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = lift_signed(sk_.s_coeff[c], qi);
    }
  }
  sk_.s_ntt.to_ntt();
  sk_.s_sp_ntt.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    sk_.s_sp_ntt[c] = lift_signed(sk_.s_coeff[c], ctx_->sp());
  }
  ctx_->sp_ntt().forward(sk_.s_sp_ntt.data());
}

PublicKey KeyGenerator::make_public_key() {
  const std::size_t n = ctx_->n();
  const std::size_t k = ctx_->q_limbs();
  ring::Xof xof = base_.fork("pk");

  PublicKey pk;
  pk.a = RnsPoly(ctx_->basis_q(), k, Domain::ntt);
  ring::sample_uniform(pk.a, xof);

  RnsPoly e(ctx_->basis_q(), k, Domain::coeff);
  std::vector<int> draws(n);
  for (std::size_t c = 0; c < n; ++c) {
    draws[c] = gauss_.draw(xof);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    auto dst = e.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = lift_signed(draws[c], qi);
    }
  }
  e.to_ntt();

  pk.b = std::move(e);
  RnsPoly as = pk.a;
  as.mul_pointwise_inplace(sk_.s_ntt);
  pk.b.sub_inplace(as);
  return pk;
}

KswitchKey KeyGenerator::make_kswitch_key(const RnsPoly& s_src_ntt,
                                          const std::string& tag) {
  const std::size_t n = ctx_->n();
  const std::size_t k = ctx_->q_limbs();
  const Modulus& sp = ctx_->sp();
  ring::Xof xof = base_.fork(tag);

  KswitchKey ksk;
  ksk.digits.resize(k);
  std::vector<int> draws(n);
  for (std::size_t j = 0; j < k; ++j) {
    KskDigit& d = ksk.digits[j];
    d.a_q = RnsPoly(ctx_->basis_q(), k, Domain::ntt);
    ring::sample_uniform(d.a_q, xof);
    d.a_sp = ring::sample_uniform_words(xof, n, sp.q);

    for (std::size_t c = 0; c < n; ++c) {
      draws[c] = gauss_.draw(xof);
    }
    RnsPoly e(ctx_->basis_q(), k, Domain::coeff);
    for (std::size_t i = 0; i < k; ++i) {
      const Modulus& qi = ctx_->basis_q().mod(i);
      auto dst = e.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = lift_signed(draws[c], qi);
      }
    }
    e.to_ntt();

    // b_q = e - a*s + (sp * E_j mod q_i) * s_src, all NTT-pointwise.
    RnsPoly as = d.a_q;
    as.mul_pointwise_inplace(sk_.s_ntt);
    d.b_q = std::move(e);
    d.b_q.sub_inplace(as);
    for (std::size_t i = 0; i < k; ++i) {
      const Modulus& qi = ctx_->basis_q().mod(i);
      const u64 w = ctx_->spE_mod_q()[j][i];
      auto dst = d.b_q.limb(i);
      auto src = s_src_ntt.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = ring::add_mod(dst[c], ring::mul_mod(w, src[c], qi), qi);
      }
    }

    // Special-prime limb: sp*E_j vanishes mod sp, so only e - a*s remains.
    d.b_sp.resize(n);
    std::vector<u64> e_sp(n);
    for (std::size_t c = 0; c < n; ++c) {
      e_sp[c] = lift_signed(draws[c], sp);
    }
    ctx_->sp_ntt().forward(e_sp.data());
    for (std::size_t c = 0; c < n; ++c) {
      d.b_sp[c] = ring::sub_mod(
          e_sp[c], ring::mul_mod(d.a_sp[c], sk_.s_sp_ntt[c], sp), sp);
    }
  }
  return ksk;
}

RelinKey KeyGenerator::make_relin_key() {
  RnsPoly s2 = sk_.s_ntt;
  s2.mul_pointwise_inplace(sk_.s_ntt);
  return make_kswitch_key(s2, "relin");
}

KswitchKey KeyGenerator::make_galois_key(u64 elt) {
  const std::size_t n = ctx_->n();
  const u64 m = 2 * static_cast<u64>(n);
  if (elt % 2 == 0 || elt >= m) {
    throw ParameterError("Galois element must be odd and less than 2n");
  }
  const unsigned log_n =
      static_cast<unsigned>(std::countr_zero(static_cast<u64>(n)));
  const std::vector<u32> perm = ring::make_ntt_automorphism_perm(n, log_n, elt);

  RnsPoly s_src(ctx_->basis_q(), ctx_->q_limbs(), Domain::ntt);
  for (std::size_t i = 0; i < ctx_->q_limbs(); ++i) {
    auto src = sk_.s_ntt.limb(i);
    auto dst = s_src.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = src[perm[c]];
    }
  }
  return make_kswitch_key(s_src, "galois/" + std::to_string(elt));
}

GaloisKeys KeyGenerator::make_galois_keys(std::span<const long> steps,
                                          bool row_swap) {
  GaloisKeys gk;
  for (long step : steps) {
    const u64 elt = galois_elt_from_step(*ctx_, step);
    if (elt == 1 || gk.keys.count(elt) != 0) {
      continue;
    }
    gk.keys.emplace(elt, make_galois_key(elt));
  }
  if (row_swap) {
    const u64 elt = galois_elt_row_swap(*ctx_);
    if (gk.keys.count(elt) == 0) {
      gk.keys.emplace(elt, make_galois_key(elt));
    }
  }
  return gk;
}

} // namespace hhekit::bfv
