// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/bfv/evaluator.hpp"

#include <algorithm>
#include <bit>

#include "hhekit/bfv/rns_tool.hpp"

namespace hhekit::bfv {

namespace {

using ring::Domain;
using ring::Modulus;
using ring::RnsPoly;

inline u64 lift_mod_t(u64 v, u64 t, const Modulus& q) {
  return v > t / 2 ? q.q - (t - v) : v;
}

void require_two_components(const Ciphertext& ct, const char* what) {
  if (ct.size() != 2) {
    throw ParameterError(std::string(what) +
                         ": ciphertext must have exactly two components "
                         "(relinearize first)");
  }
}

} // namespace

Evaluator::Evaluator(std::shared_ptr<const BfvContext> ctx)
    : ctx_(std::move(ctx)) {}

void Evaluator::check_same_shape(const Ciphertext& a,
                                 const Ciphertext& b) const {
  if (a.size() != b.size()) {
    throw ParameterError("operands have different component counts");
  }
  if (a.limbs() != b.limbs()) {
    throw ParameterError("operands sit at different levels");
  }
}

void Evaluator::add_inplace(Ciphertext& a, const Ciphertext& b) {
  check_same_shape(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.comp(i).add_inplace(b.comp(i));
  }
  a.set_depth_budget(std::min(a.depth_budget(), b.depth_budget()));
  counters_.adds += 1;
}

void Evaluator::sub_inplace(Ciphertext& a, const Ciphertext& b) {
  check_same_shape(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.comp(i).sub_inplace(b.comp(i));
  }
  a.set_depth_budget(std::min(a.depth_budget(), b.depth_budget()));
  counters_.adds += 1;
}

Ciphertext Evaluator::add(const Ciphertext& a, const Ciphertext& b) {
  Ciphertext out = a;
  add_inplace(out, b);
  return out;
}

void Evaluator::negate_inplace(Ciphertext& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.comp(i).negate_inplace();
  }
}

void Evaluator::add_plain_inplace(Ciphertext& a, const Plaintext& pt) {
  const std::size_t n = ctx_->n();
  if (pt.n() != n) {
    throw ParameterError("plaintext degree does not match the ring");
  }
  const std::size_t ell = a.limbs();
  const u64 t = ctx_->plain_t();
  std::vector<u64> tmp(n);
  for (std::size_t i = 0; i < ell; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    const u64 delta = ctx_->delta_q()[ell][i];
    for (std::size_t c = 0; c < n; ++c) {
      tmp[c] = ring::mul_mod(delta, lift_mod_t(pt[c], t, qi), qi);
    }
    ctx_->basis_q().ntt(i).forward(tmp.data());
    auto dst = a.comp(0).limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = ring::add_mod(dst[c], tmp[c], qi);
    }
  }
  counters_.adds += 1;
}

void Evaluator::sub_plain_inplace(Ciphertext& a, const Plaintext& pt) {
  const std::size_t n = ctx_->n();
  if (pt.n() != n) {
    throw ParameterError("plaintext degree does not match the ring");
  }
  const std::size_t ell = a.limbs();
  const u64 t = ctx_->plain_t();
  std::vector<u64> tmp(n);
  for (std::size_t i = 0; i < ell; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    const u64 delta = ctx_->delta_q()[ell][i];
    for (std::size_t c = 0; c < n; ++c) {
      tmp[c] = ring::mul_mod(delta, lift_mod_t(pt[c], t, qi), qi);
    }
    ctx_->basis_q().ntt(i).forward(tmp.data());
    auto dst = a.comp(0).limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = ring::sub_mod(dst[c], tmp[c], qi);
    }
  }
  counters_.adds += 1;
}

void Evaluator::mul_plain_inplace(Ciphertext& a, const EncodedPlaintext& ep) {
  const std::size_t n = ctx_->n();
  const std::size_t ell = a.limbs();
  if (ep.n() != n || ep.limbs() < ell) {
    throw ParameterError("prepared plaintext does not cover this level");
  }
  for (std::size_t comp = 0; comp < a.size(); ++comp) {
    if (a.comp(comp).domain() != Domain::ntt) {
      throw DomainError("ct-pt product requires NTT domain");
    }
    for (std::size_t i = 0; i < ell; ++i) {
      const Modulus& qi = ctx_->basis_q().mod(i);
      auto dst = a.comp(comp).limb(i);
      auto src = ep.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = ring::mul_mod(dst[c], src[c], qi);
      }
    }
  }
  counters_.ct_pt_muls += 1;
}

Ciphertext Evaluator::multiply(const Ciphertext& a, const Ciphertext& b) {
  check_same_shape(a, b);
  require_two_components(a, "multiply");
  const bool is_square = (&a == &b);
  const int budget = std::min(a.depth_budget(), b.depth_budget());
  if (budget <= 0) {
    throw DepthError("multiplicative depth budget exhausted");
  }

  // Extend every component into the auxiliary base. The q-side NTT
  // representation is the input itself; only the aux side needs transforms.
  auto extend = [&](const RnsPoly& comp_ntt) {
    RnsPoly coeff = comp_ntt;
    coeff.to_coeff();
    RnsPoly aux = extend_to_aux(*ctx_, coeff);
    aux.to_ntt();
    return aux;
  };
  const RnsPoly a0_aux = extend(a.comp(0));
  const RnsPoly a1_aux = extend(a.comp(1));
  const RnsPoly b0_aux = is_square ? a0_aux : extend(b.comp(0));
  const RnsPoly b1_aux = is_square ? a1_aux : extend(b.comp(1));

  auto tensor = [&](const RnsPoly& xq, const RnsPoly& xa, const RnsPoly& yq,
                    const RnsPoly& ya) {
    RnsPoly tq = xq;
    tq.mul_pointwise_inplace(yq);
    RnsPoly ta = xa;
    ta.mul_pointwise_inplace(ya);
    return std::make_pair(std::move(tq), std::move(ta));
  };

  auto [e0_q, e0_aux] = tensor(a.comp(0), a0_aux, b.comp(0), b0_aux);
  auto [e2_q, e2_aux] = tensor(a.comp(1), a1_aux, b.comp(1), b1_aux);
  auto [e1_q, e1_aux] = tensor(a.comp(0), a0_aux, b.comp(1), b1_aux);
  {
    auto [f1_q, f1_aux] = tensor(a.comp(1), a1_aux, b.comp(0), b0_aux);
    e1_q.add_inplace(f1_q);
    e1_aux.add_inplace(f1_aux);
  }

  std::vector<RnsPoly> out;
  out.reserve(3);
  auto finish = [&](RnsPoly& tq, RnsPoly& ta) {
    tq.to_coeff();
    ta.to_coeff();
    RnsPoly r = scale_round_tensor(*ctx_, tq, ta);
    r.to_ntt();
    return r;
  };
  out.push_back(finish(e0_q, e0_aux));
  out.push_back(finish(e1_q, e1_aux));
  out.push_back(finish(e2_q, e2_aux));

  counters_.ct_ct_muls += 1;
  return Ciphertext(std::move(out), budget - 1);
}

Ciphertext Evaluator::square(const Ciphertext& a) { return multiply(a, a); }

void Evaluator::relinearize_inplace(Ciphertext& ct, const RelinKey& rk) {
  if (ct.size() != 3) {
    throw ParameterError("relinearization expects three components");
  }
  const HoistedDigits hd = decompose(ct.comp(2));
  RnsPoly b_out, a_out;
  keyswitch_apply(hd, rk, b_out, a_out);
  ct.comp(0).add_inplace(b_out);
  ct.comp(1).add_inplace(a_out);
  ct.comps().resize(2);
  counters_.relins += 1;
}

Ciphertext Evaluator::mul_relin(const Ciphertext& a, const Ciphertext& b,
                                const RelinKey& rk) {
  Ciphertext out = multiply(a, b);
  relinearize_inplace(out, rk);
  return out;
}

Ciphertext Evaluator::square_relin(const Ciphertext& a, const RelinKey& rk) {
  Ciphertext out = square(a);
  relinearize_inplace(out, rk);
  return out;
}

const std::vector<u32>& Evaluator::perm_for(u64 elt) {
  auto it = perm_cache_.find(elt);
  if (it == perm_cache_.end()) {
    const unsigned log_n =
        static_cast<unsigned>(std::countr_zero(static_cast<u64>(ctx_->n())));
    it = perm_cache_
             .emplace(elt,
                      ring::make_ntt_automorphism_perm(ctx_->n(), log_n, elt))
             .first;
  }
  return it->second;
}

HoistedDigits Evaluator::decompose(const RnsPoly& input_ntt) const {
  const std::size_t n = ctx_->n();
  const std::size_t ell = input_ntt.limbs();
  const Modulus& sp = ctx_->sp();

  RnsPoly coeff = input_ntt;
  coeff.to_coeff();

  HoistedDigits hd;
  hd.ell = ell;
  hd.d_q.reserve(ell);
  hd.d_sp.reserve(ell);
  for (std::size_t j = 0; j < ell; ++j) {
    auto digit = coeff.limb(j);
    RnsPoly dq(ctx_->basis_q(), ell, Domain::coeff);
    for (std::size_t i = 0; i < ell; ++i) {
      const Modulus& qi = ctx_->basis_q().mod(i);
      auto dst = dq.limb(i);
      if (i == j) {
        std::copy(digit.begin(), digit.end(), dst.begin());
      } else {
        for (std::size_t c = 0; c < n; ++c) {
          dst[c] = ring::reduce64(digit[c], qi);
        }
      }
    }
    dq.to_ntt();
    hd.d_q.push_back(std::move(dq));

    std::vector<u64> dsp(n);
    for (std::size_t c = 0; c < n; ++c) {
      dsp[c] = ring::reduce64(digit[c], sp);
    }
    ctx_->sp_ntt().forward(dsp.data());
    hd.d_sp.push_back(std::move(dsp));
  }
  return hd;
}

HoistedDigits Evaluator::permute_digits(const HoistedDigits& hd,
                                        const std::vector<u32>& perm) const {
  // Digit decomposition commutes with the automorphism, so permuting the
  // precomputed digits equals decomposing the permuted component.
  const std::size_t n = ctx_->n();
  const std::size_t ell = hd.ell;
  HoistedDigits hp;
  hp.ell = ell;
  hp.d_q.reserve(ell);
  hp.d_sp.reserve(ell);
  for (std::size_t j = 0; j < ell; ++j) {
    RnsPoly dq(ctx_->basis_q(), ell, Domain::ntt);
    for (std::size_t i = 0; i < ell; ++i) {
      auto src = hd.d_q[j].limb(i);
      auto dst = dq.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = src[perm[c]];
      }
    }
    hp.d_q.push_back(std::move(dq));
    std::vector<u64> dsp(n);
    const std::vector<u64>& ssrc = hd.d_sp[j];
    for (std::size_t c = 0; c < n; ++c) {
      dsp[c] = ssrc[perm[c]];
    }
    hp.d_sp.push_back(std::move(dsp));
  }
  return hp;
}

void Evaluator::keyswitch_raw(const HoistedDigits& hd, const KswitchKey& ksk,
                              RnsPoly& out_b, RnsPoly& out_a,
                              std::vector<u64>& sp_b,
                              std::vector<u64>& sp_a) const {
  const std::size_t n = ctx_->n();
  const std::size_t ell = hd.ell;
  const Modulus& sp = ctx_->sp();
  if (ksk.digits.size() < ell) {
    throw ParameterError("key-switching key has too few digits");
  }

  out_b = RnsPoly(ctx_->basis_q(), ell, Domain::ntt);
  out_a = RnsPoly(ctx_->basis_q(), ell, Domain::ntt);

  // Lazy 128-bit accumulation: with <= 8 digits of 55-bit words the sums
  // stay far below 2^128, so one Barrett reduction per output word suffices.
  std::vector<const u64*> dq(ell), kb(ell), ka(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    for (std::size_t j = 0; j < ell; ++j) {
      dq[j] = hd.d_q[j].limb(i).data();
      kb[j] = ksk.digits[j].b_q.limb(i).data();
      ka[j] = ksk.digits[j].a_q.limb(i).data();
    }
    auto bi = out_b.limb(i);
    auto ai = out_a.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      u128 accb = 0, acca = 0;
      for (std::size_t j = 0; j < ell; ++j) {
        const u64 d = dq[j][c];
        accb += u128(d) * kb[j][c];
        acca += u128(d) * ka[j][c];
      }
      bi[c] = ring::reduce128(accb, qi);
      ai[c] = ring::reduce128(acca, qi);
    }
  }

  // Special-prime accumulators.
  sp_b.assign(n, 0);
  sp_a.assign(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    u128 accb = 0, acca = 0;
    for (std::size_t j = 0; j < ell; ++j) {
      const u64 d = hd.d_sp[j][c];
      accb += u128(d) * ksk.digits[j].b_sp[c];
      acca += u128(d) * ksk.digits[j].a_sp[c];
    }
    sp_b[c] = ring::reduce128(accb, sp);
    sp_a[c] = ring::reduce128(acca, sp);
  }
}

void Evaluator::special_mod_down(RnsPoly& out, std::vector<u64>& s_acc) const {
  const std::size_t n = ctx_->n();
  const std::size_t ell = out.limbs();
  const Modulus& sp = ctx_->sp();
  const u64 half_sp = sp.q >> 1;
  std::vector<u64> emb(n);
  // out <- (out - eps) / sp where eps is the centered remainder of the
  // accumulator modulo sp.
  ctx_->sp_ntt().inverse(s_acc.data());
  for (std::size_t i = 0; i < ell; ++i) {
    const Modulus& qi = ctx_->basis_q().mod(i);
    const u64 inv = ctx_->sp_inv_mod_q()[i];
    const u64 inv_shoup = ctx_->sp_inv_mod_q_shoup()[i];
    for (std::size_t c = 0; c < n; ++c) {
      const u64 v = s_acc[c];
      emb[c] = v <= half_sp ? ring::reduce64(v, qi)
                            : ring::neg_mod(ring::reduce64(sp.q - v, qi), qi);
    }
    ctx_->basis_q().ntt(i).forward(emb.data());
    auto dst = out.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = ring::mul_mod_shoup(ring::sub_mod(dst[c], emb[c], qi), inv,
                                   inv_shoup, qi);
    }
  }
}

void Evaluator::keyswitch_apply(const HoistedDigits& hd, const KswitchKey& ksk,
                                RnsPoly& out_b, RnsPoly& out_a) const {
  std::vector<u64> sb, sa;
  keyswitch_raw(hd, ksk, out_b, out_a, sb, sa);
  special_mod_down(out_b, sb);
  special_mod_down(out_a, sa);
}

Ciphertext Evaluator::apply_galois_internal(const Ciphertext& ct, u64 elt,
                                            const HoistedDigits* hoisted,
                                            const GaloisKeys& gk) {
  require_two_components(ct, "rotation");
  const std::size_t n = ctx_->n();
  const std::size_t ell = ct.limbs();
  const KswitchKey& ksk = gk.at(elt);
  const std::vector<u32>& perm = perm_for(elt);

  RnsPoly b_out, a_out;
  if (hoisted == nullptr) {
    // Permute c1 first, then decompose.
    RnsPoly c1p(ctx_->basis_q(), ell, Domain::ntt);
    for (std::size_t i = 0; i < ell; ++i) {
      auto src = ct.comp(1).limb(i);
      auto dst = c1p.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = src[perm[c]];
      }
    }
    const HoistedDigits hd = decompose(c1p);
    keyswitch_apply(hd, ksk, b_out, a_out);
  } else {
    if (hoisted->ell != ell) {
      throw ParameterError("hoisted digits were built at a different level");
    }
    const HoistedDigits hp = permute_digits(*hoisted, perm);
    keyswitch_apply(hp, ksk, b_out, a_out);
  }

  // c0' = sigma(c0) + b, c1' = a.
  RnsPoly c0p(ctx_->basis_q(), ell, Domain::ntt);
  for (std::size_t i = 0; i < ell; ++i) {
    auto src = ct.comp(0).limb(i);
    auto dst = c0p.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      dst[c] = src[perm[c]];
    }
  }
  c0p.add_inplace(b_out);

  std::vector<RnsPoly> comps;
  comps.push_back(std::move(c0p));
  comps.push_back(std::move(a_out));
  counters_.rotations += 1;
  return Ciphertext(std::move(comps), ct.depth_budget());
}

Ciphertext Evaluator::apply_galois(const Ciphertext& ct, u64 elt,
                                   const GaloisKeys& gk) {
  if (elt == 1) {
    return ct;
  }
  return apply_galois_internal(ct, elt, nullptr, gk);
}

Ciphertext Evaluator::rotate_rows(const Ciphertext& ct, long step,
                                  const GaloisKeys& gk) {
  const u64 elt = galois_elt_from_step(*ctx_, step);
  if (elt == 1) {
    return ct;
  }
  return apply_galois_internal(ct, elt, nullptr, gk);
}

Ciphertext Evaluator::rotate_columns(const Ciphertext& ct,
                                     const GaloisKeys& gk) {
  return apply_galois_internal(ct, galois_elt_row_swap(*ctx_), nullptr, gk);
}

HoistedDigits Evaluator::hoist(const Ciphertext& ct) {
  require_two_components(ct, "hoist");
  return decompose(ct.comp(1));
}

Ciphertext Evaluator::rotate_hoisted(const Ciphertext& ct,
                                     const HoistedDigits& hd, long step,
                                     const GaloisKeys& gk) {
  const u64 elt = galois_elt_from_step(*ctx_, step);
  if (elt == 1) {
    return ct;
  }
  return apply_galois_internal(ct, elt, &hd, gk);
}

LinearMap make_linear_map(const BatchEncoder& encoder,
                          std::span<const std::vector<u64>> diagonals,
                          std::size_t n1) {
  const std::size_t P = diagonals.size();
  if (P == 0 || (P & (P - 1)) != 0 || P > encoder.row_size()) {
    throw ParameterError(
        "linear map: need a power-of-two diagonal count dividing the row "
        "size");
  }
  for (const auto& d : diagonals) {
    if (d.size() != P) {
      throw ParameterError("linear map: diagonal length != period");
    }
  }
  if (n1 == 0) {
    std::size_t lg = 0;
    while ((std::size_t(1) << lg) < P) ++lg;
    n1 = std::size_t(1) << ((lg + 2) / 2);
    if (n1 > P) n1 = P;
  }
  if (P % n1 != 0) {
    throw ParameterError("linear map: baby-step count must divide the period");
  }

  const std::span<const u32> positions = encoder.periodic_positions(P);
  if (positions.empty()) {
    throw ParameterError("linear map: period not covered by periodic tables");
  }

  LinearMap map;
  map.period = P;
  map.n1 = n1;
  map.n2 = P / n1;
  map.pos.assign(positions.begin(), positions.end());
  map.diags.resize(P);
  std::vector<u64> rotated(P);
  for (std::size_t g = 0; g < map.n2; ++g) {
    for (std::size_t b = 0; b < n1; ++b) {
      const std::size_t d = g * n1 + b;
      const std::vector<u64>& src = diagonals[d];
      LinearDiag& out = map.diags[d];
      out.zero = std::all_of(src.begin(), src.end(),
                             [](u64 v) { return v == 0; });
      if (out.zero) continue;
      // Store the diagonal pre-rotated by its giant step so that rotating
      // the finished baby-step sum realigns every mask with the input.
      const std::size_t s = g * n1;
      for (std::size_t i = 0; i < P; ++i) {
        rotated[i] = src[(i + P - s) & (P - 1)];
      }
      out.qsp = encoder.prepare_periodic_small(rotated);
    }
  }
  return map;
}

Ciphertext Evaluator::apply_linear_map(const Ciphertext& ct,
                                       const LinearMap& map,
                                       const GaloisKeys& gk) {
  require_two_components(ct, "linear map");
  const std::size_t n = ctx_->n();
  const std::size_t ell = ct.limbs();
  const std::size_t n1 = map.n1;
  const std::size_t n2 = map.n2;
  if (map.period == 0 || n1 * n2 != map.period ||
      map.diags.size() != map.period) {
    throw ParameterError("linear map is malformed");
  }

  const std::size_t k = ctx_->q_limbs();
  const std::size_t two_p = 2 * map.period;
  std::vector<bool> baby_used(n1, false);
  std::size_t nonzero = 0;
  for (std::size_t g = 0; g < n2; ++g) {
    for (std::size_t b = 0; b < n1; ++b) {
      const LinearDiag& diag = map.diags[g * n1 + b];
      if (diag.zero) continue;
      if (diag.qsp.size() != (k + 1) * two_p || map.pos.size() != n) {
        throw ParameterError("linear map was prepared for a different ring");
      }
      baby_used[b] = true;
      ++nonzero;
    }
  }
  counters_.ct_pt_muls += nonzero;

  // Baby rotations, hoisted and left in the extended basis: the special-prime
  // mod-down is deferred until after each giant's mask products have been
  // accumulated, so it is paid once per giant instead of once per baby.
  struct BabyExt {
    RnsPoly c0p;
    RnsPoly b_q, a_q;
    std::vector<u64> b_sp, a_sp;
  };
  std::vector<BabyExt> babies(n1);
  HoistedDigits hd;
  bool have_digits = false;
  for (std::size_t b = 0; b < n1; ++b) {
    if (!baby_used[b]) continue;
    if (b == 0) {
      babies[0].c0p = ct.comp(0);
      continue;
    }
    if (!have_digits) {
      hd = decompose(ct.comp(1));
      have_digits = true;
    }
    const u64 elt = galois_elt_from_step(*ctx_, long(b));
    const KswitchKey& ksk = gk.at(elt);
    const std::vector<u32>& perm = perm_for(elt);
    const HoistedDigits hb = permute_digits(hd, perm);
    BabyExt& be = babies[b];
    keyswitch_raw(hb, ksk, be.b_q, be.a_q, be.b_sp, be.a_sp);
    be.c0p = RnsPoly(ctx_->basis_q(), ell, Domain::ntt);
    for (std::size_t i = 0; i < ell; ++i) {
      auto src = ct.comp(0).limb(i);
      auto dst = be.c0p.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = src[perm[c]];
      }
    }
    counters_.rotations += 1;
  }

  Ciphertext acc;
  bool acc_ready = false;
  std::vector<std::size_t> used;
  std::vector<const u64*> mq, sv, bv, av;
  for (std::size_t g = 0; g < n2; ++g) {
    used.clear();
    bool has_b0 = false, has_ext = false;
    for (std::size_t b = 0; b < n1; ++b) {
      if (map.diags[g * n1 + b].zero) continue;
      used.push_back(b);
      (b == 0 ? has_b0 : has_ext) = true;
    }
    if (used.empty()) continue;

    // Lazy mask accumulation: mask and source words are both < 2^55 and at
    // most n1 <= 32 terms are summed, so a u128 accumulator cannot overflow
    // and one Barrett reduction per word suffices.
    RnsPoly s_c0(ctx_->basis_q(), ell, Domain::ntt);
    RnsPoly s_b, s_a;
    std::vector<u64> s_spb, s_spa;
    if (has_ext) {
      s_b = RnsPoly(ctx_->basis_q(), ell, Domain::ntt);
      s_a = RnsPoly(ctx_->basis_q(), ell, Domain::ntt);
    }
    const u32* pos = map.pos.data();
    for (std::size_t i = 0; i < ell; ++i) {
      const Modulus& qi = ctx_->basis_q().mod(i);
      mq.clear(); sv.clear();
      for (std::size_t b : used) {
        mq.push_back(map.diags[g * n1 + b].qsp.data() + i * two_p);
        sv.push_back(babies[b].c0p.limb(i).data());
      }
      auto d0 = s_c0.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        const u32 e = pos[c];
        u128 a0 = 0;
        for (std::size_t j = 0; j < used.size(); ++j) {
          a0 += u128(mq[j][e]) * sv[j][c];
        }
        d0[c] = ring::reduce128(a0, qi);
      }
      if (!has_ext) continue;
      mq.clear(); bv.clear(); av.clear();
      for (std::size_t b : used) {
        if (b == 0) continue;
        mq.push_back(map.diags[g * n1 + b].qsp.data() + i * two_p);
        bv.push_back(babies[b].b_q.limb(i).data());
        av.push_back(babies[b].a_q.limb(i).data());
      }
      auto db = s_b.limb(i);
      auto da = s_a.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        const u32 e = pos[c];
        u128 ab = 0, aa = 0;
        for (std::size_t j = 0; j < mq.size(); ++j) {
          ab += u128(mq[j][e]) * bv[j][c];
          aa += u128(mq[j][e]) * av[j][c];
        }
        db[c] = ring::reduce128(ab, qi);
        da[c] = ring::reduce128(aa, qi);
      }
    }
    if (has_ext) {
      const Modulus& sp = ctx_->sp();
      mq.clear(); bv.clear(); av.clear();
      for (std::size_t b : used) {
        if (b == 0) continue;
        mq.push_back(map.diags[g * n1 + b].qsp.data() + k * two_p);
        bv.push_back(babies[b].b_sp.data());
        av.push_back(babies[b].a_sp.data());
      }
      s_spb.assign(n, 0);
      s_spa.assign(n, 0);
      for (std::size_t c = 0; c < n; ++c) {
        const u32 e = pos[c];
        u128 ab = 0, aa = 0;
        for (std::size_t j = 0; j < mq.size(); ++j) {
          ab += u128(mq[j][e]) * bv[j][c];
          aa += u128(mq[j][e]) * av[j][c];
        }
        s_spb[c] = ring::reduce128(ab, sp);
        s_spa[c] = ring::reduce128(aa, sp);
      }
      special_mod_down(s_b, s_spb);
      special_mod_down(s_a, s_spa);
      s_c0.add_inplace(s_b);
    }

    RnsPoly c1g;
    if (has_ext) {
      c1g = std::move(s_a);
    } else {
      c1g = RnsPoly(ctx_->basis_q(), ell, Domain::ntt);
    }
    if (has_b0) {
      // The unrotated term's c1 never went through key switching; its mask
      // product joins after the mod-down.
      const LinearDiag& d0g = map.diags[g * n1];
      for (std::size_t i = 0; i < ell; ++i) {
        const Modulus& qi = ctx_->basis_q().mod(i);
        const u64* mm = d0g.qsp.data() + i * two_p;
        auto src = ct.comp(1).limb(i);
        auto dst = c1g.limb(i);
        for (std::size_t c = 0; c < n; ++c) {
          dst[c] = ring::add_mod(
              dst[c], ring::mul_mod(mm[pos[c]], src[c], qi), qi);
        }
      }
    }

    std::vector<RnsPoly> comps;
    comps.push_back(std::move(s_c0));
    comps.push_back(std::move(c1g));
    Ciphertext part(std::move(comps), ct.depth_budget());
    if (g != 0) {
      const u64 elt = galois_elt_from_step(*ctx_, long(g * n1));
      part = apply_galois_internal(part, elt, nullptr, gk);
    }
    if (!acc_ready) {
      acc = std::move(part);
      acc_ready = true;
    } else {
      acc.comp(0).add_inplace(part.comp(0));
      acc.comp(1).add_inplace(part.comp(1));
    }
  }

  if (!acc_ready) {
    // Every diagonal was zero: the map annihilates everything.
    std::vector<RnsPoly> comps(2, RnsPoly(ctx_->basis_q(), ell, Domain::ntt));
    return Ciphertext(std::move(comps), ct.depth_budget());
  }
  return acc;
}

void Evaluator::mod_switch_to_next_inplace(Ciphertext& ct) {
  const std::size_t n = ctx_->n();
  const std::size_t ell = ct.limbs();
  if (ell <= 1) {
    throw ParameterError("cannot switch below one limb");
  }
  const Modulus& q_last = ctx_->basis_q().mod(ell - 1);
  const u64 half_last = q_last.q >> 1;

  std::vector<u64> last(n), emb(n);
  for (std::size_t comp = 0; comp < ct.size(); ++comp) {
    RnsPoly& p = ct.comp(comp);
    auto lsrc = p.limb(ell - 1);
    std::copy(lsrc.begin(), lsrc.end(), last.begin());
    ctx_->basis_q().ntt(ell - 1).inverse(last.data());
    for (std::size_t i = 0; i + 1 < ell; ++i) {
      const Modulus& qi = ctx_->basis_q().mod(i);
      const u64 inv = ctx_->qlast_inv_mod_q()[ell][i];
      for (std::size_t c = 0; c < n; ++c) {
        const u64 v = last[c];
        emb[c] = v <= half_last
                     ? ring::reduce64(v, qi)
                     : ring::neg_mod(ring::reduce64(q_last.q - v, qi), qi);
      }
      ctx_->basis_q().ntt(i).forward(emb.data());
      auto dst = p.limb(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = ring::mul_mod(ring::sub_mod(dst[c], emb[c], qi), inv, qi);
      }
    }
    p.drop_last_limb();
  }
  counters_.mod_switches += 1;
}

void Evaluator::spend_depth(Ciphertext& ct, int units) const {
  if (ct.depth_budget() < units) {
    throw DepthError("multiplicative depth budget exhausted");
  }
  ct.set_depth_budget(ct.depth_budget() - units);
}

} // namespace hhekit::bfv
