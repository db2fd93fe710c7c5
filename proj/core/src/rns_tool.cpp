// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/bfv/rns_tool.hpp"

#include <algorithm>
#include <cmath>

namespace hhekit::bfv {

namespace {

using ring::Domain;
using ring::Modulus;
using ring::RnsPoly;

void require_coeff(const RnsPoly& p, const char* what) {
  if (p.domain() != Domain::coeff) {
    throw Error(std::string(what) + ": operand must be in coefficient domain");
  }
}

// y_i = (scale * x_i) * (Q_ell / q_i)^-1 mod q_i for all prefix limbs, plus
// the rounded float correction v = round(sum_i y_i / q_i) that selects the
// (near-)centered representative.
void decompose_with_correction(const BfvContext& ctx, const RnsPoly& in,
                               u64 scale, std::vector<u64>& y,
                               std::vector<u64>& v) {
  const std::size_t ell = in.limbs();
  const std::size_t n = ctx.n();
  y.resize(ell * n);
  for (std::size_t i = 0; i < ell; ++i) {
    const Modulus& qi = ctx.basis_q().mod(i);
    const u64 w = ctx.qhat_inv()[ell][i];
    const u64 ws = ctx.qhat_inv_shoup()[ell][i];
    auto src = in.limb(i);
    u64* dst = y.data() + i * n;
    if (scale == 1) {
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = ring::mul_mod_shoup(src[c], w, ws, qi);
      }
    } else {
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] =
            ring::mul_mod_shoup(ring::mul_mod(scale, src[c], qi), w, ws, qi);
      }
    }
  }
  std::vector<long double> fsum(n, 0.0L);
  for (std::size_t i = 0; i < ell; ++i) {
    const long double inv = ctx.inv_q()[i];
    const u64* yi = y.data() + i * n;
    for (std::size_t c = 0; c < n; ++c) {
      fsum[c] += static_cast<long double>(yi[c]) * inv;
    }
  }
  v.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    v[c] = static_cast<u64>(llroundl(fsum[c]));
  }
}

} // namespace

RnsPoly prefix_copy(const RnsPoly& in, std::size_t ell) {
  if (ell > in.limbs()) {
    throw Error("prefix_copy: requested more limbs than available");
  }
  RnsPoly out(in.basis(), ell, in.domain());
  std::copy_n(in.data().data(), ell * in.n(), out.data().data());
  return out;
}

RnsPoly extend_to_aux(const BfvContext& ctx, const RnsPoly& in) {
  require_coeff(in, "extend_to_aux");
  const std::size_t ell = in.limbs();
  const std::size_t n = ctx.n();
  const std::size_t ka = ctx.aux_limbs();

  std::vector<u64> y;
  std::vector<u64> v;
  decompose_with_correction(ctx, in, 1, y, v);

  RnsPoly out(ctx.basis_aux(), ka, Domain::coeff);
  std::vector<u64> w(ell);
  for (std::size_t j = 0; j < ka; ++j) {
    const Modulus& pj = ctx.basis_aux().mod(j);
    const u64 qprod = ctx.qprod_mod_aux()[ell][j];
    for (std::size_t i = 0; i < ell; ++i) {
      w[i] = ctx.qhat_mod_aux()[ell][i][j];
    }
    auto dst = out.limb(j);
    for (std::size_t c = 0; c < n; ++c) {
      u64 acc = 0;
      for (std::size_t i = 0; i < ell; ++i) {
        acc = ring::add_mod(acc, ring::mul_mod(y[i * n + c], w[i], pj), pj);
      }
      dst[c] = ring::sub_mod(acc, ring::mul_mod(v[c], qprod, pj), pj);
    }
  }
  return out;
}

RnsPoly scale_round_tensor(const BfvContext& ctx, const RnsPoly& q_part,
                           const RnsPoly& aux_part) {
  require_coeff(q_part, "scale_round_tensor");
  require_coeff(aux_part, "scale_round_tensor");
  const std::size_t ell = q_part.limbs();
  const std::size_t n = ctx.n();
  const std::size_t ka = ctx.aux_limbs();
  if (aux_part.limbs() != ka) {
    throw Error("scale_round_tensor: aux part has wrong limb count");
  }
  const u64 t = ctx.plain_t();

  // r ≡ t*X (mod Q_ell) converted into the aux base, then
  // R_j = (t*x_aux_j - r_j) / Q_ell mod p_j and z_j = R_j * (P/p_j)^-1.
  std::vector<u64> y;
  std::vector<u64> v;
  decompose_with_correction(ctx, q_part, t, y, v);

  std::vector<u64> z(ka * n);
  std::vector<u64> w(ell);
  for (std::size_t j = 0; j < ka; ++j) {
    const Modulus& pj = ctx.basis_aux().mod(j);
    const u64 qprod = ctx.qprod_mod_aux()[ell][j];
    const u64 qinv = ctx.qprod_inv_mod_aux()[ell][j];
    const u64 ahat = ctx.auxhat_inv()[j];
    const u64 ahat_s = ctx.auxhat_inv_shoup()[j];
    for (std::size_t i = 0; i < ell; ++i) {
      w[i] = ctx.qhat_mod_aux()[ell][i][j];
    }
    auto src = aux_part.limb(j);
    u64* dst = z.data() + j * n;
    for (std::size_t c = 0; c < n; ++c) {
      u64 acc = 0;
      for (std::size_t i = 0; i < ell; ++i) {
        acc = ring::add_mod(acc, ring::mul_mod(y[i * n + c], w[i], pj), pj);
      }
      const u64 rj = ring::sub_mod(acc, ring::mul_mod(v[c], qprod, pj), pj);
      const u64 num = ring::sub_mod(ring::mul_mod(t, src[c], pj), rj, pj);
      dst[c] =
          ring::mul_mod_shoup(ring::mul_mod(num, qinv, pj), ahat, ahat_s, pj);
    }
  }

  // Convert R back to the q-prefix. |R| <= t*N*Q_ell/2 (1+eps) << P/2, so the
  // rounded correction recovers R exactly.
  std::vector<long double> gsum(n, 0.0L);
  for (std::size_t j = 0; j < ka; ++j) {
    const long double inv = ctx.inv_aux()[j];
    const u64* zj = z.data() + j * n;
    for (std::size_t c = 0; c < n; ++c) {
      gsum[c] += static_cast<long double>(zj[c]) * inv;
    }
  }
  std::vector<u64> beta(n);
  for (std::size_t c = 0; c < n; ++c) {
    beta[c] = static_cast<u64>(llroundl(gsum[c]));
  }

  RnsPoly out(ctx.basis_q(), ell, Domain::coeff);
  std::vector<u64> wq(ka);
  for (std::size_t i = 0; i < ell; ++i) {
    const Modulus& qi = ctx.basis_q().mod(i);
    const u64 aprod = ctx.auxprod_mod_q()[i];
    for (std::size_t j = 0; j < ka; ++j) {
      wq[j] = ctx.auxhat_mod_q()[j][i];
    }
    auto dst = out.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      u64 acc = 0;
      for (std::size_t j = 0; j < ka; ++j) {
        acc = ring::add_mod(acc, ring::mul_mod(z[j * n + c], wq[j], qi), qi);
      }
      dst[c] = ring::sub_mod(acc, ring::mul_mod(beta[c], aprod, qi), qi);
    }
  }
  return out;
}

DecryptScale decrypt_scale_exact(const BfvContext& ctx,
                                 const RnsPoly& phase_coeff) {
  require_coeff(phase_coeff, "decrypt_scale_exact");
  const std::size_t ell = phase_coeff.limbs();
  const std::size_t n = ctx.n();
  const int512 q = ctx.q_prod()[ell];
  const int512 half_q = q >> 1;
  const int512 t = ctx.plain_t();

  DecryptScale res;
  res.message.resize(n);
  int512 max_r = 0;
  const int512 den = 2 * q;
  for (std::size_t c = 0; c < n; ++c) {
    int512 x = 0;
    for (std::size_t i = 0; i < ell; ++i) {
      x += int512(phase_coeff.limb(i)[c]) * ctx.crt_compose()[ell][i];
    }
    x %= q;
    if (x > half_q) {
      x -= q;
    }
    const int512 wv = t * x;
    // floor((2w + q) / (2q)) = nearest integer with ties rounded up.
    const int512 num = 2 * wv + q;
    int512 m = num / den;  // truncates toward zero
    if (num < 0 && num % den != 0) {
      m -= 1;
    }
    int512 r = wv - q * m;
    if (r < 0) {
      r = -r;
    }
    if (r > max_r) {
      max_r = r;
    }
    int512 mt = m % t;
    if (mt < 0) {
      mt += t;
    }
    res.message[c] = static_cast<u64>(mt);
  }

  const int512 b = 2 * max_r;
  if (b == 0) {
    res.noise_budget = static_cast<int>(boost::multiprecision::msb(q));
  } else if (b >= q) {
    res.noise_budget = 0;
  } else {
    const int k = static_cast<int>(boost::multiprecision::msb(q)) -
                  static_cast<int>(boost::multiprecision::msb(b));
    res.noise_budget = ((b << k) <= q) ? k : k - 1;
  }
  return res;
}

} // namespace hhekit::bfv
