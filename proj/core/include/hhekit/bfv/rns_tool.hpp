// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hhekit/bfv/params.hpp"

namespace hhekit::bfv {

/// Copy of the first `ell` limbs of a polynomial (same domain).
ring::RnsPoly prefix_copy(const ring::RnsPoly& in, std::size_t ell);

/// Fast base conversion of a coefficient-domain polynomial over the q-prefix
/// Q_ell into the auxiliary base. The long-double correction term picks the
/// (near-)centered representative X ≡ x (mod Q_ell), |X| <= Q_ell/2 (1+eps);
/// the conversion is exact modulo Q_ell for any representative, so a rare
/// half-point rounding slip only fattens the magnitude bound, never changes
/// the congruence. Output: aux_limbs() coefficient-domain limbs.
ring::RnsPoly extend_to_aux(const BfvContext& ctx, const ring::RnsPoly& in);

/// Tensor rescaling round(t*X/Q_ell) mod Q_ell where X is held in the tensor
/// basis (q-prefix + full aux base), both parts in coefficient domain. The
/// result is off from the ideal rounding by at most 1 per coefficient (the
/// remainder-representative slip), which the noise budget absorbs.
ring::RnsPoly scale_round_tensor(const BfvContext& ctx,
                                 const ring::RnsPoly& q_part,
                                 const ring::RnsPoly& aux_part);

struct DecryptScale {
  std::vector<u64> message;  ///< round(t*phase/Q) mod t per coefficient
  int noise_budget = 0;      ///< floor(log2(Q / (2 max|r|))), clamped at 0
};

/// Exact decrypt-side scaling: CRT-composes the phase over the q-prefix with
/// 512-bit integers (no floating point), rounds, and reports the
/// invariant-noise budget from the max centered remainder.
DecryptScale decrypt_scale_exact(const BfvContext& ctx,
                                 const ring::RnsPoly& phase_coeff);

} // namespace hhekit::bfv
