// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>

#include "hhekit/bfv/ciphertext.hpp"
#include "hhekit/bfv/keys.hpp"
#include "hhekit/bfv/plaintext.hpp"

namespace hhekit::bfv {

/// Digit decomposition of one ciphertext component, NTT-transformed over the
/// q-prefix and the special prime. Computing this once and reusing it across
/// several rotations ("hoisting") amortizes the expensive part of key
/// switching: applying a different Galois element only permutes the digits.
struct HoistedDigits {
  std::size_t ell = 0;
  std::vector<ring::RnsPoly> d_q;      ///< digit j: ell q limbs, NTT
  std::vector<std::vector<u64>> d_sp;  ///< digit j: special-prime limb, NTT
};

/// One generalized diagonal of a slot-space linear map, pre-rotated for the
/// baby-step/giant-step schedule and prepared in the compressed periodic
/// domain: k+1 blocks of 2P small-transform words (q limbs first, special
/// prime last; the latter lets the map be multiplied into extended-basis
/// key-switching products before mod-down). Consumers expand positions
/// through LinearMap::pos while accumulating.
struct LinearDiag {
  std::vector<u64> qsp;
  bool zero = false; ///< all-zero diagonal: skipped entirely
};

/// A P-periodic slot-space linear map y[i] = sum_d diag_d[i] * x[i + d mod P]
/// factored into n1 baby and n2 giant steps (n1 * n2 == P). The stored entry
/// at index g*n1 + b is diagonal g*n1+b rotated left by g*n1 slots, so giant
/// rotations can be applied after the baby-step sums.
struct LinearMap {
  std::size_t period = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<u32> pos; ///< NTT position -> small-transform slot
  std::vector<LinearDiag> diags;
};

/// Builds a LinearMap from plain diagonal patterns over F_t: diagonals[d]
/// has length `period` (a power of two dividing the row size) and multiplies
/// the input rotated left by d. n1 == 0 chooses a balanced baby-step count.
LinearMap make_linear_map(const BatchEncoder& encoder,
                          std::span<const std::vector<u64>> diagonals,
                          std::size_t n1 = 0);

/// All homomorphic operations. Binary operations require operands at the
/// same level; depth-consuming operations decrement the result's budget and
/// throw DepthError instead of running it negative. Every operation that the
/// workload cost model tracks increments the corresponding counter.
class Evaluator {
public:
  explicit Evaluator(std::shared_ptr<const BfvContext> ctx);

  const OpCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = OpCounters{}; }

  void add_inplace(Ciphertext& a, const Ciphertext& b);
  void sub_inplace(Ciphertext& a, const Ciphertext& b);
  Ciphertext add(const Ciphertext& a, const Ciphertext& b);
  void negate_inplace(Ciphertext& a);

  void add_plain_inplace(Ciphertext& a, const Plaintext& pt);
  void sub_plain_inplace(Ciphertext& a, const Plaintext& pt);
  /// Pointwise product with a prepared plaintext (no delta scaling).
  void mul_plain_inplace(Ciphertext& a, const EncodedPlaintext& ep);

  /// Tensor + rescale; result has three components (relinearize to get back
  /// to two). Consumes one depth unit.
  Ciphertext multiply(const Ciphertext& a, const Ciphertext& b);
  Ciphertext square(const Ciphertext& a);
  void relinearize_inplace(Ciphertext& ct, const RelinKey& rk);
  Ciphertext mul_relin(const Ciphertext& a, const Ciphertext& b,
                       const RelinKey& rk);
  Ciphertext square_relin(const Ciphertext& a, const RelinKey& rk);

  /// Cyclic left rotation of both rows by `step` (negative: right). step 0
  /// returns a copy and touches no counter.
  Ciphertext rotate_rows(const Ciphertext& ct, long step,
                         const GaloisKeys& gk);
  /// Swaps the two rows.
  Ciphertext rotate_columns(const Ciphertext& ct, const GaloisKeys& gk);
  Ciphertext apply_galois(const Ciphertext& ct, u64 elt, const GaloisKeys& gk);

  /// Digit-decomposes ct's second component for reuse across rotations.
  HoistedDigits hoist(const Ciphertext& ct);
  Ciphertext rotate_hoisted(const Ciphertext& ct, const HoistedDigits& hd,
                            long step, const GaloisKeys& gk);

  /// Applies a periodic slot-space linear map in one fused pass: baby
  /// rotations are hoisted and kept in the extended basis, masks are
  /// multiplied in lazily, and each giant-step sum pays a single mod-down
  /// per component. Counts one rotation per distinct baby/giant step used
  /// and one ct-pt product per nonzero diagonal; depth is not auto-charged
  /// (callers account plaintext-product layers in aggregate).
  Ciphertext apply_linear_map(const Ciphertext& ct, const LinearMap& map,
                              const GaloisKeys& gk);

  /// Drops the last q limb (divides the ciphertext by it, rounding).
  void mod_switch_to_next_inplace(Ciphertext& ct);

  /// Charges `units` of depth budget without performing an operation (used
  /// by workloads whose plaintext-product layers are accounted as one
  /// aggregate depth unit).
  void spend_depth(Ciphertext& ct, int units) const;

private:
  void check_same_shape(const Ciphertext& a, const Ciphertext& b) const;
  HoistedDigits decompose(const ring::RnsPoly& input_ntt) const;
  /// Digit permutation under a Galois element: the hoisted-rotation
  /// commutation trick applied to an existing decomposition.
  HoistedDigits permute_digits(const HoistedDigits& hd,
                               const std::vector<u32>& perm) const;
  /// acc_b/acc_a <- sum_j digit_j * ksk_j over the extended basis (q prefix
  /// plus special prime), everything reduced and in NTT domain.
  void keyswitch_raw(const HoistedDigits& hd, const KswitchKey& ksk,
                     ring::RnsPoly& out_b, ring::RnsPoly& out_a,
                     std::vector<u64>& sp_b, std::vector<u64>& sp_a) const;
  /// out <- (out - eps) / sp where eps is the centered lift of the
  /// special-prime accumulator (consumed).
  void special_mod_down(ring::RnsPoly& out, std::vector<u64>& s_acc) const;
  /// keyswitch_raw followed by the special-prime mod-down on both parts.
  void keyswitch_apply(const HoistedDigits& hd, const KswitchKey& ksk,
                       ring::RnsPoly& out_b, ring::RnsPoly& out_a) const;
  Ciphertext apply_galois_internal(const Ciphertext& ct, u64 elt,
                                   const HoistedDigits* hoisted,
                                   const GaloisKeys& gk);
  const std::vector<u32>& perm_for(u64 elt);

  std::shared_ptr<const BfvContext> ctx_;
  OpCounters counters_;
  std::map<u64, std::vector<u32>> perm_cache_;
};

} // namespace hhekit::bfv
