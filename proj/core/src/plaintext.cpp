// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/bfv/plaintext.hpp"

#include "hhekit/ring/ntt.hpp"

namespace hhekit::bfv {

namespace {

// Centered lift of a value in [0, t) into Z_qi: values above t/2 represent
// negatives. Keeps ct-pt product noise proportional to t/2 instead of t.
inline u64 lift_centered(u64 v, u64 t, const ring::Modulus& qi) {
  return v > t / 2 ? qi.q - (t - v) : v;
}

} // namespace

BatchEncoder::BatchEncoder(std::shared_ptr<const BfvContext> ctx)
    : ctx_(std::move(ctx)) {
  const std::size_t n = ctx_->n();
  const u64 m = 2 * u64(n);
  const unsigned log_n = ctx_->t_ntt().log_n();
  const std::size_t row = n / 2;

  index_map_.resize(n);
  u64 pos = 1;
  for (std::size_t i = 0; i < row; ++i) {
    const u64 idx1 = (pos - 1) >> 1;
    const u64 idx2 = (m - pos - 1) >> 1;
    index_map_[i] = u32(ring::bit_reverse(idx1, log_n));
    index_map_[row + i] = u32(ring::bit_reverse(idx2, log_n));
    pos = (pos * 3) & (m - 1);
  }

  // Small-transform tables for the periodic-plaintext path, one set per
  // power-of-two period up to the sizes workloads actually mask with.
  const std::size_t k = ctx_->q_limbs();
  for (std::size_t T = 2; T <= row / 2 && T <= 512; T *= 2) {
    PeriodicTables& tabs = periodic_[T];
    const std::size_t stride = n / (2 * T);
    const std::size_t two_t = 2 * T;
    const u64 four_t = 4 * u64(T);
    unsigned lg = 0;
    while ((std::size_t(1) << lg) < two_t) ++lg;

    const ring::Modulus& mt = ctx_->t_ntt().modulus();
    tabs.ntt_t = ring::NttTables(
        mt, two_t, ring::pow_mod(ctx_->t_ntt().psi(), u64(stride), mt));
    tabs.ntt.reserve(k + 1);
    for (std::size_t l = 0; l < k; ++l) {
      const ring::Modulus& qi = ctx_->basis_q().mod(l);
      tabs.ntt.emplace_back(
          qi, two_t,
          ring::pow_mod(ctx_->basis_q().ntt(l).psi(), u64(stride), qi));
    }
    tabs.ntt.emplace_back(
        ctx_->sp(), two_t,
        ring::pow_mod(ctx_->sp_ntt().psi(), u64(stride), ctx_->sp()));

    // Slot i of row 0 evaluates at odd power 3^i of the period root, row 1
    // at -3^i; together the +/- cosets cover every odd residue mod 4T once,
    // so i only needs to run over one period.
    tabs.eval_src.resize(two_t);
    u64 e = 1;
    for (std::size_t i = 0; i < T; ++i) {
      const u64 e_neg = four_t - e;
      tabs.eval_src[ring::bit_reverse((e - 1) >> 1, lg)] = u32(i);
      tabs.eval_src[ring::bit_reverse((e_neg - 1) >> 1, lg)] = u32(i);
      e = (e * 3) & (four_t - 1);
    }
    tabs.pos_to_eval.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const u64 o = (2 * ring::bit_reverse(u64(j), log_n) + 1) & (four_t - 1);
      tabs.pos_to_eval[j] = u32(ring::bit_reverse((o - 1) >> 1, lg));
    }
  }
}

Plaintext BatchEncoder::encode(std::span<const u64> values) const {
  const std::size_t n = ctx_->n();
  const u64 t = ctx_->plain_t();
  if (values.size() > n) {
    throw ParameterError("batch encode: more values than slots");
  }
  for (u64 v : values) {
    if (v >= t) throw ParameterError("batch encode: value not reduced mod t");
  }
  Plaintext pt(n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    pt[index_map_[i]] = values[i];
  }
  ctx_->t_ntt().inverse(pt.coeffs().data());
  return pt;
}

std::vector<u64> BatchEncoder::decode(const Plaintext& pt) const {
  const std::size_t n = ctx_->n();
  if (pt.n() != n) throw ParameterError("batch decode: wrong plaintext size");
  std::vector<u64> evals(pt.coeffs().begin(), pt.coeffs().end());
  ctx_->t_ntt().forward(evals.data());
  std::vector<u64> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = evals[index_map_[i]];
  return out;
}

Plaintext BatchEncoder::encode_periodic(std::span<const u64> pattern) const {
  const std::size_t row = row_size();
  const std::size_t T = pattern.size();
  if (T == 0 || (T & (T - 1)) != 0 || T > row || row % T != 0) {
    throw ParameterError("periodic encode: period must be a power of two "
                         "dividing the row size");
  }
  std::vector<u64> values(ctx_->n());
  for (std::size_t i = 0; i < row; ++i) {
    values[i] = pattern[i & (T - 1)];
    values[row + i] = values[i];
  }
  return encode(values);
}

EncodedPlaintext BatchEncoder::prepare(const Plaintext& pt) const {
  const std::size_t n = ctx_->n();
  const std::size_t k = ctx_->q_limbs();
  const u64 t = ctx_->plain_t();
  if (pt.n() != n) throw ParameterError("prepare: wrong plaintext size");
  EncodedPlaintext out(k, n);
  for (std::size_t l = 0; l < k; ++l) {
    const ring::Modulus& qi = ctx_->basis_q().mod(l);
    std::span<u64> dst = out.limb(l);
    std::span<const u64> src = pt.coeffs();
    for (std::size_t i = 0; i < n; ++i) dst[i] = lift_centered(src[i], t, qi);
    ctx_->basis_q().ntt(l).forward(dst.data());
  }
  return out;
}

std::vector<u64> BatchEncoder::periodic_coeffs(
    std::span<const u64> pattern, const PeriodicTables& tabs) const {
  const u64 t = ctx_->plain_t();
  for (u64 v : pattern) {
    if (v >= t) {
      throw ParameterError("batch encode: value not reduced mod t");
    }
  }
  std::vector<u64> c(2 * pattern.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = pattern[tabs.eval_src[j]];
  }
  tabs.ntt_t.inverse(c.data());
  return c;
}

void BatchEncoder::prepare_periodic_limb(std::span<const u64> coeffs,
                                         const PeriodicTables& tabs,
                                         std::size_t mod_idx,
                                         const ring::Modulus& m,
                                         u64* dst) const {
  const std::size_t n = ctx_->n();
  const u64 t = ctx_->plain_t();
  std::vector<u64> u(coeffs.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    u[j] = lift_centered(coeffs[j], t, m);
  }
  tabs.ntt[mod_idx].forward(u.data());
  for (std::size_t pos = 0; pos < n; ++pos) {
    dst[pos] = u[tabs.pos_to_eval[pos]];
  }
}

EncodedPlaintext BatchEncoder::prepare_periodic(
    std::span<const u64> pattern) const {
  const std::size_t T = pattern.size();
  const auto it = periodic_.find(T);
  if (it == periodic_.end()) {
    return prepare(encode_periodic(pattern)); // dense fallback
  }
  const std::size_t n = ctx_->n();
  const std::size_t k = ctx_->q_limbs();
  const std::vector<u64> coeffs = periodic_coeffs(pattern, it->second);
  EncodedPlaintext out(k, n);
  for (std::size_t l = 0; l < k; ++l) {
    prepare_periodic_limb(coeffs, it->second, l, ctx_->basis_q().mod(l),
                          out.limb(l).data());
  }
  return out;
}

std::vector<u64> BatchEncoder::prepare_periodic_sp(
    std::span<const u64> pattern) const {
  const std::size_t n = ctx_->n();
  const u64 t = ctx_->plain_t();
  const std::size_t T = pattern.size();
  std::vector<u64> out(n);
  const auto it = periodic_.find(T);
  if (it == periodic_.end()) {
    // dense fallback for uncovered periods
    const Plaintext pt = encode_periodic(pattern);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = lift_centered(pt[i], t, ctx_->sp());
    }
    ctx_->sp_ntt().forward(out.data());
    return out;
  }
  const std::vector<u64> coeffs = periodic_coeffs(pattern, it->second);
  prepare_periodic_limb(coeffs, it->second, ctx_->q_limbs(), ctx_->sp(),
                        out.data());
  return out;
}

std::vector<u64> BatchEncoder::prepare_periodic_small(
    std::span<const u64> pattern) const {
  const auto it = periodic_.find(pattern.size());
  if (it == periodic_.end()) return {};
  const PeriodicTables& tabs = it->second;
  const std::size_t k = ctx_->q_limbs();
  const std::size_t two_t = 2 * pattern.size();
  const u64 t = ctx_->plain_t();
  const std::vector<u64> coeffs = periodic_coeffs(pattern, tabs);
  std::vector<u64> out((k + 1) * two_t);
  for (std::size_t l = 0; l <= k; ++l) {
    const ring::Modulus& m = l < k ? ctx_->basis_q().mod(l) : ctx_->sp();
    u64* dst = out.data() + l * two_t;
    for (std::size_t j = 0; j < two_t; ++j) {
      dst[j] = lift_centered(coeffs[j], t, m);
    }
    tabs.ntt[l].forward(dst);
  }
  return out;
}

std::span<const u32> BatchEncoder::periodic_positions(std::size_t T) const {
  const auto it = periodic_.find(T);
  if (it == periodic_.end()) return {};
  return it->second.pos_to_eval;
}

} // namespace hhekit::bfv
