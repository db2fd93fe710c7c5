// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/hhe/transcipher.hpp"

#include <algorithm>

namespace hhekit::hhe {

namespace {

OpCounters diff(const OpCounters& after, const OpCounters& before) {
  OpCounters d;
  d.rotations = after.rotations - before.rotations;
  d.ct_ct_muls = after.ct_ct_muls - before.ct_ct_muls;
  d.ct_pt_muls = after.ct_pt_muls - before.ct_pt_muls;
  d.relins = after.relins - before.relins;
  d.mod_switches = after.mod_switches - before.mod_switches;
  d.adds = after.adds - before.adds;
  return d;
}

/// One round's linear part with the branch mix folded in: the 2t-periodic
/// slot map [L; R] -> [2(M1 L + c1) + (M2 R + c2); (M1 L + c1) + 2(M2 R + c2)]
/// as a diagonal-form matrix plus a constant pattern.
struct Stage {
  bfv::LinearMap map;
  bfv::Plaintext constants;
};

Stage make_stage(const bfv::BatchEncoder& encoder,
                 const sym::CipherProfile& prof, const sym::Nonce& nonce,
                 u64 block_index, u32 round) {
  const std::size_t t = prof.t;
  const std::size_t period = 2 * t;
  const u64 p = prof.p;
  const sym::AffineLayer a0 =
      sym::gen_affine(prof, nonce, block_index, round, 0);
  const sym::AffineLayer a1 =
      sym::gen_affine(prof, nonce, block_index, round, 1);

  const auto entry = [&](std::size_t i, std::size_t j) -> u64 {
    if (i < t) {
      return j < t ? (2 * a0.matrix[i * t + j]) % p
                   : a1.matrix[i * t + (j - t)];
    }
    return j < t ? a0.matrix[(i - t) * t + j]
                 : (2 * a1.matrix[(i - t) * t + (j - t)]) % p;
  };
  std::vector<std::vector<u64>> diags(period, std::vector<u64>(period));
  for (std::size_t d = 0; d < period; ++d) {
    for (std::size_t i = 0; i < period; ++i) {
      diags[d][i] = entry(i, (i + d) & (period - 1));
    }
  }

  Stage st;
  st.map = bfv::make_linear_map(encoder, diags);
  std::vector<u64> c(period);
  for (std::size_t i = 0; i < t; ++i) {
    c[i] = (2 * a0.constant[i] + a1.constant[i]) % p;
    c[t + i] = (a0.constant[i] + 2 * a1.constant[i]) % p;
  }
  st.constants = encoder.encode_periodic(c);
  return st;
}

} // namespace

Transcipher::Transcipher(std::shared_ptr<const bfv::BfvContext> ctx)
    : ctx_(std::move(ctx)),
      prof_(sym::cipher_profile(ctx_->spec().name)),
      encoder_(ctx_),
      eval_(ctx_) {
  std::vector<u64> mask(2 * prof_.t, 1);
  mask[0] = 0;
  mask[prof_.t] = 0;
  feistel_mask_ = encoder_.prepare_periodic(mask);
}

void Transcipher::reset_ops() {
  expand_ops_ = OpCounters{};
  block_ops_ = OpCounters{};
  eval_ops_ = OpCounters{};
}

std::pair<sym::SymCiphertext, EncryptedSymKey>
Transcipher::hhe_enc(const bfv::PublicKey& pk, std::span<const u64> x,
                     const ring::Xof& seed) const {
  if (x.empty()) {
    throw DomainError("encrypting an empty message");
  }
  const sym::SymKey key = sym::ske_gen(prof_, seed);
  sym::Nonce nonce{};
  ring::Xof nonce_rng = seed.fork("hhekit/hhe-enc/nonce");
  nonce_rng.squeeze(std::span<u8>(nonce.data(), nonce.size()));
  sym::SymCiphertext c = sym::ske_enc(prof_, key, nonce, x);
  EncryptedSymKey ck = encrypt_key(pk, key, seed.fork("hhekit/hhe-enc/encrypt"));
  return {std::move(c), std::move(ck)};
}

EncryptedSymKey Transcipher::encrypt_key(const bfv::PublicKey& pk,
                                         const sym::SymKey& key,
                                         const ring::Xof& seed) const {
  if (key.words.size() != 2 * prof_.t) {
    throw ParameterError("symmetric key width does not match the cipher profile");
  }
  std::vector<u64> slots(ctx_->n(), 0);
  std::copy(key.words.begin(), key.words.end(), slots.begin());
  ring::Xof enc_rng = seed;
  const bfv::Encryptor enc(ctx_, pk);
  return EncryptedSymKey{enc.encrypt(encoder_.encode(slots), enc_rng)};
}

bfv::Ciphertext Transcipher::expand_key(const EvaluationKey& evk,
                                        const EncryptedSymKey& ck) {
  const OpCounters before = eval_.counters();
  const long row = static_cast<long>(ctx_->n() / 2);
  bfv::Ciphertext v = ck.ct;
  for (long d = static_cast<long>(2 * prof_.t); d <= row / 2; d <<= 1) {
    eval_.add_inplace(v, eval_.rotate_rows(v, -d, evk.galois));
  }
  eval_.add_inplace(v, eval_.rotate_columns(v, evk.galois));
  expand_ops_ += diff(eval_.counters(), before);
  return v;
}

bfv::Ciphertext Transcipher::keystream_internal(const EvaluationKey& evk,
                                                const bfv::Ciphertext& expanded,
                                                const sym::Nonce& nonce,
                                                u64 block_index) {
  bfv::Ciphertext state = expanded;
  const u32 rounds = static_cast<u32>(prof_.rounds);
  for (u32 round = 1; round <= rounds; ++round) {
    const Stage st = make_stage(encoder_, prof_, nonce, block_index, round);
    state = eval_.apply_linear_map(state, st.map, evk.galois);
    eval_.add_plain_inplace(state, st.constants);
    if (round < rounds) {
      // s_j += s_{j-1}^2 within each branch, branch heads untouched.
      const bfv::Ciphertext sq = eval_.square_relin(state, evk.relin);
      bfv::Ciphertext shifted = eval_.rotate_rows(sq, -1, evk.galois);
      eval_.mul_plain_inplace(shifted, feistel_mask_);
      eval_.add_inplace(state, shifted);
    } else {
      const bfv::Ciphertext sq = eval_.square_relin(state, evk.relin);
      state = eval_.mul_relin(state, sq, evk.relin);
    }
  }
  const Stage fin = make_stage(encoder_, prof_, nonce, block_index, rounds + 1);
  state = eval_.apply_linear_map(state, fin.map, evk.galois);
  eval_.add_plain_inplace(state, fin.constants);
  return state;
}

bfv::Ciphertext Transcipher::keystream_ct(const EvaluationKey& evk,
                                          const bfv::Ciphertext& expanded,
                                          const sym::Nonce& nonce,
                                          u64 block_index) {
  const OpCounters before = eval_.counters();
  bfv::Ciphertext state =
      keystream_internal(evk, expanded, nonce, block_index);
  block_ops_ += diff(eval_.counters(), before);
  return state;
}

bfv::Ciphertext Transcipher::decomp_block(const EvaluationKey& evk,
                                          const sym::SymCiphertext& c,
                                          const bfv::Ciphertext& expanded,
                                          u64 block_index) {
  bfv::Ciphertext state =
      keystream_internal(evk, expanded, c.nonce, block_index);
  const std::size_t t = prof_.t;
  const std::size_t off = static_cast<std::size_t>(block_index) * t;
  const std::size_t len = std::min(t, c.words.size() - off);
  // x = c - z: the block's ciphertext words minus the keystream state. Tail
  // slots of a short final block and the whole right branch carry keystream
  // residue; downstream masks discard them.
  std::vector<u64> pattern(2 * t, 0);
  std::copy(c.words.begin() + static_cast<long>(off),
            c.words.begin() + static_cast<long>(off + len), pattern.begin());
  eval_.negate_inplace(state);
  eval_.add_plain_inplace(state, encoder_.encode_periodic(pattern));
  eval_.spend_depth(state, 1);
  return state;
}

std::vector<TranscipheredInput>
Transcipher::hhe_decomp(const EvaluationKey& evk, const sym::SymCiphertext& c,
                        const EncryptedSymKey& ck) {
  if (c.profile_id != prof_.id) {
    throw ParameterError(
        "symmetric ciphertext was produced under a different profile");
  }
  if (c.words.empty()) {
    throw DomainError("transciphering an empty ciphertext");
  }
  std::vector<u64> ck_id;
  for (const ring::RnsPoly& p : ck.ct.comps()) {
    ck_id.insert(ck_id.end(), p.data().begin(), p.data().end());
  }
  if (!has_cache_ || ck_id != cached_ck_) {
    cached_expanded_ = expand_key(evk, ck);
    cached_ck_ = std::move(ck_id);
    has_cache_ = true;
  }
  const bfv::Ciphertext& expanded = cached_expanded_;
  const std::size_t nb = (c.words.size() + prof_.t - 1) / prof_.t;
  std::vector<TranscipheredInput> out;
  out.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const OpCounters before = eval_.counters();
    TranscipheredInput in;
    in.ct = decomp_block(evk, c, expanded, b);
    in.block_index = b;
    in.nonce = c.nonce;
    block_ops_ += diff(eval_.counters(), before);
    out.push_back(std::move(in));
  }
  return out;
}

LinearLayerCircuit Transcipher::make_linear_circuit(
    const bfv::PublicKey& pk, std::size_t in_dim, std::size_t out_dim,
    std::span<const i64> weights, std::span<const i64> bias,
    const ring::Xof& seed) const {
  const std::size_t t = prof_.t;
  if (in_dim == 0 || in_dim > 8 * t) {
    throw ParameterError("linear circuit input width must be in [1, 8t]");
  }
  if (out_dim == 0 || out_dim > 8) {
    throw ParameterError("linear circuit output width must be in [1, 8]");
  }
  if (weights.size() != in_dim * out_dim || bias.size() != out_dim) {
    throw ParameterError(
        "linear circuit coefficient counts do not match its dimensions");
  }
  const std::size_t nb = (in_dim + t - 1) / t;
  const u64 p = prof_.p;
  const auto to_mod = [&](i64 v) -> u64 {
    i64 r = v % static_cast<i64>(p);
    if (r < 0) {
      r += static_cast<i64>(p);
    }
    return static_cast<u64>(r);
  };

  const bfv::Encryptor enc(ctx_, pk);
  ring::Xof rng = seed.fork("hhekit/linear-circuit");
  LinearLayerCircuit circ;
  circ.in_dim = in_dim;
  circ.out_dim = out_dim;
  circ.w_rows.reserve(out_dim * nb);
  for (std::size_t r = 0; r < out_dim; ++r) {
    for (std::size_t b = 0; b < nb; ++b) {
      // (Row r, block b) in the transciphered block's layout: weight t*b + j
      // in slot j of each 2t window, zeros over the residue half.
      std::vector<u64> pattern(2 * t, 0);
      for (std::size_t j = 0; j < t && t * b + j < in_dim; ++j) {
        pattern[j] = to_mod(weights[r * in_dim + t * b + j]);
      }
      circ.w_rows.push_back(
          enc.encrypt(encoder_.encode_periodic(pattern), rng));
    }
  }
  std::vector<u64> bias_slots(ctx_->n(), 0);
  for (std::size_t r = 0; r < out_dim; ++r) {
    bias_slots[r] = to_mod(bias[r]);
  }
  circ.bias = enc.encrypt(encoder_.encode(bias_slots), rng);
  return circ;
}

bfv::Ciphertext
Transcipher::hhe_eval(const EvaluationKey& evk,
                      const LinearLayerCircuit& circuit,
                      std::span<const TranscipheredInput> inputs) {
  const std::size_t t = prof_.t;
  if (circuit.in_dim == 0 || circuit.out_dim == 0) {
    throw ValidationError("linear circuit is incomplete");
  }
  const std::size_t nb = (circuit.in_dim + t - 1) / t;
  if (circuit.w_rows.size() != circuit.out_dim * nb) {
    throw ValidationError("linear circuit is incomplete");
  }
  if (inputs.size() != nb) {
    throw ValidationError(
        "circuit input width does not match the supplied block count");
  }
  for (std::size_t b = 0; b < nb; ++b) {
    if (inputs[b].block_index != b) {
      throw ValidationError("blocks must be consecutive from index zero");
    }
    if (inputs[b].nonce != inputs[0].nonce) {
      throw ValidationError("blocks of one message must share a nonce");
    }
  }

  const OpCounters before = eval_.counters();

  // Level-align everything to the deepest participant.
  std::size_t level = circuit.bias.limbs();
  for (const TranscipheredInput& in : inputs) {
    level = std::min(level, in.ct.limbs());
  }
  for (const bfv::Ciphertext& w : circuit.w_rows) {
    level = std::min(level, w.limbs());
  }
  const auto align = [&](bfv::Ciphertext ct) {
    while (ct.limbs() > level) {
      eval_.mod_switch_to_next_inplace(ct);
    }
    return ct;
  };
  std::vector<bfv::Ciphertext> xs;
  xs.reserve(nb);
  for (const TranscipheredInput& in : inputs) {
    xs.push_back(align(in.ct));
  }

  bfv::Ciphertext out;
  for (std::size_t r = 0; r < circuit.out_dim; ++r) {
    // Slotwise products block by block; residue slots meet weight zeros.
    bfv::Ciphertext prod;
    for (std::size_t b = 0; b < nb; ++b) {
      bfv::Ciphertext term =
          eval_.mul_relin(align(circuit.w_rows[r * nb + b]), xs[b],
                          evk.relin);
      if (b == 0) {
        prod = std::move(term);
      } else {
        eval_.add_inplace(prod, term);
      }
    }
    // Halving folds over each 2t window leave the full dot product in every
    // slot; an 8-periodic one-hot mask then pins it to slot r mod 8.
    for (long s = 1; s <= static_cast<long>(t); s <<= 1) {
      eval_.add_inplace(prod, eval_.rotate_rows(prod, s, evk.galois));
    }
    std::vector<u64> unit(8, 0);
    unit[r % 8] = 1;
    eval_.mul_plain_inplace(prod, encoder_.prepare_periodic(unit));
    if (r == 0) {
      out = std::move(prod);
    } else {
      eval_.add_inplace(out, prod);
    }
  }
  eval_.add_inplace(out, align(circuit.bias));
  eval_.spend_depth(out, 1);
  eval_ops_ += diff(eval_.counters(), before);
  return out;
}

std::vector<u64> hhe_dec(const HheKeyBundle& bundle,
                         const bfv::Ciphertext& ct) {
  const bfv::Decryptor dec(bundle.ctx, bundle.sk);
  if (dec.invariant_noise_budget(ct) <= 0) {
    throw NoiseError("ciphertext noise budget is exhausted");
  }
  const bfv::BatchEncoder encoder(bundle.ctx);
  return encoder.decode(dec.decrypt(ct));
}

} // namespace hhekit::hhe
