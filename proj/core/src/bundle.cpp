// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/hhe/bundle.hpp"

#include <set>
#include <string>

#include "hhekit/bfv/serialize.hpp"
#include "hhekit/io/binio.hpp"

namespace hhekit::hhe {

std::vector<long> rotation_steps(const bfv::BfvContext& ctx,
                                 const sym::CipherProfile& prof) {
  const long row = static_cast<long>(ctx.n() / 2);
  const long period = 2 * static_cast<long>(prof.t);

  // Baby-step/giant-step split the diagonal method uses at period 2t. Must
  // match make_linear_map's default choice.
  long log_p = 0;
  while ((1l << (log_p + 1)) <= period) {
    ++log_p;
  }
  long n1 = 1l << ((log_p + 2) / 2);
  if (n1 > period) {
    n1 = period;
  }
  const long n2 = period / n1;

  std::set<long> steps;
  for (long b = 1; b < n1; ++b) {
    steps.insert(b);
  }
  for (long g = 1; g < n2; ++g) {
    steps.insert(g * n1);
  }
  // Stream-cipher word shift and packing of up to eight output rows.
  for (long k = 1; k <= 7; ++k) {
    steps.insert(-k);
  }
  // Key-expansion doublings (also cover the -2t block-recombination shift).
  for (long d = period; d <= row / 2; d <<= 1) {
    steps.insert(-d);
  }
  // Halving folds for slot sums over one 2t window.
  for (long f = 1; f <= static_cast<long>(prof.t) && f <= row / 2; f <<= 1) {
    steps.insert(f);
  }
  return {steps.begin(), steps.end()};
}

HheKeyBundle hhe_keygen(std::string_view profile_name, const ring::Xof& seed) {
  HheKeyBundle b;
  b.ctx = bfv::BfvContext::create(profile_name);
  b.cipher = sym::cipher_profile(profile_name);
  bfv::KeyGenerator gen(b.ctx, seed);
  b.sk = gen.secret_key();
  b.pk = gen.make_public_key();
  b.evk.relin = gen.make_relin_key();
  const std::vector<long> steps = rotation_steps(*b.ctx, b.cipher);
  b.evk.galois = gen.make_galois_keys(steps, /*row_swap=*/true);
  return b;
}

void save(const EvaluationKey& evk, const bfv::BfvContext& ctx,
          std::ostream& os) {
  io::BinWriter w(os);
  w.magic(kMagicKey);
  w.u16(kFormatVersion);
  w.raw(ctx.params_hash().data(), ctx.params_hash().size());
  w.u8(sym::cipher_profile(ctx.spec().name).id);
  bfv::save(evk.relin, ctx, os);
  bfv::save(evk.galois, ctx, os);
}

EvaluationKey load_evaluation_key(const bfv::BfvContext& ctx,
                                  std::istream& is) {
  io::BinReader r(is);
  r.expect_magic(kMagicKey, "evaluation key");
  const u16 ver = r.u16();
  if (ver != kFormatVersion) {
    throw SerializationError("unsupported evaluation key version " +
                             std::to_string(ver));
  }
  std::array<u8, 32> hash{};
  r.raw(hash.data(), hash.size());
  if (hash != ctx.params_hash()) {
    throw SerializationError(
        "evaluation key was produced under different encryption parameters");
  }
  const u8 id = r.u8();
  if (id != sym::cipher_profile(ctx.spec().name).id) {
    throw SerializationError("evaluation key cipher profile mismatch");
  }
  EvaluationKey evk;
  evk.relin = bfv::load_kswitch_key(ctx, is);
  evk.galois = bfv::load_galois_keys(ctx, is);
  return evk;
}

} // namespace hhekit::hhe
