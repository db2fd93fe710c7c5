// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Hybrid pipeline: key bundles, transciphering and encrypted linear-layer
// evaluation, validated against the stream cipher itself, slot-space modular
// oracles and wide-integer reference sums.

#include "doctest.h"

#include <algorithm>
#include <sstream>
#include <string>

#include "hhekit/bfv/serialize.hpp"
#include "hhekit/hhe/transcipher.hpp"
#include "oracles.hpp"

using namespace hhekit;

namespace {

hhe::HheKeyBundle& bundle_test() {
  static hhe::HheKeyBundle b =
      hhe::hhe_keygen("test-8192", ring::Xof("test/hhe/keys"));
  return b;
}

hhe::Transcipher& engine_test() {
  static hhe::Transcipher tc(bundle_test().ctx);
  return tc;
}

std::vector<u64> random_words(ring::Xof& xof, std::size_t n, u64 p) {
  std::vector<u64> v(n);
  for (u64& x : v) {
    x = xof.uniform(p);
  }
  return v;
}

hhe::EncryptedSymKey encrypt_key(const hhe::HheKeyBundle& kb,
                                 const sym::SymKey& key, ring::Xof& rng) {
  std::vector<u64> slots(kb.ctx->n(), 0);
  std::copy(key.words.begin(), key.words.end(), slots.begin());
  const bfv::Encryptor enc(kb.ctx, kb.pk);
  const bfv::BatchEncoder encoder(kb.ctx);
  return hhe::EncryptedSymKey{enc.encrypt(encoder.encode(slots), rng)};
}

std::vector<u64> dec_slots(const hhe::HheKeyBundle& kb,
                           const bfv::BatchEncoder& encoder,
                           const bfv::Ciphertext& ct) {
  const bfv::Decryptor dec(kb.ctx, kb.sk);
  return encoder.decode(dec.decrypt(ct));
}

bool counters_equal(const OpCounters& a, const OpCounters& b, u64 factor) {
  return a.rotations == factor * b.rotations &&
         a.ct_ct_muls == factor * b.ct_ct_muls &&
         a.ct_pt_muls == factor * b.ct_pt_muls &&
         a.relins == factor * b.relins &&
         a.mod_switches == factor * b.mod_switches &&
         a.adds == factor * b.adds;
}

} // namespace

TEST_CASE("hhe: homomorphic keystream matches the stream cipher") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const sym::CipherProfile& prof = tc.cipher();
  const std::size_t t = prof.t;

  ring::Xof rng("test/hhe/keystream");
  std::size_t checked = 0;
  for (std::size_t k = 0; k < 20; ++k) {
    ring::Xof kseed = rng.fork("key" + std::to_string(k));
    const sym::SymKey key = sym::ske_gen(prof, kseed);
    ring::Xof erng = rng.fork("enc" + std::to_string(k));
    const hhe::EncryptedSymKey ck = encrypt_key(kb, key, erng);
    const bfv::Ciphertext expanded = tc.expand_key(kb.evk, ck);
    for (std::size_t i = 0; i < 5; ++i) {
      sym::Nonce nonce{};
      rng.squeeze(std::span<u8>(nonce.data(), nonce.size()));
      const u64 block = rng.next_u64();
      const bfv::Ciphertext zct =
          tc.keystream_ct(kb.evk, expanded, nonce, block);
      const std::vector<u64> slots = dec_slots(kb, tc.encoder(), zct);
      const std::vector<u64> z = sym::keystream(prof, key, nonce, block);
      std::size_t bad = 0;
      for (std::size_t w = 0; w + 2 * t <= slots.size(); w += 2 * t) {
        for (std::size_t j = 0; j < t; ++j) {
          if (slots[w + j] != z[j]) {
            ++bad;
          }
        }
      }
      CHECK(bad == 0);
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("hhe: transciphered blocks recover the message exactly") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const std::size_t t = tc.cipher().t;
  const bfv::Decryptor dec(kb.ctx, kb.sk);

  ring::Xof rng("test/hhe/roundtrip");
  for (const std::size_t len :
       {std::size_t(1), t - 1, t, t + 1, 4 * t, 5 * t + 7}) {
    const ring::Xof seed = rng.fork("msg" + std::to_string(len));
    ring::Xof xr = rng.fork("x" + std::to_string(len));
    const std::vector<u64> x = random_words(xr, len, tc.cipher().p);
    const auto [c, ck] = tc.hhe_enc(kb.pk, x, seed);
    REQUIRE(c.words.size() == len);

    const std::vector<hhe::TranscipheredInput> ins =
        tc.hhe_decomp(kb.evk, c, ck);
    REQUIRE(ins.size() == (len + t - 1) / t);
    CHECK(dec.invariant_noise_budget(ins[0].ct) > 0);
    for (std::size_t b = 0; b < ins.size(); ++b) {
      CHECK(ins[b].block_index == b);
      CHECK(ins[b].nonce == c.nonce);
      const std::vector<u64> slots = dec_slots(kb, tc.encoder(), ins[b].ct);
      for (std::size_t j = 0; j < t && t * b + j < len; ++j) {
        CHECK(slots[j] == x[t * b + j]);
        // The block pattern repeats across every 2t window.
        CHECK(slots[2 * t + j] == slots[j]);
      }
    }
  }
}

TEST_CASE("hhe: a paper-profile message round-trips with noise to spare") {
  const hhe::HheKeyBundle kb =
      hhe::hhe_keygen("paper-16384", ring::Xof("test/hhe/paper-keys"));
  hhe::Transcipher tc(kb.ctx);
  const std::size_t t = tc.cipher().t;
  const u64 p = tc.cipher().p;
  const bfv::Decryptor dec(kb.ctx, kb.sk);

  ring::Xof rng("test/hhe/paper-msg");
  const std::size_t len = t + t / 2;
  const std::vector<u64> x = random_words(rng, len, p);
  const auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("seed"));
  const std::vector<hhe::TranscipheredInput> ins =
      tc.hhe_decomp(kb.evk, c, ck);
  REQUIRE(ins.size() == 2);
  // Headroom after transciphering must still cover a ciphertext product
  // plus the rotation fold.
  CHECK(dec.invariant_noise_budget(ins[0].ct) > 40);
  for (std::size_t b = 0; b < ins.size(); ++b) {
    const std::vector<u64> slots = dec_slots(kb, tc.encoder(), ins[b].ct);
    for (std::size_t j = 0; j < t && t * b + j < len; ++j) {
      CHECK(slots[j] == x[t * b + j]);
    }
  }

  const std::size_t out_dim = 2;
  std::vector<i64> w(out_dim * len);
  std::vector<i64> bias(out_dim);
  for (i64& v : w) {
    v = static_cast<i64>(rng.uniform(p)) - static_cast<i64>(p / 2);
  }
  for (i64& v : bias) {
    v = static_cast<i64>(rng.uniform(p)) - static_cast<i64>(p / 2);
  }
  const hhe::LinearLayerCircuit circ = tc.make_linear_circuit(
      kb.pk, len, out_dim, w, bias, rng.fork("circuit"));
  const bfv::Ciphertext res = tc.hhe_eval(kb.evk, circ, ins);
  CHECK(dec.invariant_noise_budget(res) > 0);
  const std::vector<u64> got = hhe::hhe_dec(kb, res);
  for (std::size_t r = 0; r < out_dim; ++r) {
    const std::vector<i64> row(w.begin() + static_cast<long>(r * len),
                               w.begin() + static_cast<long>((r + 1) * len));
    CHECK(got[r] == oracle::affine_dot_mod(row, x, bias[r], p));
  }
}

TEST_CASE("hhe: encrypted linear layers match the modular oracle") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const std::size_t t = tc.cipher().t;
  const u64 p = tc.cipher().p;

  struct Shape {
    std::size_t in_dim;
    std::size_t out_dim;
  };
  const Shape shapes[] = {{5, 1},  {t, 2},       {t + 1, 3},
                          {2 * t, 8}, {3 * t + 4, 3}, {180, 2}};
  ring::Xof rng("test/hhe/linear");
  for (const Shape& s : shapes) {
    const std::string tag =
        std::to_string(s.in_dim) + "x" + std::to_string(s.out_dim);
    ring::Xof xr = rng.fork("x" + tag);
    const std::vector<u64> x = random_words(xr, s.in_dim, p);
    std::vector<i64> w(s.out_dim * s.in_dim);
    std::vector<i64> bias(s.out_dim);
    for (i64& v : w) {
      v = static_cast<i64>(xr.uniform(p)) - static_cast<i64>(p / 2);
    }
    for (i64& v : bias) {
      v = static_cast<i64>(xr.uniform(p)) - static_cast<i64>(p / 2);
    }

    const auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("seed" + tag));
    const std::vector<hhe::TranscipheredInput> ins =
        tc.hhe_decomp(kb.evk, c, ck);
    const hhe::LinearLayerCircuit circ = tc.make_linear_circuit(
        kb.pk, s.in_dim, s.out_dim, w, bias, rng.fork("circ" + tag));
    REQUIRE(circ.w_rows.size() == s.out_dim * ins.size());
    const std::vector<u64> got =
        hhe::hhe_dec(kb, tc.hhe_eval(kb.evk, circ, ins));
    for (std::size_t r = 0; r < s.out_dim; ++r) {
      const std::vector<i64> row(
          w.begin() + static_cast<long>(r * s.in_dim),
          w.begin() + static_cast<long>((r + 1) * s.in_dim));
      CHECK(got[r] == oracle::affine_dot_mod(row, x, bias[r], p));
    }
  }

  // Identity rows return the first inputs; zero rows return the bias.
  ring::Xof xr = rng.fork("trivial");
  const std::vector<u64> x = random_words(xr, t, p);
  std::vector<i64> ident(8 * t, 0);
  for (std::size_t r = 0; r < 8; ++r) {
    ident[r * t + r] = 1;
  }
  const std::vector<i64> zero_bias(8, 0);
  const auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("trivial-seed"));
  const std::vector<hhe::TranscipheredInput> ins =
      tc.hhe_decomp(kb.evk, c, ck);
  const std::vector<u64> got = hhe::hhe_dec(
      kb, tc.hhe_eval(kb.evk,
                      tc.make_linear_circuit(kb.pk, t, 8, ident, zero_bias,
                                             rng.fork("ident")),
                      ins));
  for (std::size_t r = 0; r < 8; ++r) {
    CHECK(got[r] == x[r]);
  }
  const std::vector<i64> zeros(2 * t, 0);
  const std::vector<i64> some_bias = {41, -17};
  const std::vector<u64> got0 = hhe::hhe_dec(
      kb, tc.hhe_eval(kb.evk,
                      tc.make_linear_circuit(kb.pk, t, 2, zeros, some_bias,
                                             rng.fork("zeros")),
                      ins));
  CHECK(got0[0] == 41);
  CHECK(got0[1] == p - 17);
}

TEST_CASE("hhe: no-wrap circuits agree with wide-integer inference") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const u64 p = tc.cipher().p;

  const std::size_t in_dim = 30, out_dim = 2;
  ring::Xof rng("test/hhe/nowrap");
  std::vector<u64> x(in_dim);
  for (u64& v : x) {
    v = rng.uniform(16);
  }
  std::vector<i64> w(out_dim * in_dim);
  std::vector<i64> bias(out_dim);
  for (i64& v : w) {
    v = static_cast<i64>(rng.uniform(7)) - 3;
  }
  for (i64& v : bias) {
    v = static_cast<i64>(rng.uniform(201)) - 100;
  }

  const auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("seed"));
  const std::vector<hhe::TranscipheredInput> ins =
      tc.hhe_decomp(kb.evk, c, ck);
  const hhe::LinearLayerCircuit circ =
      tc.make_linear_circuit(kb.pk, in_dim, out_dim, w, bias, rng.fork("w"));
  const std::vector<u64> got =
      hhe::hhe_dec(kb, tc.hhe_eval(kb.evk, circ, ins));
  for (std::size_t r = 0; r < out_dim; ++r) {
    i64 wide = bias[r];
    for (std::size_t j = 0; j < in_dim; ++j) {
      wide += w[r * in_dim + j] * static_cast<i64>(x[j]);
    }
    CHECK(oracle::signed_lift(got[r], p) == wide);
  }
}

TEST_CASE("hhe: operation counts scale linearly in the input count") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const std::size_t t = tc.cipher().t;
  const u64 p = tc.cipher().p;
  ring::Xof rng("test/hhe/linearity");

  std::vector<i64> w(2 * t);
  const std::vector<i64> bias = {3, -4};
  for (i64& v : w) {
    v = static_cast<i64>(rng.uniform(31)) - 15;
  }
  const hhe::LinearLayerCircuit circ =
      tc.make_linear_circuit(kb.pk, t, 2, w, bias, rng.fork("circ"));

  const auto run = [&](std::size_t messages, const char* tag) {
    tc.reset_ops();
    for (std::size_t m = 0; m < messages; ++m) {
      const std::string mtag = std::string(tag) + std::to_string(m);
      ring::Xof xr = rng.fork("x" + mtag);
      const std::vector<u64> x = random_words(xr, t, p);
      const auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("seed" + mtag));
      const std::vector<hhe::TranscipheredInput> ins =
          tc.hhe_decomp(kb.evk, c, ck);
      (void)tc.hhe_eval(kb.evk, circ, ins);
    }
    return std::array<OpCounters, 3>{tc.expand_ops(), tc.block_ops(),
                                     tc.eval_ops()};
  };

  const auto one = run(1, "a");
  const auto two = run(2, "b");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(counters_equal(two[i], one[i], 2));
  }

  // Within one message the per-block counters double with the block count
  // while key expansion stays a one-time cost.
  tc.reset_ops();
  ring::Xof xr1 = rng.fork("blk1");
  const auto [c1, ck1] =
      tc.hhe_enc(kb.pk, random_words(xr1, t, p), rng.fork("blk1s"));
  (void)tc.hhe_decomp(kb.evk, c1, ck1);
  const OpCounters blocks1 = tc.block_ops();
  const OpCounters expand1 = tc.expand_ops();

  tc.reset_ops();
  ring::Xof xr2 = rng.fork("blk2");
  const auto [c2, ck2] =
      tc.hhe_enc(kb.pk, random_words(xr2, 2 * t, p), rng.fork("blk2s"));
  (void)tc.hhe_decomp(kb.evk, c2, ck2);
  CHECK(counters_equal(tc.block_ops(), blocks1, 2));
  CHECK(counters_equal(tc.expand_ops(), expand1, 1));
}

TEST_CASE("hhe: the encrypted key ciphertext has a constant footprint") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const u64 p = tc.cipher().p;
  ring::Xof rng("test/hhe/footprint");

  std::size_t first = 0;
  for (const std::size_t len : {std::size_t(1), std::size_t(50),
                                std::size_t(300)}) {
    ring::Xof xr = rng.fork("x" + std::to_string(len));
    const std::vector<u64> x = random_words(xr, len, p);
    const auto [c, ck] =
        tc.hhe_enc(kb.pk, x, rng.fork("s" + std::to_string(len)));
    const std::size_t bytes = bfv::save_bytes(ck.ct, *kb.ctx).size();
    if (first == 0) {
      first = bytes;
    }
    CHECK(bytes == first);
    // The symmetric payload grows with the message instead.
    std::ostringstream oss(std::ios::binary);
    sym::save(c, oss);
    CHECK(oss.str().size() == 31 + 8 * len);
  }
}

TEST_CASE("hhe: repeated decompositions reuse the expanded key") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const sym::CipherProfile& prof = tc.cipher();
  ring::Xof rng("test/hhe/cache");

  const sym::SymKey key = sym::ske_gen(prof, rng.fork("key"));
  ring::Xof erng = rng.fork("enc");
  const hhe::EncryptedSymKey ck = encrypt_key(kb, key, erng);
  sym::Nonce na{}, nb{};
  na[0] = 1;
  nb[0] = 2;
  ring::Xof xr = rng.fork("x");
  const std::vector<u64> xa = random_words(xr, prof.t, prof.p);
  const std::vector<u64> xb = random_words(xr, prof.t, prof.p);
  const sym::SymCiphertext ca = sym::ske_enc(prof, key, na, xa);
  const sym::SymCiphertext cb = sym::ske_enc(prof, key, nb, xb);

  tc.reset_ops();
  const auto ins_a = tc.hhe_decomp(kb.evk, ca, ck);
  const OpCounters after_first = tc.expand_ops();
  CHECK(after_first.rotations > 0);
  const auto ins_b = tc.hhe_decomp(kb.evk, cb, ck);
  CHECK(counters_equal(tc.expand_ops(), after_first, 1));

  const std::vector<u64> sa = dec_slots(kb, tc.encoder(), ins_a[0].ct);
  const std::vector<u64> sb = dec_slots(kb, tc.encoder(), ins_b[0].ct);
  for (std::size_t j = 0; j < prof.t; ++j) {
    CHECK(sa[j] == xa[j]);
    CHECK(sb[j] == xb[j]);
  }
}

TEST_CASE("hhe: encryption and key generation are deterministic in the seed") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const u64 p = tc.cipher().p;

  ring::Xof xr("test/hhe/determinism");
  const std::vector<u64> x = random_words(xr, 10, p);
  const auto [c1, k1] = tc.hhe_enc(kb.pk, x, ring::Xof("test/hhe/seed-a"));
  const auto [c2, k2] = tc.hhe_enc(kb.pk, x, ring::Xof("test/hhe/seed-a"));
  const auto [c3, k3] = tc.hhe_enc(kb.pk, x, ring::Xof("test/hhe/seed-b"));
  CHECK(c1.nonce == c2.nonce);
  CHECK(c1.words == c2.words);
  CHECK(bfv::save_bytes(k1.ct, *kb.ctx) == bfv::save_bytes(k2.ct, *kb.ctx));
  CHECK(c1.nonce != c3.nonce);
  CHECK(c1.words != c3.words);

  const hhe::HheKeyBundle kb2 =
      hhe::hhe_keygen("test-8192", ring::Xof("test/hhe/keys"));
  CHECK(bfv::save_bytes(kb.pk, *kb.ctx) == bfv::save_bytes(kb2.pk, *kb2.ctx));
}

TEST_CASE("hhe: rejects mismatched inputs and exhausted budgets") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const std::size_t t = tc.cipher().t;
  const u64 p = tc.cipher().p;
  ring::Xof rng("test/hhe/errors");

  CHECK_THROWS_AS((void)tc.hhe_enc(kb.pk, std::vector<u64>{}, rng),
                  DomainError);
  CHECK_THROWS_AS((void)tc.hhe_enc(kb.pk, std::vector<u64>{p}, rng),
                  DomainError);

  ring::Xof xr = rng.fork("x");
  const std::vector<u64> x = random_words(xr, 2 * t, p);
  auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("seed"));

  sym::SymCiphertext wrong = c;
  wrong.profile_id = static_cast<u8>(wrong.profile_id % 3 + 1);
  CHECK_THROWS_AS((void)tc.hhe_decomp(kb.evk, wrong, ck), ParameterError);
  sym::SymCiphertext empty = c;
  empty.words.clear();
  CHECK_THROWS_AS((void)tc.hhe_decomp(kb.evk, empty, ck), DomainError);

  std::vector<hhe::TranscipheredInput> ins = tc.hhe_decomp(kb.evk, c, ck);
  REQUIRE(ins.size() == 2);
  std::vector<i64> w(2 * 2 * t, 1);
  const std::vector<i64> bias = {0, 0};
  const hhe::LinearLayerCircuit circ = tc.make_linear_circuit(
      kb.pk, 2 * t, 2, w, bias, rng.fork("circ"));

  const std::vector<hhe::TranscipheredInput> one_block(ins.begin(),
                                                       ins.begin() + 1);
  CHECK_THROWS_AS((void)tc.hhe_eval(kb.evk, circ, one_block),
                  ValidationError);
  std::vector<hhe::TranscipheredInput> swapped = ins;
  std::swap(swapped[0], swapped[1]);
  CHECK_THROWS_AS((void)tc.hhe_eval(kb.evk, circ, swapped), ValidationError);
  std::vector<hhe::TranscipheredInput> forged = ins;
  forged[1].nonce[0] ^= 1;
  CHECK_THROWS_AS((void)tc.hhe_eval(kb.evk, circ, forged), ValidationError);

  const std::vector<i64> none;
  const std::vector<i64> one_bias = {0};
  CHECK_THROWS_AS((void)tc.make_linear_circuit(kb.pk, 0, 1, none, one_bias,
                                               rng.fork("e1")),
                  ParameterError);
  CHECK_THROWS_AS((void)tc.make_linear_circuit(kb.pk, 8 * t + 1, 1,
                                               std::vector<i64>(8 * t + 1, 0),
                                               one_bias, rng.fork("e2")),
                  ParameterError);
  CHECK_THROWS_AS((void)tc.make_linear_circuit(kb.pk, t, 9,
                                               std::vector<i64>(9 * t, 0),
                                               std::vector<i64>(9, 0),
                                               rng.fork("e3")),
                  ParameterError);
  CHECK_THROWS_AS((void)tc.make_linear_circuit(kb.pk, t, 2,
                                               std::vector<i64>(t, 0), bias,
                                               rng.fork("e4")),
                  ParameterError);

  // Depth exhaustion surfaces as DepthError, noise exhaustion as NoiseError.
  std::vector<hhe::TranscipheredInput> drained = ins;
  drained[0].ct.set_depth_budget(0);
  CHECK_THROWS_AS((void)tc.hhe_eval(kb.evk, circ, drained), DepthError);

  bfv::Evaluator ev(kb.ctx);
  bfv::Ciphertext dead = ins[0].ct;
  dead.set_depth_budget(8);
  dead = ev.square_relin(dead, kb.evk.relin);
  dead = ev.square_relin(dead, kb.evk.relin);
  dead = ev.square_relin(dead, kb.evk.relin);
  CHECK_THROWS_AS((void)hhe::hhe_dec(kb, dead), NoiseError);
}

TEST_CASE("hhe: evaluation keys serialize without secret material") {
  hhe::HheKeyBundle& kb = bundle_test();
  hhe::Transcipher& tc = engine_test();
  const u64 p = tc.cipher().p;
  ring::Xof rng("test/hhe/evk-io");

  std::ostringstream oss(std::ios::binary);
  hhe::save(kb.evk, *kb.ctx, oss);
  const std::string blob = oss.str();

  // Round trip drives the same transciphering result.
  std::istringstream iss(blob, std::ios::binary);
  const hhe::EvaluationKey loaded = hhe::load_evaluation_key(*kb.ctx, iss);
  ring::Xof xr = rng.fork("x");
  const std::vector<u64> x = random_words(xr, tc.cipher().t, p);
  const auto [c, ck] = tc.hhe_enc(kb.pk, x, rng.fork("seed"));
  const auto a = tc.hhe_decomp(kb.evk, c, ck);
  const auto b = tc.hhe_decomp(loaded, c, ck);
  CHECK(dec_slots(kb, tc.encoder(), a[0].ct) ==
        dec_slots(kb, tc.encoder(), b[0].ct));

  // The container rejects tampering, truncation and foreign parameters.
  std::string bad = blob;
  bad[0] ^= 1;
  std::istringstream bad_is(bad, std::ios::binary);
  CHECK_THROWS_AS((void)hhe::load_evaluation_key(*kb.ctx, bad_is),
                  SerializationError);
  std::istringstream trunc_is(blob.substr(0, blob.size() / 2),
                              std::ios::binary);
  CHECK_THROWS_AS((void)hhe::load_evaluation_key(*kb.ctx, trunc_is),
                  SerializationError);
  const auto tiny = bfv::BfvContext::create("tiny-1024");
  std::istringstream foreign_is(blob, std::ios::binary);
  CHECK_THROWS_AS((void)hhe::load_evaluation_key(*tiny, foreign_is),
                  SerializationError);

  // No window of the published material reproduces the secret key bytes.
  const std::vector<u8> sk_bytes = bfv::save_bytes(kb.sk, *kb.ctx);
  const std::size_t header = 4 + 2 + 32 + 1;
  REQUIRE(sk_bytes.size() > header + 256);
  const auto needle_begin = sk_bytes.begin() + static_cast<long>(header);
  const auto hit = std::search(blob.begin(), blob.end(), needle_begin,
                               needle_begin + 256,
                               [](char a, u8 b) {
                                 return static_cast<u8>(a) == b;
                               });
  CHECK(hit == blob.end());
}
