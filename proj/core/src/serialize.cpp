// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/bfv/serialize.hpp"

namespace hhekit::bfv {

namespace {

using ring::Domain;
using ring::RnsPoly;

void write_header(io::BinWriter& w, const BfvContext& ctx, ObjectKind kind) {
  w.magic(kMagicBfv);
  w.u16(kFormatVersion);
  w.raw(ctx.params_hash().data(), ctx.params_hash().size());
  w.u8(static_cast<u8>(kind));
}

void read_header(io::BinReader& r, const BfvContext& ctx, ObjectKind kind) {
  r.expect_magic(kMagicBfv, "lattice object");
  const u16 ver = r.u16();
  if (ver != kFormatVersion) {
    throw SerializationError("unsupported lattice format version " +
                             std::to_string(ver));
  }
  std::array<u8, 32> hash{};
  r.raw(hash.data(), hash.size());
  if (hash != ctx.params_hash()) {
    throw SerializationError(
        "object was produced under different encryption parameters");
  }
  const u8 k = r.u8();
  if (k != static_cast<u8>(kind)) {
    throw SerializationError("unexpected object kind " + std::to_string(k));
  }
}

void write_poly(io::BinWriter& w, const RnsPoly& p) {
  w.u8(static_cast<u8>(p.limbs()));
  w.u8(p.domain() == Domain::ntt ? 1 : 0);
  for (u64 v : p.data()) {
    w.u64(v);
  }
}

RnsPoly read_poly(io::BinReader& r, const BfvContext& ctx) {
  const u8 limbs = r.u8();
  if (limbs == 0 || limbs > ctx.q_limbs()) {
    throw SerializationError("polynomial limb count out of range");
  }
  const u8 dom = r.u8();
  if (dom > 1) {
    throw SerializationError("invalid polynomial domain tag");
  }
  RnsPoly p(ctx.basis_q(), limbs, dom == 1 ? Domain::ntt : Domain::coeff);
  for (std::size_t i = 0; i < limbs; ++i) {
    const u64 q = ctx.basis_q().mod(i).q;
    for (u64& v : p.limb(i)) {
      v = r.u64();
      if (v >= q) {
        throw SerializationError("polynomial word exceeds its limb modulus");
      }
    }
  }
  return p;
}

void write_words(io::BinWriter& w, const std::vector<u64>& v) {
  w.u64(v.size());
  for (u64 x : v) {
    w.u64(x);
  }
}

std::vector<u64> read_words(io::BinReader& r, std::size_t expected, u64 bound) {
  const u64 count = r.u64();
  if (count != expected) {
    throw SerializationError("word stream has unexpected length");
  }
  std::vector<u64> v(expected);
  for (u64& x : v) {
    x = r.u64();
    if (bound != 0 && x >= bound) {
      throw SerializationError("word exceeds its modulus");
    }
  }
  return v;
}

void write_digit(io::BinWriter& w, const KskDigit& d) {
  write_poly(w, d.b_q);
  write_poly(w, d.a_q);
  write_words(w, d.b_sp);
  write_words(w, d.a_sp);
}

KskDigit read_digit(io::BinReader& r, const BfvContext& ctx) {
  KskDigit d;
  d.b_q = read_poly(r, ctx);
  d.a_q = read_poly(r, ctx);
  if (d.b_q.limbs() != ctx.q_limbs() || d.a_q.limbs() != ctx.q_limbs()) {
    throw SerializationError("key digit must span all q limbs");
  }
  d.b_sp = read_words(r, ctx.n(), ctx.sp().q);
  d.a_sp = read_words(r, ctx.n(), ctx.sp().q);
  return d;
}

void write_ksk_body(io::BinWriter& w, const KswitchKey& ksk) {
  w.u8(static_cast<u8>(ksk.digits.size()));
  for (const KskDigit& d : ksk.digits) {
    write_digit(w, d);
  }
}

KswitchKey read_ksk_body(io::BinReader& r, const BfvContext& ctx) {
  const u8 nd = r.u8();
  if (nd != ctx.q_limbs()) {
    throw SerializationError("key-switching key digit count mismatch");
  }
  KswitchKey ksk;
  ksk.digits.reserve(nd);
  for (u8 j = 0; j < nd; ++j) {
    ksk.digits.push_back(read_digit(r, ctx));
  }
  return ksk;
}

} // namespace

void save(const Plaintext& pt, const BfvContext& ctx, std::ostream& os) {
  io::BinWriter w(os);
  write_header(w, ctx, ObjectKind::plaintext);
  w.u64(pt.n());
  for (u64 v : pt.coeffs()) {
    w.u64(v);
  }
}

Plaintext load_plaintext(const BfvContext& ctx, std::istream& is) {
  io::BinReader r(is);
  read_header(r, ctx, ObjectKind::plaintext);
  const u64 n = r.u64();
  if (n != ctx.n()) {
    throw SerializationError("plaintext degree mismatch");
  }
  Plaintext pt(ctx.n());
  for (std::size_t c = 0; c < n; ++c) {
    const u64 v = r.u64();
    if (v >= ctx.plain_t()) {
      throw SerializationError("plaintext coefficient exceeds the modulus");
    }
    pt[c] = v;
  }
  return pt;
}

void save(const Ciphertext& ct, const BfvContext& ctx, std::ostream& os) {
  io::BinWriter w(os);
  write_header(w, ctx, ObjectKind::ciphertext);
  w.u8(static_cast<u8>(ct.size()));
  w.u32(static_cast<u32>(ct.depth_budget()));
  for (const RnsPoly& p : ct.comps()) {
    write_poly(w, p);
  }
}

Ciphertext load_ciphertext(const BfvContext& ctx, std::istream& is) {
  io::BinReader r(is);
  read_header(r, ctx, ObjectKind::ciphertext);
  const u8 comps = r.u8();
  if (comps < 2 || comps > 3) {
    throw SerializationError("ciphertext component count out of range");
  }
  const u32 depth = r.u32();
  if (depth > 64) {
    throw SerializationError("ciphertext depth budget out of range");
  }
  std::vector<RnsPoly> polys;
  polys.reserve(comps);
  for (u8 i = 0; i < comps; ++i) {
    polys.push_back(read_poly(r, ctx));
    if (polys.back().limbs() != polys.front().limbs()) {
      throw SerializationError("ciphertext components at different levels");
    }
  }
  return Ciphertext(std::move(polys), static_cast<int>(depth));
}

void save(const SecretKey& sk, const BfvContext& ctx, std::ostream& os) {
  io::BinWriter w(os);
  write_header(w, ctx, ObjectKind::secret_key);
  w.u64(sk.s_coeff.size());
  for (int v : sk.s_coeff) {
    w.u8(static_cast<u8>(v + 1));
  }
}

SecretKey load_secret_key(const BfvContext& ctx, std::istream& is) {
  io::BinReader r(is);
  read_header(r, ctx, ObjectKind::secret_key);
  const u64 n = r.u64();
  if (n != ctx.n()) {
    throw SerializationError("secret key degree mismatch");
  }
  SecretKey sk;
  sk.s_coeff.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const u8 v = r.u8();
    if (v > 2) {
      throw SerializationError("secret key coefficient out of range");
    }
    sk.s_coeff[c] = static_cast<int>(v) - 1;
  }
  // Rebuild the NTT forms.
  sk.s_ntt = RnsPoly(ctx.basis_q(), ctx.q_limbs(), Domain::coeff);
  for (std::size_t i = 0; i < ctx.q_limbs(); ++i) {
    const ring::Modulus& qi = ctx.basis_q().mod(i);
    auto dst = sk.s_ntt.limb(i);
    for (std::size_t c = 0; c < n; ++c) {
      const int v = sk.s_coeff[c];
      dst[c] = v >= 0 ? static_cast<u64>(v) : qi.q - 1;
    }
  }
  sk.s_ntt.to_ntt();
  sk.s_sp_ntt.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const int v = sk.s_coeff[c];
    sk.s_sp_ntt[c] = v >= 0 ? static_cast<u64>(v) : ctx.sp().q - 1;
  }
  ctx.sp_ntt().forward(sk.s_sp_ntt.data());
  return sk;
}

void save(const PublicKey& pk, const BfvContext& ctx, std::ostream& os) {
  io::BinWriter w(os);
  write_header(w, ctx, ObjectKind::public_key);
  write_poly(w, pk.b);
  write_poly(w, pk.a);
}

PublicKey load_public_key(const BfvContext& ctx, std::istream& is) {
  io::BinReader r(is);
  read_header(r, ctx, ObjectKind::public_key);
  PublicKey pk;
  pk.b = read_poly(r, ctx);
  pk.a = read_poly(r, ctx);
  if (pk.b.limbs() != ctx.q_limbs() || pk.a.limbs() != ctx.q_limbs()) {
    throw SerializationError("public key must span all q limbs");
  }
  return pk;
}

void save(const KswitchKey& ksk, const BfvContext& ctx, std::ostream& os,
          ObjectKind kind) {
  io::BinWriter w(os);
  write_header(w, ctx, kind);
  write_ksk_body(w, ksk);
}

KswitchKey load_kswitch_key(const BfvContext& ctx, std::istream& is,
                            ObjectKind kind) {
  io::BinReader r(is);
  read_header(r, ctx, kind);
  return read_ksk_body(r, ctx);
}

void save(const GaloisKeys& gk, const BfvContext& ctx, std::ostream& os) {
  io::BinWriter w(os);
  write_header(w, ctx, ObjectKind::galois_keys);
  w.u32(static_cast<u32>(gk.keys.size()));
  for (const auto& [elt, ksk] : gk.keys) {
    w.u64(elt);
    write_ksk_body(w, ksk);
  }
}

GaloisKeys load_galois_keys(const BfvContext& ctx, std::istream& is) {
  io::BinReader r(is);
  read_header(r, ctx, ObjectKind::galois_keys);
  const u32 count = r.u32();
  if (count > 4096) {
    throw SerializationError("Galois key count out of range");
  }
  GaloisKeys gk;
  for (u32 i = 0; i < count; ++i) {
    const u64 elt = r.u64();
    if (elt % 2 == 0 || elt >= 2 * static_cast<u64>(ctx.n())) {
      throw SerializationError("Galois element out of range");
    }
    gk.keys.emplace(elt, read_ksk_body(r, ctx));
  }
  return gk;
}

} // namespace hhekit::bfv
