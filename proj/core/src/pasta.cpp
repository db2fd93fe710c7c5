// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/sym/pasta.hpp"

#include "hhekit/bfv/params.hpp"
#include "hhekit/io/binio.hpp"
#include "hhekit/ring/sampling.hpp"

namespace hhekit::sym {

namespace {

constexpr u32 kAffineRetryBound = 64;

// Checks invertibility modulo p by in-place Gaussian elimination.
bool invertible_mod(std::vector<u64> m, std::size_t t,
                    const ring::PrimeField& f) {
  for (std::size_t col = 0; col < t; ++col) {
    std::size_t pivot = col;
    while (pivot < t && m[pivot * t + col] == 0) {
      ++pivot;
    }
    if (pivot == t) {
      return false;
    }
    if (pivot != col) {
      for (std::size_t j = col; j < t; ++j) {
        std::swap(m[pivot * t + j], m[col * t + j]);
      }
    }
    const u64 inv = f.inv(m[col * t + col]);
    for (std::size_t r = col + 1; r < t; ++r) {
      const u64 factor = f.mul(m[r * t + col], inv);
      if (factor == 0) {
        continue;
      }
      for (std::size_t j = col; j < t; ++j) {
        m[r * t + j] = f.sub(m[r * t + j], f.mul(factor, m[col * t + j]));
      }
    }
  }
  return true;
}

// s_j <- s_j + s_{j-1}^2 for j >= 1, all squares taken on the input values
// (parallel application; this is the form a rotate+square+mask homomorphic
// evaluation computes).
void feistel_square(std::vector<u64>& s, const ring::PrimeField& f) {
  for (std::size_t j = s.size(); j-- > 1;) {
    s[j] = f.add(s[j], f.mul(s[j - 1], s[j - 1]));
  }
}

void cube(std::vector<u64>& s, const ring::PrimeField& f) {
  for (u64& v : s) {
    const u64 sq = f.mul(v, v);
    v = f.mul(sq, v);
  }
}

// (L, R) <- (2L + R, L + 2R)
void mix(std::vector<u64>& l, std::vector<u64>& r, const ring::PrimeField& f) {
  for (std::size_t j = 0; j < l.size(); ++j) {
    const u64 lj = l[j], rj = r[j];
    l[j] = f.add(f.add(lj, lj), rj);
    r[j] = f.add(lj, f.add(rj, rj));
  }
}

} // namespace

CipherProfile cipher_profile(std::string_view name) {
  const auto names = bfv::profile_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) {
      const bfv::ProfileSpec& spec = bfv::profile_spec(name);
      CipherProfile prof;
      prof.name = spec.name;
      prof.id = static_cast<u8>(i + 1);
      prof.t = spec.sym_t;
      prof.rounds = spec.sym_rounds;
      prof.p = spec.plain_modulus;
      if (prof.t < 2 || prof.rounds < 2 || 2 * prof.t > spec.n) {
        throw ParameterError("cipher profile violates its invariants");
      }
      return prof;
    }
  }
  throw ParameterError("unknown cipher profile: " + std::string(name));
}

CipherProfile cipher_profile_by_id(u8 id) {
  const auto names = bfv::profile_names();
  if (id == 0 || id > names.size()) {
    throw SerializationError("unknown cipher profile id " +
                             std::to_string(static_cast<int>(id)));
  }
  return cipher_profile(names[id - 1]);
}

SymKey ske_gen(const CipherProfile& prof, const ring::Xof& seed) {
  ring::Xof xof = seed.fork("hhekit/ske-gen");
  SymKey key;
  key.words = ring::sample_uniform_words(xof, 2 * prof.t, prof.p);
  return key;
}

AffineLayer gen_affine(const CipherProfile& prof, const Nonce& nonce,
                       u64 block_index, u32 round, u32 branch) {
  for (u32 retry = 0; retry < kAffineRetryBound; ++retry) {
    ring::Xof xof("PERV-AFF");
    xof.absorb_str(std::string(prof.name));
    xof.absorb(std::span<const u8>(nonce.data(), nonce.size()));
    xof.absorb_u64(block_index);
    xof.absorb_u64(round);
    xof.absorb_u64(branch);
    xof.absorb_u64(retry);

    AffineLayer a;
    a.matrix = ring::sample_uniform_words(xof, prof.t * prof.t, prof.p);
    a.constant = ring::sample_uniform_words(xof, prof.t, prof.p);
    const ring::PrimeField f(prof.p);
    if (invertible_mod(a.matrix, prof.t, f)) {
      return a;
    }
  }
  throw Error("affine layer generation exceeded its retry bound");
}

std::vector<u64> apply_affine(const CipherProfile& prof, const AffineLayer& a,
                              std::span<const u64> x) {
  const std::size_t t = prof.t;
  std::vector<u64> y(t);
  for (std::size_t r = 0; r < t; ++r) {
    u128 acc = a.constant[r];
    const u64* row = a.matrix.data() + r * t;
    for (std::size_t j = 0; j < t; ++j) {
      acc += u128(row[j]) * x[j];
    }
    y[r] = static_cast<u64>(acc % prof.p);
  }
  return y;
}

std::vector<u64> keystream(const CipherProfile& prof, const SymKey& key,
                           const Nonce& nonce, u64 block_index) {
  if (key.words.size() != 2 * prof.t) {
    throw ParameterError("symmetric key has wrong length for this profile");
  }
  const ring::PrimeField f(prof.p);
  std::vector<u64> l(key.words.begin(), key.words.begin() + prof.t);
  std::vector<u64> r(key.words.begin() + prof.t, key.words.end());

  for (int round = 1; round <= prof.rounds; ++round) {
    l = apply_affine(prof, gen_affine(prof, nonce, block_index,
                                      static_cast<u32>(round), 0), l);
    r = apply_affine(prof, gen_affine(prof, nonce, block_index,
                                      static_cast<u32>(round), 1), r);
    mix(l, r, f);
    if (round < prof.rounds) {
      feistel_square(l, f);
      feistel_square(r, f);
    } else {
      cube(l, f);
      cube(r, f);
    }
  }
  const u32 fin = static_cast<u32>(prof.rounds) + 1;
  l = apply_affine(prof, gen_affine(prof, nonce, block_index, fin, 0), l);
  r = apply_affine(prof, gen_affine(prof, nonce, block_index, fin, 1), r);
  mix(l, r, f);
  return l;
}

SymCiphertext ske_enc(const CipherProfile& prof, const SymKey& key,
                      const Nonce& nonce, std::span<const u64> x) {
  const ring::PrimeField f(prof.p);
  for (u64 v : x) {
    if (v >= prof.p) {
      throw DomainError("plaintext word is not reduced modulo p");
    }
  }
  SymCiphertext ct;
  ct.profile_id = prof.id;
  ct.nonce = nonce;
  ct.words.resize(x.size());
  for (std::size_t off = 0; off < x.size(); off += prof.t) {
    const std::size_t len = std::min(prof.t, x.size() - off);
    const std::vector<u64> z = keystream(prof, key, nonce, off / prof.t);
    for (std::size_t j = 0; j < len; ++j) {
      ct.words[off + j] = f.add(x[off + j], z[j]);
    }
  }
  return ct;
}

std::vector<u64> ske_dec(const CipherProfile& prof, const SymKey& key,
                         const SymCiphertext& ct) {
  if (ct.profile_id != prof.id) {
    throw ParameterError("ciphertext was produced under a different profile");
  }
  const ring::PrimeField f(prof.p);
  std::vector<u64> x(ct.words.size());
  for (std::size_t off = 0; off < x.size(); off += prof.t) {
    const std::size_t len = std::min(prof.t, x.size() - off);
    const std::vector<u64> z = keystream(prof, key, ct.nonce, off / prof.t);
    for (std::size_t j = 0; j < len; ++j) {
      x[off + j] = f.sub(ct.words[off + j], z[j]);
    }
  }
  return x;
}

void save(const SymCiphertext& ct, std::ostream& os) {
  io::BinWriter w(os);
  w.magic(kMagicSym);
  w.u16(kFormatVersion);
  w.u8(ct.profile_id);
  w.raw(ct.nonce.data(), ct.nonce.size());
  w.u64(ct.words.size());
  for (u64 v : ct.words) {
    w.u64(v);
  }
}

SymCiphertext load_sym_ciphertext(std::istream& is) {
  io::BinReader r(is);
  r.expect_magic(kMagicSym, "symmetric ciphertext");
  const u16 ver = r.u16();
  if (ver != kFormatVersion) {
    throw SerializationError("unsupported symmetric format version " +
                             std::to_string(ver));
  }
  SymCiphertext ct;
  ct.profile_id = r.u8();
  const CipherProfile prof = cipher_profile_by_id(ct.profile_id);
  r.raw(ct.nonce.data(), ct.nonce.size());
  const u64 count = r.u64();
  if (count > (u64(1) << 32)) {
    throw SerializationError("symmetric ciphertext word count out of range");
  }
  ct.words.resize(count);
  for (u64& v : ct.words) {
    v = r.u64();
    if (v >= prof.p) {
      throw SerializationError("symmetric ciphertext word exceeds the field");
    }
  }
  return ct;
}

} // namespace hhekit::sym
