// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include "doctest.h"
#include "hhekit/ring/modmath.hpp"
#include "hhekit/ring/ntt.hpp"
#include "hhekit/ring/ring.hpp"
#include "hhekit/ring/sampling.hpp"
#include "hhekit/ring/xof.hpp"
#include "oracles.hpp"

using namespace hhekit;
using namespace hhekit::ring;

namespace {

// Critical values of the chi-square distribution at alpha = 0.001.
constexpr double kChi2Crit15 = 37.697; // 15 degrees of freedom
constexpr double kChi2Crit2 = 13.816;  // 2 degrees of freedom

RnsPoly random_poly(const NttBasis& basis, Xof& xof, std::size_t limbs) {
  RnsPoly p(basis, limbs, Domain::coeff);
  sample_uniform(p, xof);
  return p;
}

} // namespace

TEST_CASE("Barrett reduction agrees with 128-bit division") {
  Xof xof("test-barrett");
  for (u64 q : {3ull, 65537ull, (1ull << 30) + 3, 1152921504606830593ull}) {
    Modulus m(q);
    for (int i = 0; i < 2000; ++i) {
      const u64 a = xof.next_u64();
      const u64 b = xof.next_u64();
      const u128 x = u128(a) * b;
      CHECK(reduce128(x, m) == u64(x % q));
    }
    CHECK(reduce128(0, m) == 0);
    CHECK(reduce128(u128(q) * q - 1, m) == u64((u128(q) * q - 1) % q));
  }
}

TEST_CASE("Shoup multiplication agrees with plain modular multiplication") {
  Xof xof("test-shoup");
  Modulus m(1152921504606830593ull); // 60-bit NTT prime
  for (int i = 0; i < 2000; ++i) {
    const u64 w = xof.uniform(m.q);
    const u64 ws = shoup_precompute(w, m);
    const u64 x = xof.uniform(m.q);
    CHECK(mul_mod_shoup(x, w, ws, m) == mul_mod(x, w, m));
  }
}

TEST_CASE("pow_mod and inv_mod satisfy field identities") {
  Modulus p(65537);
  PrimeField f(65537);
  Xof xof("test-field");
  for (int i = 0; i < 500; ++i) {
    const u64 a = 1 + xof.uniform(65536);
    const u64 inv = f.inv(a);
    CHECK(f.mul(a, inv) == 1);
    CHECK(inv == pow_mod(a, 65535, p)); // Fermat: a^(p-2)
  }
  CHECK(f.pow(3, 65536) == 1); // group order
  CHECK_THROWS_AS(f.inv(0), ParameterError);
  // Non-invertible element under a composite modulus.
  Modulus composite(15);
  CHECK_THROWS_AS(inv_mod(5, composite), ParameterError);
  CHECK(inv_mod(7, composite) == 13);
}

TEST_CASE("is_prime matches a sieve for small values") {
  std::vector<bool> sieve(2000, true);
  sieve[0] = sieve[1] = false;
  for (std::size_t i = 2; i < sieve.size(); ++i) {
    if (!sieve[i]) continue;
    for (std::size_t j = 2 * i; j < sieve.size(); j += i) sieve[j] = false;
  }
  for (u64 v = 0; v < 2000; ++v) CHECK(is_prime(v) == sieve[std::size_t(v)]);
  CHECK(is_prime(65537));
  CHECK(is_prime(1152921504606830593ull));
  CHECK_FALSE(is_prime(1152921504606830593ull - 2));
}

TEST_CASE("find_ntt_primes returns distinct NTT-friendly primes deterministically") {
  const u64 two_n = 32768;
  const auto primes = find_ntt_primes(60, two_n, 8);
  CHECK(primes.size() == 8);
  std::set<u64> seen;
  u64 prev = ~u64(0);
  for (u64 p : primes) {
    CHECK(is_prime(p));
    CHECK(p % two_n == 1);
    CHECK(p < (u64(1) << 60));
    CHECK(p < prev); // descending search
    prev = p;
    seen.insert(p);
  }
  CHECK(seen.size() == 8);
  CHECK(find_ntt_primes(60, two_n, 8) == primes);
  // skip: suffix property
  const auto tail = find_ntt_primes(60, two_n, 3, 5);
  CHECK(std::equal(tail.begin(), tail.end(), primes.begin() + 5));
}

TEST_CASE("NTT forward evaluates at psi^(2*bitrev(j)+1)") {
  // Pins the evaluation-order convention that the batching encoder and the
  // Galois permutation tables rely on.
  for (std::size_t n : {8ull, 16ull}) {
    Modulus m(65537);
    NttTables tables(m, n);
    Xof xof("test-ntt-order");
    std::vector<u64> a(n);
    for (auto& v : a) v = xof.uniform(m.q);
    std::vector<u64> transformed = a;
    tables.forward(transformed.data());
    for (std::size_t j = 0; j < n; ++j) {
      const u64 e = 2 * bit_reverse(u64(j), tables.log_n()) + 1;
      const u64 point = oracle::pow_mod(tables.psi(), e, m.q);
      CHECK(transformed[j] == oracle::poly_eval(a, point, m.q));
    }
  }
}

TEST_CASE("NTT round-trips and matches schoolbook negacyclic convolution") {
  Xof xof("test-ntt-conv");
  for (u64 q : {65537ull, 786433ull}) {
    for (std::size_t n : {8ull, 32ull, 64ull}) {
      if ((q - 1) % (2 * n) != 0) continue;
      Modulus m(q);
      NttTables tables(m, n);
      std::vector<u64> a(n), b(n);
      for (auto& v : a) v = xof.uniform(q);
      for (auto& v : b) v = xof.uniform(q);

      std::vector<u64> fa = a;
      tables.forward(fa.data());
      std::vector<u64> roundtrip = fa;
      tables.inverse(roundtrip.data());
      CHECK(roundtrip == a);

      std::vector<u64> fb = b;
      tables.forward(fb.data());
      std::vector<u64> prod(n);
      for (std::size_t i = 0; i < n; ++i) prod[i] = mul_mod(fa[i], fb[i], m);
      tables.inverse(prod.data());
      CHECK(prod == oracle::negacyclic_mul(a, b, q));
    }
  }
}

TEST_CASE("poly_mul over an RNS basis matches the schoolbook oracle per limb") {
  const std::size_t n = 32;
  const auto primes = find_ntt_primes(30, 2 * n, 3);
  NttBasis basis(n, primes);
  Xof xof("test-poly-mul");
  RnsPoly a = random_poly(basis, xof, 3);
  RnsPoly b = random_poly(basis, xof, 3);
  const RnsPoly c = poly_mul(a, b);
  for (std::size_t l = 0; l < 3; ++l) {
    const std::vector<u64> al(a.limb(l).begin(), a.limb(l).end());
    const std::vector<u64> bl(b.limb(l).begin(), b.limb(l).end());
    const auto expect = oracle::negacyclic_mul(al, bl, primes[l]);
    const std::vector<u64> got(c.limb(l).begin(), c.limb(l).end());
    CHECK(got == expect);
  }
}

TEST_CASE("RnsPoly guards domains, levels and bases") {
  const std::size_t n = 16;
  const auto primes = find_ntt_primes(30, 2 * n, 3);
  NttBasis basis(n, primes);
  NttBasis other(n, find_ntt_primes(29, 2 * n, 2));
  Xof xof("test-poly-guards");
  RnsPoly a = random_poly(basis, xof, 3);
  RnsPoly b = random_poly(basis, xof, 2);
  RnsPoly c = random_poly(other, xof, 2);

  CHECK_THROWS_AS(a.add_inplace(b), DepthError);         // level mismatch
  CHECK_THROWS_AS(b.add_inplace(c), ParameterError);     // basis mismatch
  CHECK_THROWS_AS(a.mul_pointwise_inplace(a), DomainError); // coeff-domain product
  RnsPoly d = a;
  d.to_ntt();
  CHECK_THROWS_AS(d.to_ntt(), DomainError);
  RnsPoly e = a;
  CHECK_THROWS_AS(e.to_coeff(), DomainError);
  RnsPoly f = a;
  CHECK_THROWS_AS(f.add_inplace(d), DomainError); // mixed domains

  // add/sub/neg identities
  RnsPoly g = a;
  g.add_inplace(a).sub_inplace(a);
  CHECK(g.data() == a.data());
  RnsPoly h = a;
  h.negate_inplace().negate_inplace();
  CHECK(h.data() == a.data());
}

TEST_CASE("Coefficient-domain automorphism matches the substitution oracle") {
  const std::size_t n = 8;
  Modulus m(65537);
  NttBasis basis(n, {65537});
  Xof xof("test-galois-coeff");
  for (u64 elt : {3ull, 5ull, 9ull, 15ull}) {
    RnsPoly a(basis, 1, Domain::coeff);
    sample_uniform(a, xof);
    RnsPoly out;
    apply_automorphism_coeff(a, elt, out);
    const std::vector<u64> av(a.limb(0).begin(), a.limb(0).end());
    const auto expect = oracle::substitute_power(av, elt, m.q);
    const std::vector<u64> got(out.limb(0).begin(), out.limb(0).end());
    CHECK(got == expect);
  }
}

TEST_CASE("NTT-domain automorphism permutation agrees with coefficient path") {
  for (std::size_t n : {16ull, 512ull}) {
    const auto primes = find_ntt_primes(30, 2 * n, 2);
    NttBasis basis(n, primes);
    Xof xof("test-galois-ntt");
    for (u64 elt : {u64(3), u64(2 * n - 1), u64(7)}) {
      RnsPoly a(basis, 2, Domain::coeff);
      sample_uniform(a, xof);
      RnsPoly via_coeff;
      apply_automorphism_coeff(a, elt, via_coeff);
      via_coeff.to_ntt();

      RnsPoly a_ntt = a;
      a_ntt.to_ntt();
      const auto perm =
          make_ntt_automorphism_perm(n, basis.ntt(0).log_n(), elt);
      RnsPoly via_ntt(basis, 2, Domain::ntt);
      for (std::size_t l = 0; l < 2; ++l) {
        auto dst = via_ntt.limb(l);
        const auto src = a_ntt.limb(l);
        for (std::size_t j = 0; j < n; ++j) dst[j] = src[perm[j]];
      }
      CHECK(via_ntt.data() == via_coeff.data());
    }
  }
}

TEST_CASE("Xof streams are deterministic, domain-separated and forkable") {
  Xof a("tag-one");
  Xof b("tag-one");
  Xof c("tag-two");
  std::vector<u8> out_a(64), out_b(64), out_c(64);
  a.squeeze(out_a);
  b.squeeze(out_b);
  c.squeeze(out_c);
  CHECK(out_a == out_b);
  CHECK(out_a != out_c);

  Xof parent("parent");
  parent.absorb_u64(42);
  Xof f1 = parent.fork("child-1");
  Xof f2 = parent.fork("child-2");
  CHECK(f1.next_u64() != f2.next_u64());
  // Forking twice with the same tag replays.
  Xof f1b = parent.fork("child-1");
  Xof f1c = parent.fork("child-1");
  CHECK(f1b.next_u64() == f1c.next_u64());

  Xof d("absorb-after-squeeze");
  (void)d.next_u64();
  CHECK_THROWS_AS(d.absorb_u64(1), DomainError);

  // Absorbed values change the stream.
  Xof e1("seeded");
  e1.absorb_u64(1);
  Xof e2("seeded");
  e2.absorb_u64(2);
  CHECK(e1.next_u64() != e2.next_u64());
}

TEST_CASE("uniform() is exactly bounded and statistically uniform mod 65537") {
  Xof xof("test-uniform-65537");
  const u64 p = 65537;
  std::vector<u64> buckets(16, 0);
  bool saw_top = false;
  for (int i = 0; i < 100000; ++i) {
    const u64 v = xof.uniform(p);
    REQUIRE(v < p);
    saw_top = saw_top || v == 65536;
    buckets[std::size_t((u128(v) * 16) / p)]++;
  }
  // The value 65536 must be reachable (16-bit draws could never produce it).
  CHECK(saw_top);
  CHECK(oracle::chi_square_uniform(buckets) < kChi2Crit15);
}

TEST_CASE("sample_uniform: low bits of limb coefficients pass chi-square") {
  const std::size_t n = 4096;
  const auto primes = find_ntt_primes(55, 2 * n, 2);
  NttBasis basis(n, primes);
  RnsPoly poly(basis, 2, Domain::coeff);
  Xof xof("test-sample-uniform");
  sample_uniform(poly, xof);
  for (std::size_t l = 0; l < 2; ++l) {
    std::vector<u64> buckets(16, 0);
    for (u64 v : poly.limb(l)) {
      REQUIRE(v < primes[l]);
      buckets[std::size_t(v & 15)]++;
    }
    CHECK(oracle::chi_square_uniform(buckets) < kChi2Crit15);
  }
  // Determinism under the same tag.
  RnsPoly poly2(basis, 2, Domain::coeff);
  Xof xof2("test-sample-uniform");
  sample_uniform(poly2, xof2);
  CHECK(poly.data() == poly2.data());
}

TEST_CASE("sample_ternary draws from {-1,0,1} with balanced frequencies") {
  const std::size_t n = 8192;
  const auto primes = find_ntt_primes(55, 2 * n, 2);
  NttBasis basis(n, primes);
  RnsPoly poly(basis, 2, Domain::coeff);
  Xof xof("test-sample-ternary");
  sample_ternary(poly, xof);
  std::vector<u64> counts(3, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 v0 = poly.limb(0)[i];
    const u64 v1 = poly.limb(1)[i];
    // Consistent encoding across limbs.
    if (v0 == 0) {
      CHECK(v1 == 0);
      counts[0]++;
    } else if (v0 == 1) {
      CHECK(v1 == 1);
      counts[1]++;
    } else {
      CHECK(v0 == primes[0] - 1);
      CHECK(v1 == primes[1] - 1);
      counts[2]++;
    }
  }
  CHECK(oracle::chi_square_uniform(counts) < kChi2Crit2);
}

TEST_CASE("GaussianSampler enforces its bound and roughly matches sigma") {
  GaussianSampler sampler(3.2, 20);
  Xof xof("test-gaussian");
  double sum = 0, sum_sq = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const int v = sampler.draw(xof);
    REQUIRE(v >= -20);
    REQUIRE(v <= 20);
    sum += v;
    sum_sq += double(v) * v;
  }
  const double mean = sum / trials;
  const double var = sum_sq / trials - mean * mean;
  CHECK(std::abs(mean) < 0.1);
  CHECK(var > 0.8 * 3.2 * 3.2);
  CHECK(var < 1.2 * 3.2 * 3.2);
}

TEST_CASE("RingParams rejects bad configurations and hashes canonically") {
  const std::size_t n = 16;
  const auto primes = find_ntt_primes(30, 2 * n, 2);
  RingParams params(n, primes, 65537);
  RingParams same(n, primes, 65537);
  CHECK(params.params_hash() == same.params_hash());
  RingParams other(n, {primes[0]}, 65537);
  CHECK(params.params_hash() != other.params_hash());
  CHECK_THROWS_AS(RingParams(n, {65537ull}, 65537), ParameterError);
  CHECK_THROWS_AS(RingParams(n, {97ull}, 65537), ParameterError);
}
