// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

#include "hhekit/ring/ntt.hpp"

namespace hhekit::ring {

/// Representation domain of a polynomial.
enum class Domain : u8 { coeff = 0, ntt = 1 };

/// An ordered RNS prime basis over a fixed ring degree, with one NTT table
/// per limb. Shared (by pointer) between all polynomials of a context.
class NttBasis {
public:
  NttBasis(std::size_t n, const std::vector<u64>& primes);

  std::size_t n() const { return n_; }
  std::size_t size() const { return mods_.size(); }
  const Modulus& mod(std::size_t l) const { return mods_[l]; }
  const NttTables& ntt(std::size_t l) const { return ntt_[l]; }
  const std::vector<Modulus>& mods() const { return mods_; }

private:
  std::size_t n_;
  std::vector<Modulus> mods_;
  std::vector<NttTables> ntt_;
};

/// A polynomial in Z[X]/(X^n + 1) held in RNS form over the first `limbs()`
/// primes of a basis, tagged with its representation domain. Operations check
/// basis identity, limb counts and domains, throwing ParameterError /
/// DepthError / DomainError respectively on misuse.
class RnsPoly {
public:
  RnsPoly() = default;
  RnsPoly(const NttBasis& basis, std::size_t limbs, Domain domain);

  const NttBasis& basis() const { return *basis_; }
  bool has_basis() const { return basis_ != nullptr; }
  std::size_t n() const { return basis_->n(); }
  std::size_t limbs() const { return limbs_; }
  Domain domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = d; } // caller asserts representation

  std::span<u64> limb(std::size_t l) { return {data_.data() + l * n(), n()}; }
  std::span<const u64> limb(std::size_t l) const {
    return {data_.data() + l * n(), n()};
  }
  std::vector<u64>& data() { return data_; }
  const std::vector<u64>& data() const { return data_; }

  void set_zero();

  /// Converts to NTT domain in place; throws DomainError if already there.
  void to_ntt();
  /// Converts to coefficient domain in place; throws DomainError if already there.
  void to_coeff();

  RnsPoly& add_inplace(const RnsPoly& o);
  RnsPoly& sub_inplace(const RnsPoly& o);
  RnsPoly& negate_inplace();
  /// Pointwise product; both operands must be in NTT domain.
  RnsPoly& mul_pointwise_inplace(const RnsPoly& o);
  /// Multiplies limb l by scalar[l] (any domain).
  RnsPoly& mul_scalar_inplace(std::span<const u64> scalar_per_limb);

  /// Drops the last limb's storage (used by modulus switching; the arithmetic
  /// correction is done by the caller before dropping).
  void drop_last_limb();

private:
  void check_compatible(const RnsPoly& o) const;

  const NttBasis* basis_ = nullptr;
  std::size_t limbs_ = 0;
  Domain domain_ = Domain::coeff;
  std::vector<u64> data_;
};

/// Negacyclic product c = a * b in Z_q[X]/(X^n + 1). Operands must be in
/// coefficient domain over the same basis; the result is in coefficient
/// domain. (Convenience wrapper for tests and key generation; bulk evaluator
/// code works directly in the NTT domain.)
RnsPoly poly_mul(const RnsPoly& a, const RnsPoly& b);

/// Applies the Galois automorphism X -> X^elt to a coefficient-domain
/// polynomial (elt odd, 0 < elt < 2n). Output holds the permuted/negated
/// coefficients.
void apply_automorphism_coeff(const RnsPoly& in, u64 elt, RnsPoly& out);

/// Builds the NTT-domain permutation for X -> X^elt under this library's
/// evaluation order (forward(a)[j] = a(ψ^(2·bitrev(j)+1))): output[j] =
/// input[perm[j]].
std::vector<u32> make_ntt_automorphism_perm(std::size_t n, unsigned log_n, u64 elt);

/// Fixed ring parameters: degree, ciphertext limb basis and plaintext
/// modulus, with NTT tables for both.
class RingParams {
public:
  RingParams(std::size_t n, const std::vector<u64>& q_primes, u64 t);

  std::size_t n() const { return q_basis_.n(); }
  const NttBasis& q_basis() const { return q_basis_; }
  const Modulus& t() const { return t_; }
  const NttTables& t_ntt() const { return t_ntt_; }

  /// BLAKE2b-256 over the canonical parameter encoding (n, t, limb primes);
  /// embedded in serialized objects to reject cross-parameter loads.
  std::array<u8, 32> params_hash() const;

private:
  NttBasis q_basis_;
  Modulus t_;
  NttTables t_ntt_;
};

} // namespace hhekit::ring
