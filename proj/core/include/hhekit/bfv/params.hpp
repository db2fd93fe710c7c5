// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hhekit/ring/ring.hpp"

namespace hhekit::bfv {

using int512 = boost::multiprecision::int512_t;

/// Static description of a parameter profile: ring degree, ciphertext
/// modulus chain, key-switching special prime, multiplication auxiliary
/// base, plaintext modulus, depth allowance and the paired symmetric-cipher
/// shape. The depth ledger follows the transciphering circuit: the keystream
/// evaluation spends rounds-1 Feistel squares + 2 for the final cube + 1 for
/// the plaintext-multiply layers, and profiles provision that plus 2 for the
/// evaluation phase.
struct ProfileSpec {
  std::string_view name;
  std::size_t n;         ///< ring degree (power of two)
  std::size_t q_limbs;   ///< ciphertext-modulus limb count
  unsigned q_bits;       ///< bits per ciphertext limb
  unsigned sp_bits;      ///< key-switching special prime bits
  std::size_t aux_limbs; ///< multiplication auxiliary base limb count
  unsigned aux_bits;     ///< bits per auxiliary limb
  u64 plain_modulus;     ///< plaintext prime p (65537 throughout)
  int depth_budget;      ///< ct-ct multiplications provisioned per ciphertext
  std::size_t sym_t;     ///< paired stream-cipher branch width
  int sym_rounds;        ///< paired stream-cipher round count
};

/// Looks up a named profile ("paper-16384", "test-8192", "tiny-1024").
/// Throws ParameterError for unknown names.
const ProfileSpec& profile_spec(std::string_view name);

/// All known profile names, in declaration order.
std::vector<std::string_view> profile_names();

/// Immutable per-profile context: primes, NTT tables and every RNS constant
/// used by encryption, multiplication (fast base extension + scale-and-round),
/// key switching (digit decomposition with a special prime) and modulus
/// switching. Built once per profile and shared by all objects derived from
/// it; a 256-bit parameter hash binds serialized artifacts to their context.
///
/// Prefix-level convention: a ciphertext at level ell uses the first ell limbs
/// of the q basis; tables indexed by [ell] are valid for that prefix. Index 0
/// is unused padding so table[ell] corresponds to an ell-limb prefix.
class BfvContext {
public:
  static std::shared_ptr<const BfvContext> create(std::string_view profile_name);

  const ProfileSpec& spec() const { return spec_; }
  std::size_t n() const { return spec_.n; }
  u64 plain_t() const { return spec_.plain_modulus; }
  std::size_t q_limbs() const { return spec_.q_limbs; }
  std::size_t aux_limbs() const { return spec_.aux_limbs; }

  const ring::NttBasis& basis_q() const { return *basis_q_; }
  const ring::NttBasis& basis_aux() const { return *basis_aux_; }
  const ring::Modulus& sp() const { return sp_; }
  const ring::NttTables& sp_ntt() const { return sp_ntt_; }
  const ring::Modulus& t() const { return t_; }
  const ring::NttTables& t_ntt() const { return t_ntt_; }

  /// BLAKE2b-256 over (n, t, q primes, special prime, aux primes).
  const std::array<u8, 32>& params_hash() const { return params_hash_; }

  // --- exact integer views of the modulus chain ---
  /// q_prod()[ell] = product of the first ell q primes.
  const std::vector<int512>& q_prod() const { return q_prod_; }
  /// crt_compose()[ell][i] = (Q_ell/q_i) * ((Q_ell/q_i)^{-1} mod q_i) mod Q_ell.
  const std::vector<std::vector<int512>>& crt_compose() const {
    return crt_compose_;
  }

  // --- encryption scaling ---
  /// delta_q()[ell][i] = floor(Q_ell / t) mod q_i.
  const std::vector<std::vector<u64>>& delta_q() const { return delta_q_; }

  // --- fast base conversion Q_ell -> aux ---
  /// qhat_inv()[ell][i] = ((Q_ell/q_i)^{-1} mod q_i), with Shoup pair.
  const std::vector<std::vector<u64>>& qhat_inv() const { return qhat_inv_; }
  const std::vector<std::vector<u64>>& qhat_inv_shoup() const {
    return qhat_inv_shoup_;
  }
  /// qhat_mod_aux()[ell][i][j] = (Q_ell/q_i) mod aux_j.
  const std::vector<std::vector<std::vector<u64>>>& qhat_mod_aux() const {
    return qhat_mod_aux_;
  }
  /// qprod_mod_aux()[ell][j] = Q_ell mod aux_j.
  const std::vector<std::vector<u64>>& qprod_mod_aux() const {
    return qprod_mod_aux_;
  }
  /// inv_q()[i] = 1.0L / q_i (for the float correction term).
  const std::vector<long double>& inv_q() const { return inv_q_; }

  // --- scale-and-round t/Q_ell over the aux base ---
  /// qprod_inv_mod_aux()[ell][j] = Q_ell^{-1} mod aux_j.
  const std::vector<std::vector<u64>>& qprod_inv_mod_aux() const {
    return qprod_inv_mod_aux_;
  }

  // --- fast base conversion aux -> Q_ell ---
  const std::vector<u64>& auxhat_inv() const { return auxhat_inv_; }
  const std::vector<u64>& auxhat_inv_shoup() const { return auxhat_inv_shoup_; }
  /// auxhat_mod_q()[j][i] = (P/aux_j) mod q_i.
  const std::vector<std::vector<u64>>& auxhat_mod_q() const {
    return auxhat_mod_q_;
  }
  const std::vector<u64>& auxprod_mod_q() const { return auxprod_mod_q_; }
  const std::vector<long double>& inv_aux() const { return inv_aux_; }

  // --- key switching (RNS digits + special prime) ---
  /// spE_mod_q()[j][i] = (sp * E_j) mod q_i where E_j is the CRT idempotent
  /// of q_j over the full chain (E_j = delta_ij mod q_i limb-wise, so the
  /// same key material is valid at every prefix level).
  const std::vector<std::vector<u64>>& spE_mod_q() const { return spE_mod_q_; }
  const std::vector<u64>& sp_inv_mod_q() const { return sp_inv_mod_q_; }
  const std::vector<u64>& sp_inv_mod_q_shoup() const {
    return sp_inv_mod_q_shoup_;
  }

  // --- modulus switching (drop limb ell-1 from an ell-limb prefix) ---
  /// qlast_inv_mod_q()[ell][i] = q_{ell-1}^{-1} mod q_i for i < ell-1.
  const std::vector<std::vector<u64>>& qlast_inv_mod_q() const {
    return qlast_inv_mod_q_;
  }

private:
  explicit BfvContext(const ProfileSpec& spec);

  ProfileSpec spec_;
  std::shared_ptr<const ring::NttBasis> basis_q_;
  std::shared_ptr<const ring::NttBasis> basis_aux_;
  ring::Modulus sp_;
  ring::NttTables sp_ntt_;
  ring::Modulus t_;
  ring::NttTables t_ntt_;
  std::array<u8, 32> params_hash_{};

  std::vector<int512> q_prod_;
  std::vector<std::vector<int512>> crt_compose_;
  std::vector<std::vector<u64>> delta_q_;
  std::vector<std::vector<u64>> qhat_inv_, qhat_inv_shoup_;
  std::vector<std::vector<std::vector<u64>>> qhat_mod_aux_;
  std::vector<std::vector<u64>> qprod_mod_aux_;
  std::vector<long double> inv_q_;
  std::vector<std::vector<u64>> qprod_inv_mod_aux_;
  std::vector<u64> auxhat_inv_, auxhat_inv_shoup_;
  std::vector<std::vector<u64>> auxhat_mod_q_;
  std::vector<u64> auxprod_mod_q_;
  std::vector<long double> inv_aux_;
  std::vector<std::vector<u64>> spE_mod_q_;
  std::vector<u64> sp_inv_mod_q_, sp_inv_mod_q_shoup_;
  std::vector<std::vector<u64>> qlast_inv_mod_q_;
};

} // namespace hhekit::bfv
