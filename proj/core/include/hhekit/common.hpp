// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hhekit {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Serialization format version shared by all binary containers.
inline constexpr u16 kFormatVersion = 1;

/// Magic tags for the binary containers.
inline constexpr char kMagicBfv[4] = {'H', 'H', 'E', 'B'};   // BFV objects
inline constexpr char kMagicSym[4] = {'H', 'H', 'E', 'S'};   // symmetric ciphertexts
inline constexpr char kMagicKey[4] = {'H', 'H', 'E', 'K'};   // evaluation-key bundles
inline constexpr char kMagicMsg[4] = {'H', 'H', 'E', 'M'};   // signed protocol envelopes

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or mismatched parameters (ring params, profiles, sizes).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Operation applied in the wrong representation domain (e.g. NTT on an
/// NTT-domain polynomial) or against the wrong profile pairing.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Multiplicative depth allowance exhausted, or structural level mismatch
/// between operands of a binary homomorphic operation.
class DepthError : public Error {
public:
  using Error::Error;
};

/// Noise budget exhausted: decryption would be unreliable.
class NoiseError : public Error {
public:
  using Error::Error;
};

/// Malformed or incompatible serialized data (bad magic, version, hash).
class SerializationError : public Error {
public:
  using Error::Error;
};

/// Protocol-level failure: bad signature, replayed timestamp, unknown party.
class ProtocolError : public Error {
public:
  using Error::Error;
};

/// Rejected input data (CSV parse errors, NaN features, schema violations).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Counters for homomorphic operations. Deterministic for a fixed workload:
/// the library increments them in a fixed order independent of timing.
struct OpCounters {
  u64 rotations = 0;    ///< Galois rotations (including hoisted ones)
  u64 ct_ct_muls = 0;   ///< ciphertext x ciphertext multiplications
  u64 ct_pt_muls = 0;   ///< ciphertext x plaintext multiplications
  u64 relins = 0;       ///< relinearizations (also counted inside ct_ct_muls)
  u64 mod_switches = 0; ///< modulus switches (limb drops)
  u64 adds = 0;         ///< additions/subtractions of ciphertexts or plaintexts

  OpCounters& operator+=(const OpCounters& o) {
    rotations += o.rotations;
    ct_ct_muls += o.ct_ct_muls;
    ct_pt_muls += o.ct_pt_muls;
    relins += o.relins;
    mod_switches += o.mod_switches;
    adds += o.adds;
    return *this;
  }
  bool operator==(const OpCounters&) const = default;
};

} // namespace hhekit
