// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "hhekit/bfv/keys.hpp"
#include "hhekit/bfv/params.hpp"
#include "hhekit/common.hpp"
#include "hhekit/ring/xof.hpp"
#include "hhekit/sym/pasta.hpp"

namespace hhekit::hhe {

/// Public evaluation material handed to the evaluating party: one
/// relinearization key plus Galois keys for every rotation the
/// transciphering and inference pipelines perform. Holds no secret material;
/// the serialized form is safe to publish.
struct EvaluationKey {
  bfv::RelinKey relin;
  bfv::GaloisKeys galois;
};

/// The rotation steps `hhe_keygen` provisions for a profile: baby and giant
/// steps of the diagonal method at period 2t, the stream-cipher shift and
/// output-packing steps -1..-7, the key-expansion doubling shifts, and the
/// halving folds used by slot-sum reductions over one 2t window. The row
/// swap is provisioned separately via `make_galois_keys`' row_swap flag.
std::vector<long> rotation_steps(const bfv::BfvContext& ctx,
                                 const sym::CipherProfile& prof);

/// One keyholder's complete key set for a named profile: the lattice
/// context, the paired stream-cipher profile, and the (secret, public,
/// evaluation) key triple, all derived deterministically from one seed.
struct HheKeyBundle {
  std::shared_ptr<const bfv::BfvContext> ctx;
  sym::CipherProfile cipher;
  bfv::SecretKey sk;
  bfv::PublicKey pk;
  EvaluationKey evk;
};

/// Generates a full key bundle for a profile name ("paper-16384",
/// "test-8192", "tiny-1024"). Throws ParameterError for unknown names.
HheKeyBundle hhe_keygen(std::string_view profile_name, const ring::Xof& seed);

/// Container format: magic "HHEK", version, parameter hash, cipher profile
/// id, then the relinearization key and the Galois keys in their own
/// framing. Loading under a different context throws SerializationError.
void save(const EvaluationKey& evk, const bfv::BfvContext& ctx,
          std::ostream& os);
EvaluationKey load_evaluation_key(const bfv::BfvContext& ctx,
                                  std::istream& is);

} // namespace hhekit::hhe
