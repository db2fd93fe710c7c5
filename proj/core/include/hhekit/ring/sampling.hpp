// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hhekit/ring/ring.hpp"
#include "hhekit/ring/xof.hpp"

namespace hhekit::ring {

/// Samples every coefficient of every limb independently and uniformly modulo
/// that limb's prime; by CRT the result is uniform over the full RNS modulus.
void sample_uniform(RnsPoly& out, Xof& xof);

/// Samples coefficients uniformly from {-1, 0, 1}; the same signed value is
/// encoded consistently across all limbs.
void sample_ternary(RnsPoly& out, Xof& xof);

/// Tabulated bounded discrete Gaussian over the integers.
///
/// The cumulative table is built once from exp(-x^2 / 2*sigma^2) restricted to
/// [-bound, bound] and renormalized, so the bound holds by construction;
/// sampling is an exact 64-bit inverse-CDF lookup.
class GaussianSampler {
public:
  GaussianSampler(double sigma, unsigned bound);

  double sigma() const { return sigma_; }
  unsigned bound() const { return bound_; }

  /// One signed draw in [-bound, bound].
  int draw(Xof& xof) const;

  /// Fills a polynomial; the same signed value is encoded across all limbs.
  void sample(RnsPoly& out, Xof& xof) const;

private:
  double sigma_;
  unsigned bound_;
  std::vector<u64> cdf_; // cdf_[i] = P(value <= i - bound) scaled to 2^64
};

/// `count` exactly-uniform field words modulo `bound` (e.g. plaintext words
/// mod p for the symmetric cipher).
std::vector<u64> sample_uniform_words(Xof& xof, std::size_t count, u64 bound);

} // namespace hhekit::ring
