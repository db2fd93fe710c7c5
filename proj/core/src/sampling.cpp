// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/ring/sampling.hpp"

#include <cmath>

namespace hhekit::ring {

void sample_uniform(RnsPoly& out, Xof& xof) {
  for (std::size_t l = 0; l < out.limbs(); ++l) {
    const u64 q = out.basis().mod(l).q;
    u64* a = out.limb(l).data();
    for (std::size_t i = 0; i < out.n(); ++i) a[i] = xof.uniform(q);
  }
}

void sample_ternary(RnsPoly& out, Xof& xof) {
  const std::size_t n = out.n();
  std::vector<u8> sel(n);
  for (std::size_t i = 0; i < n; ++i) sel[i] = u8(xof.uniform(3)); // 0,1,2 -> -1,0,1
  for (std::size_t l = 0; l < out.limbs(); ++l) {
    const u64 q = out.basis().mod(l).q;
    u64* a = out.limb(l).data();
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = sel[i] == 0 ? q - 1 : (sel[i] == 1 ? 0 : 1);
    }
  }
}

GaussianSampler::GaussianSampler(double sigma, unsigned bound)
    : sigma_(sigma), bound_(bound) {
  if (sigma <= 0 || bound == 0) {
    throw ParameterError("GaussianSampler: sigma and bound must be positive");
  }
  const std::size_t size = 2 * std::size_t(bound) + 1;
  std::vector<long double> weights(size);
  long double total = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const long double x = (long double)(double(i) - double(bound));
    weights[i] = expl(-(x * x) / (2.0L * sigma * sigma));
    total += weights[i];
  }
  cdf_.resize(size);
  long double acc = 0;
  const long double scale = 18446744073709551615.0L; // 2^64 - 1
  for (std::size_t i = 0; i < size; ++i) {
    acc += weights[i];
    cdf_[i] = (i + 1 == size) ? ~u64(0) : u64((acc / total) * scale);
  }
}

int GaussianSampler::draw(Xof& xof) const {
  const u64 r = xof.next_u64();
  std::size_t lo = 0, hi = cdf_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (r <= cdf_[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return int(lo) - int(bound_);
}

void GaussianSampler::sample(RnsPoly& out, Xof& xof) const {
  const std::size_t n = out.n();
  std::vector<int> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = draw(xof);
  for (std::size_t l = 0; l < out.limbs(); ++l) {
    const u64 q = out.basis().mod(l).q;
    u64* a = out.limb(l).data();
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = vals[i] >= 0 ? u64(vals[i]) : q - u64(-vals[i]);
    }
  }
}

std::vector<u64> sample_uniform_words(Xof& xof, std::size_t count, u64 bound) {
  std::vector<u64> out(count);
  for (auto& w : out) w = xof.uniform(bound);
  return out;
}

} // namespace hhekit::ring
