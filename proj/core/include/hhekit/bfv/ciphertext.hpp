// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hhekit/bfv/params.hpp"

namespace hhekit::bfv {

/// A BFV ciphertext: two (three, transiently, before relinearization)
/// polynomial components over a prefix of the q basis, kept in NTT domain
/// between operations. Carries the remaining multiplicative-depth allowance;
/// depth-consuming operations decrement it and refuse to run it below zero.
class Ciphertext {
public:
  Ciphertext() = default;
  Ciphertext(std::vector<ring::RnsPoly> comps, int depth_budget)
      : comps_(std::move(comps)), depth_budget_(depth_budget) {}

  std::size_t size() const { return comps_.size(); }
  std::size_t limbs() const { return comps_.empty() ? 0 : comps_[0].limbs(); }

  ring::RnsPoly& comp(std::size_t i) { return comps_[i]; }
  const ring::RnsPoly& comp(std::size_t i) const { return comps_[i]; }
  std::vector<ring::RnsPoly>& comps() { return comps_; }
  const std::vector<ring::RnsPoly>& comps() const { return comps_; }

  int depth_budget() const { return depth_budget_; }
  void set_depth_budget(int v) { depth_budget_ = v; }

private:
  std::vector<ring::RnsPoly> comps_;
  int depth_budget_ = 0;
};

} // namespace hhekit::bfv
