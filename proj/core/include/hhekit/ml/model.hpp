// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "hhekit/common.hpp"

namespace hhekit::ml {

/// A one-layer integer fully-connected model: scores = W x + b with signed
/// integer weights, evaluated over quantized features. Row-major weights,
/// out_dim x in_dim.
struct IntegerFcModel {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<i64> weights; ///< out_dim * in_dim, row-major
  std::vector<i64> bias;    ///< out_dim
  std::string scale_note;   ///< provenance of the integer scaling (free text)

  /// Throws ValidationError when the dimensions and coefficient counts
  /// disagree or a dimension is zero.
  void validate() const;
};

/// The largest |score| the model can produce over features in [0, x_max],
/// maximized per row: max_r (sum_k |w[r,k]| * x_max + |b[r]|). Computed from
/// the actual coefficients, not a type bound.
u64 worst_case_score(const IntegerFcModel& model, u64 x_max = 15);

/// True when every reachable score stays inside (-p/2, p/2], i.e. encrypted
/// evaluation modulo p cannot wrap and signed-lifted results equal exact
/// integer arithmetic.
bool fits_without_wrap(const IntegerFcModel& model, u64 p, u64 x_max = 15);

/// Strict-schema JSON model files: an object with exactly the keys out_dim,
/// in_dim, weights (array of out_dim rows of in_dim integers), bias (array
/// of out_dim integers) and scale_note (string). Unknown keys, wrong types
/// and inconsistent shapes raise ValidationError naming the offending key.
IntegerFcModel load_model_json(std::istream& is);
IntegerFcModel load_model_file(const std::string& path);
void save_model_json(const IntegerFcModel& model, std::ostream& os);

} // namespace hhekit::ml
