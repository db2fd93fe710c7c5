// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hhekit/ml/model.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace hhekit::ml {

namespace {

using nlohmann::json;

i64 require_int(const json& v, const char* key) {
  if (!v.is_number_integer()) {
    throw ValidationError(std::string("model field '") + key +
                          "' must be an integer");
  }
  return v.get<i64>();
}

} // namespace

void IntegerFcModel::validate() const {
  if (in_dim == 0 || out_dim == 0) {
    throw ValidationError("model dimensions must be positive");
  }
  if (weights.size() != in_dim * out_dim) {
    throw ValidationError("model weight count does not match out_dim x in_dim");
  }
  if (bias.size() != out_dim) {
    throw ValidationError("model bias count does not match out_dim");
  }
}

u64 worst_case_score(const IntegerFcModel& model, u64 x_max) {
  model.validate();
  u64 worst = 0;
  for (std::size_t r = 0; r < model.out_dim; ++r) {
    u64 row = 0;
    for (std::size_t k = 0; k < model.in_dim; ++k) {
      const i64 w = model.weights[r * model.in_dim + k];
      row += static_cast<u64>(w < 0 ? -w : w) * x_max;
    }
    const i64 b = model.bias[r];
    row += static_cast<u64>(b < 0 ? -b : b);
    worst = std::max(worst, row);
  }
  return worst;
}

bool fits_without_wrap(const IntegerFcModel& model, u64 p, u64 x_max) {
  return worst_case_score(model, x_max) < p / 2;
}

IntegerFcModel load_model_json(std::istream& is) {
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("model file must contain a JSON object");
  }
  static const char* const kKeys[] = {"out_dim", "in_dim", "weights", "bias",
                                      "scale_note"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    bool known = false;
    for (const char* k : kKeys) {
      known = known || key == k;
    }
    if (!known) {
      throw ValidationError("model file has an unknown key '" + key + "'");
    }
  }
  for (const char* k : kKeys) {
    if (!doc.contains(k)) {
      throw ValidationError(std::string("model file is missing the key '") + k +
                            "'");
    }
  }

  IntegerFcModel model;
  const i64 out_dim = require_int(doc["out_dim"], "out_dim");
  const i64 in_dim = require_int(doc["in_dim"], "in_dim");
  if (out_dim <= 0 || in_dim <= 0) {
    throw ValidationError("model dimensions must be positive");
  }
  model.out_dim = static_cast<std::size_t>(out_dim);
  model.in_dim = static_cast<std::size_t>(in_dim);
  if (!doc["scale_note"].is_string()) {
    throw ValidationError("model field 'scale_note' must be a string");
  }
  model.scale_note = doc["scale_note"].get<std::string>();

  const json& rows = doc["weights"];
  if (!rows.is_array() || rows.size() != model.out_dim) {
    throw ValidationError("model field 'weights' must be an array of out_dim rows");
  }
  model.weights.reserve(model.in_dim * model.out_dim);
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != model.in_dim) {
      throw ValidationError("every model weight row must have in_dim entries");
    }
    for (const json& v : row) {
      model.weights.push_back(require_int(v, "weights"));
    }
  }
  const json& bias = doc["bias"];
  if (!bias.is_array() || bias.size() != model.out_dim) {
    throw ValidationError("model field 'bias' must be an array of out_dim entries");
  }
  for (const json& v : bias) {
    model.bias.push_back(require_int(v, "bias"));
  }
  model.validate();
  return model;
}

IntegerFcModel load_model_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open model file '" + path + "'");
  }
  return load_model_json(is);
}

void save_model_json(const IntegerFcModel& model, std::ostream& os) {
  model.validate();
  json rows = json::array();
  for (std::size_t r = 0; r < model.out_dim; ++r) {
    json row = json::array();
    for (std::size_t k = 0; k < model.in_dim; ++k) {
      row.push_back(model.weights[r * model.in_dim + k]);
    }
    rows.push_back(std::move(row));
  }
  const json doc = {{"out_dim", model.out_dim},
                    {"in_dim", model.in_dim},
                    {"weights", std::move(rows)},
                    {"bias", model.bias},
                    {"scale_note", model.scale_note}};
  os << doc.dump(2) << "\n";
}

} // namespace hhekit::ml
