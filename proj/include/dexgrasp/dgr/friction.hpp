// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <string>

namespace dexgrasp::dgr {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Material class -> friction coefficient.
struct FrictionTable {
  std::map<std::string, double> entries;
  double default_mu = 0.35;

  double mu(const std::string& material) const {
    auto it = entries.find(material);
    return it == entries.end() ? default_mu : it->second;
  }

  /// Maps a free-form material answer onto a table key: exact match, else the
  /// longest key contained in the answer (alphabetical on equal length), else
  /// "default".
  std::string match(const std::string& answer) const {
    const std::string a = lowercase(answer);
    if (entries.count(a)) return a;
    std::string best;
    for (const auto& [key, _] : entries)
      if (a.find(key) != std::string::npos && key.size() > best.size()) best = key;
    return best.empty() ? "default" : best;
  }

  void validate() const {
    auto check = [](const std::string& k, double v) {
      if (!(v > 0.0 && v <= 2.0)) throw ValidationError("friction '" + k + "' must be in (0, 2]");
    };
    for (const auto& [k, v] : entries) check(k, v);
    check("default", default_mu);
  }

  static FrictionTable from_json(const Json& j) {
    FrictionTable t;
    const Json e = require<Json>(j, "entries");
    if (!e.is_object()) throw ValidationError("entries: expected an object");
    for (const auto& [k, v] : e.items()) {
      if (!v.is_number()) throw ValidationError("entries." + k + ": expected a number");
      t.entries[lowercase(k)] = v.get<double>();
    }
    t.default_mu = require<double>(j, "default");
    t.validate();
    return t;
  }
  static FrictionTable load(const std::filesystem::path& p) { return from_json(load_json(p)); }

  /// The shipped defaults (configuration values, not measurements).
  static FrictionTable defaults() {
    FrictionTable t;
    t.entries = {{"rubber", 0.8}, {"wood", 0.45}, {"metal", 0.3}, {"glass", 0.25}, {"plastic", 0.35}, {"cardboard", 0.5}};
    t.default_mu = 0.35;
    return t;
  }
};

}  // namespace dexgrasp::dgr
