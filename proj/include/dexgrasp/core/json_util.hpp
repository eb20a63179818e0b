// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace dexgrasp {

using Json = nlohmann::json;

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

inline Json load_json(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; convert to a line number
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size() && i < e.byte; ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(line, path.string() + ": " + e.what());
  }
}

/// Required field of a JSON object, converted to T.
template <class T>
T require(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw MissingField(key);
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError("field '" + key + "' has the wrong type");
  }
}

template <class T>
T optional(const Json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError("field '" + key + "' has the wrong type");
  }
}

}  // namespace dexgrasp
