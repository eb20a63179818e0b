// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

namespace dexgrasp::rere {

struct AudioSignal {
  int sample_rate = 16000;  // Hz
  std::vector<double> samples;  // in [-1, 1]

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

  void validate() const {
    if (sample_rate <= 0) throw ValidationError("sample_rate must be positive");
    for (double s : samples)
      if (!std::isfinite(s)) throw ValidationError("audio samples must be finite");
  }
};

struct Transcript {
  std::string text;
  double confidence = 1.0;
};

/// The five description dimensions, in the order prompts are issued.
enum class Dimension { Category, Color, Shape, Material, Position };

inline constexpr std::array<Dimension, 5> kDimensions{Dimension::Category, Dimension::Color, Dimension::Shape,
                                                      Dimension::Material, Dimension::Position};

inline std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::Category: return "category";
    case Dimension::Color: return "color";
    case Dimension::Shape: return "shape";
    case Dimension::Material: return "material";
    case Dimension::Position: return "position";
  }
  return "";
}

struct VisualFeatureSet {
  std::string category;
  std::string color;
  std::string shape;
  std::string material;
  std::string position;
  std::vector<std::string> context_cues;

  std::string& field(Dimension d) {
    switch (d) {
      case Dimension::Category: return category;
      case Dimension::Color: return color;
      case Dimension::Shape: return shape;
      case Dimension::Material: return material;
      case Dimension::Position: return position;
    }
    return category;
  }
  const std::string& field(Dimension d) const { return const_cast<VisualFeatureSet*>(this)->field(d); }

  bool operator==(const VisualFeatureSet&) const = default;
};

/// Weights of the color/category (C), shape (S), material (M) and position (P)
/// terms. C gates both the category noun and its color.
struct EnrichmentWeights {
  double c = 1.0;
  double s = 1.0;
  double m = 1.0;
  double p = 1.0;

  void validate() const {
    for (double w : {c, s, m, p})
      if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("enrichment weights must be finite and >= 0");
  }
};

struct EnrichedExpression {
  std::string text;
  Transcript source;
  VisualFeatureSet features;
  std::vector<std::string> included;  // weight groups used, by descending weight
  double alignment = 0.0;
};

/// Lowercase, whitespace collapsed, surrounding punctuation removed.
inline std::string normalize_token(const std::string& in) {
  std::string out;
  bool space = false;
  for (unsigned char ch : in) {
    if (std::isspace(ch)) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(ch)));
  }
  auto punct = [](char c) { return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '"'; };
  while (!out.empty() && punct(out.back())) out.pop_back();
  std::size_t b = 0;
  while (b < out.size() && punct(out[b])) ++b;
  return out.substr(b);
}

inline Json to_json(const VisualFeatureSet& f) {
  Json j;
  for (Dimension d : kDimensions) j[to_string(d)] = f.field(d);
  j["context_cues"] = f.context_cues;
  return j;
}

}  // namespace dexgrasp::rere
