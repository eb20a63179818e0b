// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/rere/audio.hpp"
#include "dexgrasp/rere/providers.hpp"
#include "dexgrasp/rere/types.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace dexgrasp::rere {

/// Prompt texts; "{transcript}" is replaced by the user's words.
struct PromptTemplate {
  std::string alignment;
  std::map<Dimension, std::string> dimensions;

  static PromptTemplate from_json(const Json& j) {
    PromptTemplate t;
    t.alignment = require<std::string>(j, "alignment");
    const Json d = require<Json>(j, "dimensions");
    for (Dimension dim : kDimensions) t.dimensions[dim] = require<std::string>(d, to_string(dim));
    return t;
  }

  static PromptTemplate load(const std::filesystem::path& p) { return from_json(load_json(p)); }

  static std::string fill(std::string text, const std::string& transcript) {
    const std::string key = "{transcript}";
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + transcript.size()))
      text.replace(pos, key.size(), transcript);
    return text;
  }
};

/// Provider text verbatim. Throws EmptyTranscript for an empty segment or an
/// empty answer.
inline Transcript transcribe(const AudioSignal& segment, TranscriptionProvider& provider) {
  if (segment.samples.empty()) throw EmptyTranscript("zero-length audio segment");
  Transcript t = provider.transcribe(segment);
  if (normalize_token(t.text).empty()) throw EmptyTranscript("provider returned no words");
  if (!(t.confidence >= 0.0 && t.confidence <= 1.0)) throw ProviderUnavailable("transcript confidence outside [0, 1]");
  return t;
}

/// Gates the recording and transcribes every voiced segment; texts are joined
/// with single spaces and the confidence is the lowest one.
inline Transcript transcribe_audio(const AudioSignal& audio, TranscriptionProvider& provider, const GateParams& g = {}) {
  const auto segments = energy_gate(audio, g);
  if (segments.empty()) throw EmptyTranscript("no speech above the energy threshold");
  Transcript out;
  for (const auto& s : segments) {
    const Transcript t = transcribe(s, provider);
    out.text += (out.text.empty() ? "" : " ") + t.text;
    out.confidence = std::min(out.confidence, t.confidence);
  }
  return out;
}

/// Provider score in [0, 1]. Scores below `gate`, and empty transcripts,
/// raise ClarificationNeeded.
inline double assess_alignment(const Transcript& t, const scene::RgbImage& rgb, VisionLanguageProvider& provider,
                               const PromptTemplate& prompts, double gate = 0.5) {
  if (rgb.data.empty()) throw ValidationError("alignment needs a non-empty RGB image");
  if (normalize_token(t.text).empty()) throw ClarificationNeeded(t.text, 0.0);
  const Json r = provider.query({{"task", "alignment"},
                                 {"transcript", t.text},
                                 {"prompt", PromptTemplate::fill(prompts.alignment, t.text)}},
                                rgb);
  if (!r.contains("score") || !r["score"].is_number()) throw ProviderUnavailable("alignment response lacks a score");
  const double s = r["score"].get<double>();
  if (!(s >= 0.0 && s <= 1.0)) throw ProviderUnavailable("alignment score outside [0, 1]");
  if (s < gate) throw ClarificationNeeded(t.text, s);
  return s;
}

/// One prompt per dimension; refusals leave the field empty.
inline VisualFeatureSet extract_visual_features(const Transcript& t, const scene::RgbImage& rgb,
                                                VisionLanguageProvider& provider, const PromptTemplate& prompts) {
  VisualFeatureSet f;
  for (Dimension d : kDimensions) {
    const Json r = provider.query({{"task", "feature"},
                                   {"dimension", to_string(d)},
                                   {"transcript", t.text},
                                   {"prompt", PromptTemplate::fill(prompts.dimensions.at(d), t.text)}},
                                  rgb);
    if (r.contains("value") && r["value"].is_string() && !r.value("refused", false))
      f.field(d) = normalize_token(r["value"].get<std::string>());
    if (r.contains("context_cues") && r["context_cues"].is_array())
      for (const auto& c : r["context_cues"])
        if (c.is_string()) {
          const std::string cue = normalize_token(c.get<std::string>());
          if (!cue.empty() && std::find(f.context_cues.begin(), f.context_cues.end(), cue) == f.context_cues.end())
            f.context_cues.push_back(cue);
        }
  }
  return f;
}

/// Slot template "the {color} {material} {shape} {category} {position}".
/// A weight group contributes its slots when its weight is positive and one
/// of its features is present: C -> color and category, S -> shape,
/// M -> material, P -> position. With no group included the transcript is
/// returned verbatim. `included` lists groups by descending weight (ties in
/// C, S, M, P order).
inline EnrichedExpression compose_enriched(const Transcript& t, const VisualFeatureSet& f, const EnrichmentWeights& w,
                                           double alignment, double gate = 0.5) {
  w.validate();
  if (alignment < gate) throw ClarificationNeeded(t.text, alignment);
  struct Group {
    std::string name;
    double weight;
    bool present;
  };
  std::vector<Group> groups{{"C", w.c, !f.color.empty() || !f.category.empty()},
                            {"S", w.s, !f.shape.empty()},
                            {"M", w.m, !f.material.empty()},
                            {"P", w.p, !f.position.empty()}};
  EnrichedExpression e;
  e.source = t;
  e.features = f;
  e.alignment = alignment;
  std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.weight > b.weight; });
  for (const auto& g : groups)
    if (g.weight > 0.0 && g.present) e.included.push_back(g.name);
  auto on = [&](const char* name) { return std::find(e.included.begin(), e.included.end(), name) != e.included.end(); };
  if (e.included.empty()) {
    e.text = t.text;
    return e;
  }
  std::string text = "the";
  auto add = [&](const std::string& slot) {
    if (!slot.empty()) text += " " + slot;
  };
  if (on("C")) add(f.color);
  if (on("M")) add(f.material);
  if (on("S")) add(f.shape);
  if (on("C")) add(f.category);
  if (on("P")) add(f.position);
  e.text = text;
  return e;
}

struct RereConfig {
  bool enabled = true;
  double gate = 0.5;
  EnrichmentWeights weights;
  GateParams audio;
};

/// Alignment gate, feature extraction and composition for one transcript.
inline EnrichedExpression enrich(const Transcript& t, const scene::RgbImage& rgb, VisionLanguageProvider& provider,
                                 const PromptTemplate& prompts, const RereConfig& cfg) {
  const double a = assess_alignment(t, rgb, provider, prompts, cfg.gate);
  const VisualFeatureSet f = extract_visual_features(t, rgb, provider, prompts);
  return compose_enriched(t, f, cfg.weights, a, cfg.gate);
}

}  // namespace dexgrasp::rere
