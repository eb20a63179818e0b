// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/rere/types.hpp"
#include "dexgrasp/scene/types.hpp"

#include <filesystem>
#include <string>

namespace dexgrasp::rere {

/// Speech to text.
class TranscriptionProvider {
 public:
  virtual ~TranscriptionProvider() = default;
  virtual Transcript transcribe(const AudioSignal& segment) = 0;
};

/// One structured request, one structured response. Requests carry "task"
/// ("alignment" or "feature"), "prompt", "transcript" and, for features,
/// "dimension". Responses: {"score": s} for alignment; {"value": v} or
/// {"refused": true} for features, optionally with "context_cues".
class VisionLanguageProvider {
 public:
  virtual ~VisionLanguageProvider() = default;
  virtual Json query(const Json& request, const scene::RgbImage& image) = 0;
};

/// Canned answers from a fixture document:
///   {"transcription": {"text": ..., "confidence": ...},
///    "alignment": {"default": s, "by_transcript": {text: s}},
///    "features": {"default": {dimension: value|null, "context_cues": [...]},
///                 "by_transcript": {text: {...}}},
///    "unavailable": false}
/// A null or missing dimension is answered with a refusal.
class MockProvider final : public TranscriptionProvider, public VisionLanguageProvider {
 public:
  explicit MockProvider(Json fixture) : doc_(std::move(fixture)) {
    if (!doc_.is_object()) throw ValidationError("mock provider fixture must be an object");
  }

  static MockProvider load(const std::filesystem::path& path) { return MockProvider(load_json(path)); }

  Transcript transcribe(const AudioSignal&) override {
    check_available();
    const Json t = require<Json>(doc_, "transcription");
    return {require<std::string>(t, "text"), optional<double>(t, "confidence", 1.0)};
  }

  Json query(const Json& request, const scene::RgbImage&) override {
    check_available();
    const std::string task = require<std::string>(request, "task");
    const std::string transcript = optional<std::string>(request, "transcript", "");
    if (task == "alignment") return {{"score", pick(require<Json>(doc_, "alignment"), transcript)}};
    if (task == "feature") {
      const Json f = pick(require<Json>(doc_, "features"), transcript);
      const std::string dim = require<std::string>(request, "dimension");
      Json out = Json::object();
      if (f.contains(dim) && f[dim].is_string())
        out["value"] = f[dim];
      else
        out["refused"] = true;
      if (f.contains("context_cues")) out["context_cues"] = f["context_cues"];
      return out;
    }
    throw ValidationError("mock provider: unknown task '" + task + "'");
  }

 private:
  void check_available() const {
    if (optional<bool>(doc_, "unavailable", false)) throw ProviderUnavailable("mock provider configured unavailable");
  }

  static Json pick(const Json& section, const std::string& transcript) {
    if (section.contains("by_transcript") && section["by_transcript"].contains(transcript))
      return section["by_transcript"][transcript];
    return require<Json>(section, "default");
  }

  Json doc_;
};

}  // namespace dexgrasp::rere
