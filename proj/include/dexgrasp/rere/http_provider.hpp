// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// HTTP transport for the provider interfaces. Plain http only (no TLS).

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/rere/audio.hpp"
#include "dexgrasp/rere/providers.hpp"

#include <httplib.h>

#include <cstdlib>
#include <optional>
#include <string>

namespace dexgrasp::rere {

struct Endpoint {
  std::string host_url;  // scheme://host[:port]
  std::string path = "/";
  std::string api_key;
  double timeout_s = 10.0;

  /// Splits "http://host:port/path".
  static Endpoint parse(const std::string& url, std::string api_key = {}, double timeout_s = 10.0) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw ConfigError("provider URL must start with http:// (got '" + url + "')");
    const auto slash = url.find('/', scheme.size());
    Endpoint e;
    e.host_url = slash == std::string::npos ? url : url.substr(0, slash);
    e.path = slash == std::string::npos ? "/" : url.substr(slash);
    if (e.host_url.size() == scheme.size()) throw ConfigError("provider URL has no host");
    e.api_key = std::move(api_key);
    e.timeout_s = timeout_s;
    return e;
  }

  /// Endpoint from environment variables; nullopt when the URL is unset.
  static std::optional<Endpoint> from_env(const char* url_var, const char* key_var, double timeout_s = 10.0) {
    const char* url = std::getenv(url_var);
    if (url == nullptr || *url == '\0') return std::nullopt;
    const char* key = std::getenv(key_var);
    return parse(url, key ? key : "", timeout_s);
  }
};

namespace detail {

inline Json post_json(const Endpoint& e, const Json& body) {
  httplib::Client cli(e.host_url);
  const auto sec = static_cast<time_t>(e.timeout_s);
  const auto usec = static_cast<time_t>((e.timeout_s - static_cast<double>(sec)) * 1e6);
  cli.set_connection_timeout(sec, usec);
  cli.set_read_timeout(sec, usec);
  cli.set_write_timeout(sec, usec);
  httplib::Headers headers;
  if (!e.api_key.empty()) headers.emplace("Authorization", "Bearer " + e.api_key);
  auto res = cli.Post(e.path, headers, body.dump(), "application/json");
  if (!res) throw ProviderUnavailable(e.host_url + e.path + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw ProviderUnavailable(e.host_url + e.path + ": HTTP " + std::to_string(res->status));
  try {
    return Json::parse(res->body);
  } catch (const Json::parse_error&) {
    throw ProviderUnavailable(e.host_url + e.path + ": response is not JSON");
  }
}

inline std::string ppm_bytes(const scene::RgbImage& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  for (const auto& px : img.data) out.append(reinterpret_cast<const char*>(px.data()), 3);
  return out;
}

}  // namespace detail

/// Sends {"audio_wav_base64", "sample_rate"}; expects {"text", "confidence"}.
class HttpTranscriptionProvider final : public TranscriptionProvider {
 public:
  explicit HttpTranscriptionProvider(Endpoint e) : endpoint_(std::move(e)) {}

  Transcript transcribe(const AudioSignal& segment) override {
    const Json body{{"sample_rate", segment.sample_rate},
                    {"audio_wav_base64", httplib::detail::base64_encode(encode_wav(segment))}};
    const Json r = detail::post_json(endpoint_, body);
    if (!r.contains("text") || !r["text"].is_string()) throw ProviderUnavailable("transcription response lacks text");
    return {r["text"].get<std::string>(), r.value("confidence", 1.0)};
  }

 private:
  Endpoint endpoint_;
};

/// Forwards the request with the image attached as base64 PPM.
class HttpVisionLanguageProvider final : public VisionLanguageProvider {
 public:
  explicit HttpVisionLanguageProvider(Endpoint e) : endpoint_(std::move(e)) {}

  Json query(const Json& request, const scene::RgbImage& image) override {
    Json body = request;
    body["image_ppm_base64"] = httplib::detail::base64_encode(detail::ppm_bytes(image));
    return detail::post_json(endpoint_, body);
  }

 private:
  Endpoint endpoint_;
};

}  // namespace dexgrasp::rere
