// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dexgrasp/rere/audio.hpp"
#include "dexgrasp/rere/enrichment.hpp"
#include "dexgrasp/rere/http_provider.hpp"
#include "dexgrasp/rere/providers.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <thread>

using namespace dexgrasp;
using namespace dexgrasp::rere;

namespace {

const std::filesystem::path kData(DEXGRASP_DATA_DIR);

MockProvider mock() { return MockProvider::load(kData / "mock_providers.json"); }
const PromptTemplate& prompts() {
  static const PromptTemplate p = PromptTemplate::load(kData / "prompts.json");
  return p;
}

scene::RgbImage small_image() { return scene::RgbImage(4, 3, scene::Rgb{200, 180, 20}); }

AudioSignal tone(int rate, const std::vector<std::pair<double, double>>& parts) {
  AudioSignal a;
  a.sample_rate = rate;
  for (auto [seconds, amp] : parts)
    for (int i = 0; i < static_cast<int>(seconds * rate); ++i)
      a.samples.push_back(amp == 0.0 ? 0.0 : amp * (i % 2 ? 1.0 : -1.0));
  return a;
}

VisualFeatureSet duck() {
  VisualFeatureSet f;
  f.category = "duck";
  f.color = "yellow";
  f.material = "rubber";
  f.position = "on the left";
  return f;
}

}  // namespace

TEST(EnergyGate, SilenceAndConstantSignal) {
  EXPECT_TRUE(energy_gate(tone(16000, {{1.0, 0.0}})).empty());
  const auto a = tone(16000, {{0.5, 0.5}});
  GateParams g;
  g.threshold = 0.1;
  const auto s = energy_gate(a, g);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].samples, a.samples);
}

TEST(EnergyGate, BurstBetweenSilences) {
  const auto a = tone(16000, {{1.0, 0.0}, {1.0, 0.5}, {1.0, 0.0}});
  GateParams g{20.0, 0.1, 100.0};
  const auto r = energy_gate_ranges(a, g);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].first / 16000.0, 1.0, 0.020);
  EXPECT_NEAR(r[0].second / 16000.0, 2.0, 0.120);
  EXPECT_EQ(energy_gate(a, g)[0].samples.size(), r[0].second - r[0].first);
}

TEST(EnergyGate, SegmentsAreDisjointAndOrdered) {
  const auto a = tone(8000, {{0.3, 0.0}, {0.2, 0.4}, {0.5, 0.0}, {0.1, 0.3}, {0.05, 0.0}, {0.1, 0.3}, {0.4, 0.0}});
  const auto s = energy_gate(a, GateParams{20.0, 0.1, 100.0});
  ASSERT_EQ(s.size(), 2u);  // the 50 ms gap is bridged by the hangover
  const auto r = energy_gate_ranges(a, GateParams{20.0, 0.1, 100.0});
  EXPECT_LE(r[0].second, r[1].first);
  std::size_t total = 0;
  for (const auto& x : s) total += x.samples.size();
  EXPECT_LE(total, a.samples.size());
  EXPECT_THROW(energy_gate(a, GateParams{0.0, 0.1, 100.0}), ValidationError);
}

TEST(Wav, RoundTripAndErrors) {
  const auto a = tone(16000, {{0.05, 0.25}, {0.05, 0.0}});
  const auto b = decode_wav(encode_wav(a));
  EXPECT_EQ(b.sample_rate, 16000);
  ASSERT_EQ(b.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_NEAR(b.samples[i], a.samples[i], 1.0 / 32767);
  EXPECT_THROW(decode_wav("RIFF1234WAVX"), ValidationError);
  std::string truncated = encode_wav(a);
  truncated.resize(60);
  EXPECT_THROW(decode_wav(truncated), ValidationError);
}

TEST(Transcribe, MockAndContracts) {
  auto m = mock();
  const auto t = transcribe(tone(16000, {{0.1, 0.5}}), m);
  EXPECT_EQ(t.text, "give me a duck on the table");
  EXPECT_EQ(t.confidence, 1.0);
  EXPECT_THROW(transcribe(AudioSignal{}, m), EmptyTranscript);
  EXPECT_THROW(transcribe_audio(tone(16000, {{0.5, 0.0}}), m), EmptyTranscript);
  Json doc = load_json(kData / "mock_providers.json");
  doc["transcription"]["text"] = "  ";
  MockProvider blank(doc);
  EXPECT_THROW(transcribe(tone(16000, {{0.1, 0.5}}), blank), EmptyTranscript);
  doc["unavailable"] = true;
  MockProvider down(doc);
  EXPECT_THROW(transcribe(tone(16000, {{0.1, 0.5}}), down), ProviderUnavailable);
}

TEST(Alignment, GateContract) {
  auto m = mock();
  EXPECT_DOUBLE_EQ(assess_alignment({"give me a duck", 1.0}, small_image(), m, prompts(), 0.5), 0.9);
  try {
    assess_alignment({"give me the blue plate", 1.0}, small_image(), m, prompts(), 0.5);
    FAIL() << "expected ClarificationNeeded";
  } catch (const ClarificationNeeded& e) {
    EXPECT_EQ(e.transcript(), "give me the blue plate");
    EXPECT_DOUBLE_EQ(e.alignment(), 0.2);
  }
  EXPECT_THROW(assess_alignment({"", 1.0}, small_image(), m, prompts(), 0.0), ClarificationNeeded);
  EXPECT_THROW(assess_alignment({"duck", 1.0}, scene::RgbImage{}, m, prompts(), 0.5), ValidationError);
}

TEST(Features, MockPassThroughAndRefusal) {
  auto m = mock();
  const auto f = extract_visual_features({"give me a duck on the table", 1.0}, small_image(), m, prompts());
  VisualFeatureSet want = duck();
  want.context_cues = {"on the table"};
  EXPECT_EQ(f, want);  // "Duck" is normalized; shape was refused
  const auto red = extract_visual_features({"the red object", 1.0}, small_image(), m, prompts());
  EXPECT_EQ(red.category, "cup");
  EXPECT_EQ(red.shape, "circular");
  EXPECT_TRUE(red.position.empty());
  EXPECT_EQ(compose_enriched({"the red object", 1.0}, red, {}, 0.9).text, "the red circular cup");
}

TEST(Compose, TemplateExamples) {
  const Transcript t{"give me a duck", 1.0};
  EXPECT_EQ(compose_enriched(t, duck(), {1, 1, 1, 1}, 0.9).text, "the yellow rubber duck on the left");
  EXPECT_EQ(compose_enriched(t, duck(), {0, 0, 0, 0}, 0.9).text, "give me a duck");
  EXPECT_EQ(compose_enriched(t, duck(), {1, 1, 1, 0}, 0.9).text, "the yellow rubber duck");
  EXPECT_EQ(compose_enriched(t, VisualFeatureSet{}, {1, 1, 1, 1}, 0.9).text, "give me a duck");
  const auto e = compose_enriched(t, duck(), {0.5, 2.0, 1.0, 1.0}, 0.9);
  EXPECT_EQ(e.included, (std::vector<std::string>{"M", "P", "C"}));  // S has no feature
  EXPECT_THROW(compose_enriched(t, duck(), {1, 1, 1, 1}, 0.49, 0.5), ClarificationNeeded);
  EXPECT_THROW(compose_enriched(t, duck(), {-1, 1, 1, 1}, 0.9), ValidationError);
}

TEST(Compose, RaisingAWeightNeverDropsAnotherDimension) {
  VisualFeatureSet f = duck();
  f.shape = "round";
  const Transcript t{"duck", 1.0};
  for (int mask = 0; mask < 16; ++mask) {
    EnrichmentWeights w{double(mask & 1), double((mask >> 1) & 1), double((mask >> 2) & 1), double((mask >> 3) & 1)};
    const auto base = compose_enriched(t, f, w, 0.9);
    for (int k = 0; k < 4; ++k) {
      EnrichmentWeights up = w;
      double* slot[] = {&up.c, &up.s, &up.m, &up.p};
      if (*slot[k] > 0) continue;
      *slot[k] = 0.7;
      const auto raised = compose_enriched(t, f, up, 0.9);
      for (const auto& g : base.included)
        EXPECT_NE(std::find(raised.included.begin(), raised.included.end(), g), raised.included.end());
    }
  }
}

TEST(Enrich, DeterministicWithMock) {
  auto m = mock();
  RereConfig cfg;
  const Transcript t{"give me a duck on the table", 1.0};
  const auto a = enrich(t, small_image(), m, prompts(), cfg);
  const auto b = enrich(t, small_image(), m, prompts(), cfg);
  EXPECT_EQ(a.text, "the yellow rubber duck on the left");
  EXPECT_EQ(a.text, b.text);
  EXPECT_GE(a.alignment, cfg.gate);
}

TEST(Prompts, FillAndValidation) {
  EXPECT_EQ(PromptTemplate::fill("a {transcript} b {transcript}", "x"), "a x b x");
  Json doc = load_json(kData / "prompts.json");
  doc["dimensions"].erase("shape");
  EXPECT_THROW(PromptTemplate::from_json(doc), MissingField);
}

TEST(HttpProvider, RoundTripAndTimeout) {
  httplib::Server svr;
  std::string seen_auth;
  svr.Post("/vlm", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    const Json body = Json::parse(req.body);
    Json out = body.at("task") == "alignment" ? Json{{"score", 0.75}} : Json{{"value", "Blue"}};
    out["image_bytes"] = body.at("image_ppm_base64").get<std::string>().size();
    res.set_content(out.dump(), "application/json");
  });
  svr.Post("/asr", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"text":"pick up the cup","confidence":0.8})", "application/json");
  });
  svr.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1500));
    res.set_content("{}", "application/json");
  });
  const int port = svr.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  HttpVisionLanguageProvider vlm(Endpoint::parse(base + "/vlm", "secret"));
  EXPECT_DOUBLE_EQ(assess_alignment({"the cup", 1.0}, small_image(), vlm, prompts(), 0.5), 0.75);
  EXPECT_EQ(seen_auth, "Bearer secret");
  EXPECT_EQ(extract_visual_features({"the cup", 1.0}, small_image(), vlm, prompts()).color, "blue");

  HttpTranscriptionProvider asr(Endpoint::parse(base + "/asr"));
  const auto t = transcribe(tone(16000, {{0.1, 0.5}}), asr);
  EXPECT_EQ(t.text, "pick up the cup");
  EXPECT_DOUBLE_EQ(t.confidence, 0.8);

  HttpVisionLanguageProvider slow(Endpoint::parse(base + "/slow", "", 0.3));
  EXPECT_THROW(assess_alignment({"the cup", 1.0}, small_image(), slow, prompts(), 0.5), ProviderUnavailable);
  HttpVisionLanguageProvider missing(Endpoint::parse(base + "/nope"));
  EXPECT_THROW(assess_alignment({"the cup", 1.0}, small_image(), missing, prompts(), 0.5), ProviderUnavailable);

  svr.stop();
  th.join();
  EXPECT_THROW(Endpoint::parse("ftp://x"), ConfigError);
}
