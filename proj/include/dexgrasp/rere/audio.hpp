// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/rere/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace dexgrasp::rere {

namespace detail {

inline std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

inline void put_le(std::string& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace detail

/// Decodes a RIFF/WAVE byte string: 16-bit PCM or 32-bit float, any channel
/// count (channels are averaged).
inline AudioSignal decode_wav(const std::string& bytes) {
  const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(b, "RIFF", 4) != 0 || std::memcmp(b + 8, "WAVE", 4) != 0)
    throw ValidationError("not a RIFF/WAVE file");
  int format = 0, channels = 0, bits = 0;
  AudioSignal out;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = detail::le32(b + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw ValidationError("truncated WAVE chunk");
    if (std::memcmp(b + pos, "fmt ", 4) == 0) {
      if (size < 16) throw ValidationError("short fmt chunk");
      format = detail::le16(b + body);
      channels = detail::le16(b + body + 2);
      out.sample_rate = static_cast<int>(detail::le32(b + body + 4));
      bits = detail::le16(b + body + 14);
      have_fmt = true;
    } else if (std::memcmp(b + pos, "data", 4) == 0) {
      if (!have_fmt) throw ValidationError("data chunk before fmt chunk");
      const bool pcm16 = format == 1 && bits == 16;
      const bool f32 = format == 3 && bits == 32;
      if (!pcm16 && !f32) throw ValidationError("unsupported WAVE encoding (need 16-bit PCM or 32-bit float)");
      if (channels < 1) throw ValidationError("WAVE channel count must be positive");
      const std::size_t frame = static_cast<std::size_t>(channels) * (bits / 8);
      const std::size_t frames = size / frame;
      out.samples.resize(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
          const unsigned char* s = b + body + i * frame + static_cast<std::size_t>(c) * (bits / 8);
          if (pcm16) {
            acc += static_cast<std::int16_t>(detail::le16(s)) / 32768.0;
          } else {
            float v;
            const std::uint32_t u = detail::le32(s);
            std::memcpy(&v, &u, 4);
            acc += v;
          }
        }
        out.samples[i] = std::clamp(acc / channels, -1.0, 1.0);
      }
      out.validate();
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw ValidationError("WAVE file has no data chunk");
}

inline AudioSignal load_wav(const std::filesystem::path& path) { return decode_wav(read_text_file(path)); }

/// Mono 16-bit PCM encoding.
inline std::string encode_wav(const AudioSignal& a) {
  std::string out = "RIFF";
  const auto data = static_cast<std::uint32_t>(a.samples.size() * 2);
  detail::put_le(out, 36 + data, 4);
  out += "WAVEfmt ";
  detail::put_le(out, 16, 4);
  detail::put_le(out, 1, 2);  // PCM
  detail::put_le(out, 1, 2);  // mono
  detail::put_le(out, static_cast<std::uint32_t>(a.sample_rate), 4);
  detail::put_le(out, static_cast<std::uint32_t>(a.sample_rate) * 2, 4);
  detail::put_le(out, 2, 2);
  detail::put_le(out, 16, 2);
  out += "data";
  detail::put_le(out, data, 4);
  for (double s : a.samples) {
    const auto v = static_cast<std::int16_t>(std::lround(std::clamp(s, -1.0, 1.0) * 32767.0));
    detail::put_le(out, static_cast<std::uint16_t>(v), 2);
  }
  return out;
}

inline void save_wav(const std::filesystem::path& path, const AudioSignal& a) { write_text_file(path, encode_wav(a)); }

struct GateParams {
  double window_ms = 20.0;
  double threshold = 0.02;  // RMS
  double hangover_ms = 100.0;
};

/// Splits speech from silence. Energy is the RMS over consecutive windows. A
/// segment opens at the first window above the threshold and closes once the
/// energy has stayed at or below it for the hangover time; the segment keeps
/// the hangover tail (clipped to the signal). Returns [begin, end) sample
/// ranges.
inline std::vector<std::pair<std::size_t, std::size_t>> energy_gate_ranges(const AudioSignal& audio,
                                                                           const GateParams& g = {}) {
  if (!(g.window_ms > 0.0)) throw ValidationError("window_ms must be positive");
  if (!(g.threshold >= 0.0)) throw ValidationError("threshold must be >= 0");
  if (!(g.hangover_ms >= 0.0)) throw ValidationError("hangover_ms must be >= 0");
  audio.validate();
  const std::size_t n = audio.samples.size();
  const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(g.window_ms * audio.sample_rate / 1000.0)));
  const auto hangover = static_cast<std::size_t>(std::lround(g.hangover_ms * audio.sample_rate / 1000.0));

  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  bool open = false;
  std::size_t start = 0, last_loud_end = 0;
  for (std::size_t w = 0; w < n; w += window) {
    const std::size_t e = std::min(n, w + window);
    double sq = 0.0;
    for (std::size_t i = w; i < e; ++i) sq += audio.samples[i] * audio.samples[i];
    const bool loud = std::sqrt(sq / static_cast<double>(e - w)) > g.threshold;
    if (loud) {
      if (!open) {
        open = true;
        start = w;
      }
      last_loud_end = e;
    } else if (open && e - last_loud_end >= hangover) {
      ranges.emplace_back(start, std::min(n, last_loud_end + hangover));
      open = false;
    }
  }
  if (open) ranges.emplace_back(start, std::min(n, last_loud_end + hangover));
  return ranges;
}

/// The gated segments as separate signals.
inline std::vector<AudioSignal> energy_gate(const AudioSignal& audio, const GateParams& g = {}) {
  std::vector<AudioSignal> out;
  for (auto [a, b] : energy_gate_ranges(audio, g)) {
    AudioSignal s;
    s.sample_rate = audio.sample_rate;
    s.samples.assign(audio.samples.begin() + static_cast<std::ptrdiff_t>(a),
                     audio.samples.begin() + static_cast<std::ptrdiff_t>(b));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dexgrasp::rere
