// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Binary netpbm rasters: 16-bit P5 depth, 8-bit P5 masks, 8-bit P6 color.

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/scene/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace dexgrasp::scene {

namespace detail {

struct PnmHeader {
  std::string magic;
  int width = 0, height = 0, maxval = 0;
};

inline PnmHeader read_pnm_header(std::istream& in, const std::string& name) {
  PnmHeader h;
  std::size_t line = 1;
  auto token = [&]() {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
        ++line;
        continue;
      }
      if (std::isspace(c)) {
        if (c == '\n') ++line;
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw ParseError(line, name + ": truncated header");
    return tok;
  };
  h.magic = token();
  try {
    h.width = std::stoi(token());
    h.height = std::stoi(token());
    h.maxval = std::stoi(token());
  } catch (const std::logic_error&) {
    throw ParseError(line, name + ": non-numeric header field");
  }
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535)
    throw ParseError(line, name + ": bad header values");
  return h;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

inline std::vector<std::uint8_t> read_bytes(std::istream& in, std::size_t n, const std::string& name) {
  std::vector<std::uint8_t> buf(n);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw IoError(name + ": truncated pixel data");
  return buf;
}

}  // namespace detail

/// Reads a 16-bit (or 8-bit) single-channel P5 raster; raw value 0 is invalid,
/// every other value is multiplied by meters_per_unit.
inline DepthImage load_depth(const std::filesystem::path& path, double meters_per_unit = 0.001) {
  auto in = detail::open_in(path);
  const auto h = detail::read_pnm_header(in, path.string());
  if (h.magic != "P5") throw ParseError(1, path.string() + ": expected P5 depth raster");
  const bool wide = h.maxval > 255;
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  const auto bytes = detail::read_bytes(in, n * (wide ? 2 : 1), path.string());
  DepthImage d(h.width, h.height, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned raw = wide ? (unsigned{bytes[2 * i]} << 8) | bytes[2 * i + 1] : bytes[i];
    d.data[i] = raw == 0 ? 0.0 : raw * meters_per_unit;
  }
  return d;
}

inline void save_depth(const DepthImage& d, const std::filesystem::path& path, double meters_per_unit = 0.001) {
  auto out = detail::open_out(path);
  out << "P5\n" << d.width << ' ' << d.height << "\n65535\n";
  for (double z : d.data) {
    long raw = (std::isfinite(z) && z > 0.0) ? std::lround(z / meters_per_unit) : 0;
    raw = std::clamp<long>(raw, 0, 65535);
    const char be[2] = {static_cast<char>((raw >> 8) & 0xff), static_cast<char>(raw & 0xff)};
    out.write(be, 2);
  }
}

/// 8-bit P5 mask, nonzero = target.
inline BinaryMask load_mask(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  const auto h = detail::read_pnm_header(in, path.string());
  if (h.magic != "P5" || h.maxval > 255) throw ParseError(1, path.string() + ": expected 8-bit P5 mask");
  BinaryMask m(h.width, h.height, 0);
  const auto bytes = detail::read_bytes(in, m.data.size(), path.string());
  for (std::size_t i = 0; i < bytes.size(); ++i) m.data[i] = bytes[i] != 0 ? 1 : 0;
  return m;
}

inline void save_mask(const BinaryMask& m, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "P5\n" << m.width << ' ' << m.height << "\n255\n";
  for (auto b : m.data) out.put(static_cast<char>(b ? 255 : 0));
}

inline RgbImage load_rgb(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  const auto h = detail::read_pnm_header(in, path.string());
  if (h.magic != "P6" || h.maxval > 255) throw ParseError(1, path.string() + ": expected 8-bit P6 image");
  RgbImage img(h.width, h.height);
  const auto bytes = detail::read_bytes(in, img.data.size() * 3, path.string());
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = {bytes[3 * i], bytes[3 * i + 1], bytes[3 * i + 2]};
  return img;
}

inline void save_rgb(const RgbImage& img, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  for (const auto& px : img.data) out.write(reinterpret_cast<const char*>(px.data()), 3);
}

}  // namespace dexgrasp::scene
