// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// ASCII PLY point lists: vertex element with x, y, z and optional nx, ny, nz.

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/scene/types.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace dexgrasp::scene {

inline PointCloud load_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() {
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "unexpected end of file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next() != "ply") throw ParseError(lineno, "missing 'ply' magic");
  long vertex_count = -1;
  bool in_vertex = false;
  std::map<std::string, int> column;
  int columns = 0;
  for (;;) {
    std::istringstream ss(next());
    std::string kw;
    ss >> kw;
    if (kw == "end_header") break;
    if (kw == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "ascii") throw ParseError(lineno, "only ascii PLY is supported");
    } else if (kw == "element") {
      std::string name;
      long count = -1;
      ss >> name >> count;
      if (!ss || count < 0) throw ParseError(lineno, "malformed element line");
      in_vertex = name == "vertex";
      if (in_vertex) vertex_count = count;
    } else if (kw == "property") {
      std::string type, name;
      ss >> type >> name;
      if (type == "list") throw ParseError(lineno, "list properties are not supported");
      if (!ss) throw ParseError(lineno, "malformed property line");
      if (in_vertex) column[name] = columns++;
    } else if (kw == "comment" || kw == "obj_info" || kw.empty()) {
      continue;
    } else {
      throw ParseError(lineno, "unknown header keyword '" + kw + "'");
    }
  }
  if (vertex_count < 0) throw MissingField("vertex element");
  for (const char* f : {"x", "y", "z"})
    if (!column.count(f)) throw MissingField(std::string("vertex property ") + f);
  const bool normals = column.count("nx") && column.count("ny") && column.count("nz");
  if (vertex_count == 0) throw EmptySelection("cloud has no vertices");

  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(vertex_count));
  std::vector<double> row(static_cast<std::size_t>(columns));
  for (long i = 0; i < vertex_count; ++i) {
    std::istringstream ss(next());
    for (auto& v : row)
      if (!(ss >> v)) throw ParseError(lineno, "expected " + std::to_string(columns) + " numbers");
    auto at = [&](const char* name) { return row[static_cast<std::size_t>(column.at(name))]; };
    cloud.points.emplace_back(at("x"), at("y"), at("z"));
    if (normals) cloud.normals.emplace_back(at("nx"), at("ny"), at("nz"));
  }
  return cloud;
}

inline void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const bool normals = cloud.has_normals();
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "end_header\n";
  char buf[256];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    int n = std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g", p.x(), p.y(), p.z());
    out.write(buf, n);
    if (normals) {
      const Vec3& q = cloud.normals[i];
      n = std::snprintf(buf, sizeof buf, " %.9g %.9g %.9g", q.x(), q.y(), q.z());
      out.write(buf, n);
    }
    out.put('\n');
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dexgrasp::scene
