// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Inspection outputs: annotated feature raster, feature record and ASCII
// geometry of a planned grasp for external viewers.

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/dgr/candidate_ranking.hpp"
#include "dexgrasp/dgr/gws.hpp"
#include "dexgrasp/hand/hand_model.hpp"
#include "dexgrasp/pipeline/pipeline.hpp"
#include "dexgrasp/scene/ply.hpp"
#include "dexgrasp/scene/raster_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace dexgrasp::pipeline {

namespace detail {

inline std::vector<double> to_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline void put(scene::RgbImage& img, int u, int v, const scene::Rgb& c) {
  if (img.inside(u, v)) img(u, v) = c;
}

inline void line(scene::RgbImage& img, Vec2 a, Vec2 b, const scene::Rgb& c) {
  const int n = static_cast<int>(std::ceil((b - a).cwiseAbs().maxCoeff())) + 1;
  for (int i = 0; i <= n; ++i) {
    const Vec2 p = a + (b - a) * (static_cast<double>(i) / n);
    put(img, static_cast<int>(std::lround(p.x())), static_cast<int>(std::lround(p.y())), c);
  }
}

inline std::ofstream open_text(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

inline std::string fmt(const Vec3& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g", p.x(), p.y(), p.z());
  return buf;
}

}  // namespace detail

/// Feature record of one target: C*, tangent, principal axis and V.
inline Json feature_record(const features::ObjectFeatures& f) {
  return {{"pixel_centroid", detail::to_vector(f.pixel_centroid)},
          {"cstar_pixel", {f.cstar.pixel.x, f.cstar.pixel.y}},
          {"cstar_point", detail::to_vector(f.cstar.point)},
          {"tangent_2d", detail::to_vector(f.tangent)},
          {"principal_axis", detail::to_vector(f.axes.first())},
          {"eigenvalues", detail::to_vector(f.axes.eigenvalues)},
          {"principal_axis_degenerate", f.axes.degenerate},
          {"direction", detail::to_vector(f.vector.direction)},
          {"skeleton_pixels", f.skeleton.pixels.size()},
          {"object_points", f.cloud.size()}};
}

/// RGB copy with the mask darkened, the skeleton in red, the tangent through
/// C* in blue and C* as a green cross.
inline scene::RgbImage annotate_features(const scene::SceneFrame& frame, const features::ObjectFeatures& f) {
  scene::RgbImage img = frame.rgb;
  for (int v = 0; v < img.height; ++v)
    for (int u = 0; u < img.width; ++u)
      if (frame.mask.inside(u, v) && frame.mask(u, v))
        for (auto& ch : img(u, v)) ch = static_cast<std::uint8_t>(ch / 2);
  for (const auto& p : f.skeleton.pixels) detail::put(img, p.x, p.y, {255, 0, 0});
  const Vec2 c(f.cstar.pixel.x, f.cstar.pixel.y);
  detail::line(img, c - 20.0 * f.tangent, c + 20.0 * f.tangent, {0, 0, 255});
  for (int d = -3; d <= 3; ++d) {
    detail::put(img, f.cstar.pixel.x + d, f.cstar.pixel.y, {0, 255, 0});
    detail::put(img, f.cstar.pixel.x, f.cstar.pixel.y + d, {0, 255, 0});
  }
  return img;
}

/// Writes features.ppm and features.json into `dir`.
inline Json export_features(const scene::SceneFrame& frame, const features::ObjectFeatures& f, const fs::path& dir) {
  fs::create_directories(dir);
  const Json record = feature_record(f);
  scene::save_rgb(annotate_features(frame, f), dir / "features.ppm");
  write_text_file(dir / "features.json", record.dump(2) + "\n");
  return record;
}

/// Files written by export_grasp_geometry; empty when nothing was exported.
struct VizExport {
  std::vector<fs::path> files;
  int finger_contacts = 0;
  bool thumb_target = false;
  std::string warning;
};

/// Geometry of the best grasp in a result document: the object cloud, the
/// finger contacts and thumb target at the best pose, the finger sample
/// polylines, the pinch axis segment and the vertex table of the grasp
/// wrench space. An empty top-3 writes nothing and sets a warning.
inline VizExport export_grasp_geometry(const Json& result, const PipelineConfig& cfg, const fs::path& dir) {
  VizExport out;
  const Json top = require<Json>(result, "top3");
  if (!top.is_array() || top.empty()) {
    out.warning = "result has no ranked candidates; nothing exported";
    return out;
  }
  const Json best = require<Json>(result, "best");
  const auto action = require<std::vector<double>>(best, "action");
  if (action.size() != 12) throw ValidationError("best.action: expected 12 values");
  const double mu = require<double>(result, "mu");
  const int edges = cfg.edges;
  dgcg::GraspCandidate c;
  for (int i = 0; i < 6; ++i) c.pose[i] = action[static_cast<std::size_t>(i)];
  for (int i = 0; i < 6; ++i) c.joints[i] = action[static_cast<std::size_t>(i + 6)];
  c.action = Eigen::Map<const dgcg::Action>(action.data());

  const hand::HandConfig hand = hand::load_hand_config(cfg.hand);
  const scene::SceneFrame frame = load_scene(cfg.scene);
  const Perception per = perceive(frame, cfg);
  const hand::IndexedCloud object(per.object);
  const hand::PosedHand posed = hand::place_hand(hand, pose_to_transform(c.pose));
  c.contacts = hand::intersect_object(posed, object, cfg.contact_tolerance);

  fs::create_directories(dir);
  auto written = [&](const fs::path& p) { out.files.push_back(p); };

  scene::save_cloud(per.object, dir / "cloud.ply");
  written(dir / "cloud.ply");

  scene::PointCloud contacts;
  for (const auto& f : c.contacts.fingers) {
    contacts.points.push_back(f.point);
    contacts.normals.push_back(f.normal);
  }
  out.finger_contacts = static_cast<int>(contacts.size());
  if (!contacts.points.empty()) {
    scene::save_cloud(contacts, dir / "contacts.ply");
    written(dir / "contacts.ply");
  }
  if (c.contacts.thumb_target >= 0) {
    const auto& t = c.contacts.thumb_curve[static_cast<std::size_t>(c.contacts.thumb_target)];
    scene::PointCloud thumb;
    thumb.points.push_back(t.point);
    thumb.normals.push_back(t.normal);
    scene::save_cloud(thumb, dir / "thumb_target.ply");
    written(dir / "thumb_target.ply");
    out.thumb_target = true;
  }

  {
    auto f = detail::open_text(dir / "fingers.txt");
    f << "# finger sample polylines at the best pose, camera frame (m)\n";
    for (int i = 0; i < hand::kFingers; ++i) {
      const auto& pts = posed.finger_points[static_cast<std::size_t>(i)];
      f << "finger " << i << ' ' << pts.size() << '\n';
      for (const auto& p : pts) f << detail::fmt(p) << '\n';
    }
    written(dir / "fingers.txt");
  }
  {
    auto f = detail::open_text(dir / "pinch_axis.txt");
    f << "# pinch axis segment at the best pose, camera frame (m)\n"
      << detail::fmt(posed.pinch_a) << '\n'
      << detail::fmt(posed.pinch_b) << '\n';
    written(dir / "pinch_axis.txt");
  }
  {
    const auto cs = dgr::candidate_contacts(c, mu);
    auto f = detail::open_text(dir / "gws_vertices.txt");
    f << "# grasp wrench space vertices: fx fy fz tx ty tz\n";
    if (!cs.empty()) {
      const auto w = dgr::grasp_wrenches(std::span<const dgr::Contact>(cs), per.centroid, edges);
      for (const auto& v : dgr::unique_wrenches(w)) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g %.9g %.9g\n", v[0], v[1], v[2], v[3], v[4], v[5]);
        f << buf;
      }
    }
    written(dir / "gws_vertices.txt");
  }
  return out;
}

}  // namespace dexgrasp::pipeline
