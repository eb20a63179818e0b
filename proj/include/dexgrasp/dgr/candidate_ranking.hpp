// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/dgcg/candidates.hpp"
#include "dexgrasp/dgr/gws.hpp"
#include "dexgrasp/dgr/ranking.hpp"

#include <vector>

namespace dexgrasp::dgr {

/// Contacts used to score a candidate: every finger contact plus the thumb
/// target point, all with the same friction coefficient.
inline std::vector<Contact> candidate_contacts(const dgcg::GraspCandidate& c, double mu) {
  std::vector<Contact> out;
  for (const auto& f : c.contacts.fingers) out.push_back({f.point, f.normal, mu});
  if (c.contacts.thumb_target >= 0) {
    const auto& t = c.contacts.thumb_curve[static_cast<std::size_t>(c.contacts.thumb_target)];
    out.push_back({t.point, t.normal, mu});
  }
  return out;
}

struct RankedCandidate {
  int candidate = 0;  // index into the assembled candidate list
  QualityScore score;
};

struct RankingResult {
  std::vector<QualityScore> scores;  // one per candidate
  std::vector<RankedCandidate> top;  // best first
};

/// Scores every candidate about the object centroid and keeps the best
/// force-closure ones. Throws NoForceClosureCandidate if none qualifies.
inline RankingResult rank_candidates(const std::vector<dgcg::GraspCandidate>& candidates, double mu,
                                     const Vec3& centroid, int edge_count = 8, int keep = 3,
                                     MetricKind kind = MetricKind::Inscribed) {
  RankingResult r;
  r.scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto contacts = candidate_contacts(c, mu);
    r.scores.push_back(evaluate_grasp(std::span<const Contact>(contacts), centroid, edge_count, kind));
  }
  for (int i : rank_top(r.scores, keep)) r.top.push_back({i, r.scores[static_cast<std::size_t>(i)]});
  return r;
}

}  // namespace dexgrasp::dgr
