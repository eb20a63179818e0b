// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/dgr/gws.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace dexgrasp::dgr {

/// Indices of the (up to) `keep` best force-closure scores: descending q,
/// ties by ascending index. Throws NoForceClosureCandidate if none qualifies.
inline std::vector<int> rank_top(const std::vector<QualityScore>& scores, int keep = 3) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(scores.size()); ++i)
    if (scores[static_cast<std::size_t>(i)].force_closure) idx.push_back(i);
  if (idx.empty()) throw NoForceClosureCandidate("no candidate is force closure");
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)].q > scores[static_cast<std::size_t>(b)].q;
  });
  if (static_cast<int>(idx.size()) > keep) idx.resize(static_cast<std::size_t>(keep));
  return idx;
}

}  // namespace dexgrasp::dgr
