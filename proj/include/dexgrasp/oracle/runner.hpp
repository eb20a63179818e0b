// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Engine-versus-oracle comparisons on random unit-sphere contact fixtures.

#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/core/random.hpp"
#include "dexgrasp/dgr/force_closure.hpp"
#include "dexgrasp/dgr/gws.hpp"
#include "dexgrasp/oracle/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dexgrasp::oracle {

struct OracleReport {
  std::string kind;
  std::uint64_t seed = 0;
  int trials = 0;
  int compared = 0;  // fixtures where engine and oracle were compared
  int agreed = 0;
  double max_relative_error = 0.0;  // quality only
  double seconds = 0.0;
  std::vector<int> failures;  // trial indices

  bool pass() const { return agreed == compared; }

  Json to_json() const {
    return {{"kind", kind},
            {"seed", seed},
            {"trials", trials},
            {"compared", compared},
            {"agreed", agreed},
            {"max_relative_error", max_relative_error},
            {"failures", failures},
            {"pass", pass()}};
  }
};

/// Contact count uniform in 1..6, friction uniform in [0.1, 1].
inline std::vector<Contact> random_fixture(Rng& rng) {
  const int count = 1 + static_cast<int>(rng.uniform() * 6);
  return random_sphere_contacts(rng, count, 0.1, 1.0);
}

/// Engine LP verdict against the ray-shooting oracle (m = 8 cone edges).
inline OracleReport run_force_closure_oracle(int trials, std::uint64_t seed) {
  OracleReport r;
  r.kind = "force-closure";
  r.seed = seed;
  r.trials = trials;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto cs = random_fixture(rng);
    const bool engine = dgr::force_closure(cs, Vec3::Zero());
    const auto w = dgr::grasp_wrenches(cs, Vec3::Zero(), 8);
    const bool ref = ray_shooting_force_closure(w);
    ++r.compared;
    if (engine == ref)
      ++r.agreed;
    else
      r.failures.push_back(t);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Engine inscribed q with m = 8 edges against a direction-sampling estimate
/// with m = 64 edges, on the fixtures the engine finds force closure. A
/// relative error above `tolerance` counts as a disagreement. The sampling
/// estimate approaches the true value from above, so this is approximate.
inline OracleReport run_quality_oracle(int trials, std::uint64_t seed, double tolerance = 0.10) {
  OracleReport r;
  r.kind = "quality";
  r.seed = seed;
  r.trials = trials;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto cs = random_fixture(rng);
    const auto s = dgr::evaluate_grasp(cs, Vec3::Zero(), 8);
    if (!s.force_closure) continue;
    const auto dense = dgr::grasp_wrenches(cs, Vec3::Zero(), 64);
    const double ref = direction_sampling_quality(dense, stream_seed(seed, static_cast<std::uint64_t>(t)));
    const double rel = ref > 0.0 ? std::abs(s.q - ref) / ref : (s.q > 0.0 ? 1.0 : 0.0);
    r.max_relative_error = std::max(r.max_relative_error, rel);
    ++r.compared;
    if (rel <= tolerance)
      ++r.agreed;
    else
      r.failures.push_back(t);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace dexgrasp::oracle
