#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "peermatch/generators.hpp"
#include "peermatch/market.hpp"
#include "peermatch/random.hpp"

namespace fixtures {

using namespace peermatch;

// Two pairs of close friends; house 0 is the desirable one.
inline InstanceConfig instance_a(bool scored = false) {
  InstanceConfig c;
  c.students = 4;
  c.houses = {{0, 2, 2.0}, {1, 2, 0.0}};
  c.edges = {{0, 1, 3.0}, {2, 3, 3.0}};
  if (scored) c.scoring = HouseScoring::additive(std::vector<std::vector<double>>(4, {1.0, 1.0}));
  return c;
}

inline InstanceConfig triangle() {
  InstanceConfig c;
  c.students = 3;
  c.houses = {{0, 2, 0.0}, {1, 1, 0.0}};
  c.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  return c;
}

/// Small random market with every optional feature switched by the seed:
/// weighted edges, holes, per-student desirability, additive house scores.
inline InstanceConfig random_small(std::uint64_t seed, std::size_t max_n = 8, std::size_t max_m = 3,
                                   bool allow_holes = true, bool general = true) {
  Rng rng(seed * 7919 + 17);
  RandomInstanceSpec spec;
  spec.seed = seed;
  spec.m = 1 + rng.uniform_index(max_m);
  const std::size_t min_n = std::max<std::size_t>(2, spec.m);
  spec.n = min_n + rng.uniform_index(max_n - min_n + 1);
  spec.weights.kind = rng.uniform_index(2) ? WeightModel::Kind::uniform : WeightModel::Kind::unweighted;
  spec.weights.p = 0.2 + 0.6 * rng.uniform01();
  spec.weights.low = 0.0;
  spec.weights.high = 5.0;
  if (allow_holes && rng.uniform_index(2)) {
    spec.quota_rule = QuotaRule::explicit_list;
    spec.quotas = equal_split_quotas(spec.n, spec.m);
    const std::size_t extra = 1 + rng.uniform_index(2);
    for (std::size_t i = 0; i < extra; ++i) ++spec.quotas[rng.uniform_index(spec.m)];
  }
  if (general) {
    spec.desirability = rng.uniform_index(2) ? DesirabilityModel::per_student_uniform
                                             : DesirabilityModel::objective_uniform;
    spec.scoring = rng.uniform_index(2) ? ScoringModel::additive_uniform : ScoringModel::zero;
  }
  return generate_random_instance(spec);
}

}  // namespace fixtures
