#pragma once

// Instance generators: the unbounded price-of-anarchy family, the family on
// which the unweighted bound is tight, and seeded random markets.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "peermatch/market.hpp"

namespace peermatch {

/// Four students, two houses of quota 2, D = 0, one-sided. The optimum has
/// welfare k while {s1,s3 | s2,s4} is stable with welfare 2. Verified with
/// the oracle before returning. Errors: InvalidInput (k <= 2), SelfCheckFailed.
InstanceConfig generate_unbounded_poa(double k);
std::vector<HouseId> unbounded_poa_optimal_assignment();
std::vector<HouseId> unbounded_poa_stable_assignment();

/// m houses of quota m*k over an m x m grid of k-student clusters. In every
/// row the middle cluster is joined to all other students of the row; the
/// middle column's house has D = k + 1, all others 0. Rows capture every edge,
/// columns cut every edge yet are stable.
/// Errors: InvalidInput (m < 2 or k <= 2), SelfCheckFailed.
InstanceConfig generate_tight_example(std::size_t m, std::size_t k);
std::vector<HouseId> tight_example_row_assignment(std::size_t m, std::size_t k);
std::vector<HouseId> tight_example_column_assignment(std::size_t m, std::size_t k);

struct WeightModel {
  enum class Kind { unweighted, uniform, integer };
  Kind kind = Kind::unweighted;
  double p = 0.2;       // edge probability
  double low = 0.0;     // uniform weights
  double high = 1.0;
  int max_weight = 3;   // integer weights in 1..max_weight

  static WeightModel unit(double p) { return {Kind::unweighted, p}; }
};

enum class QuotaRule {
  equal_split,  // remainder to the first houses
  explicit_list,
};

enum class DesirabilityModel {
  zero,
  objective_uniform,   // D_h ~ U[0, 10]
  objective_integer,   // D_h uniform on {0, ..., 10}
  per_student_uniform, // D^s_h ~ U[0, 10]
};

enum class ScoringModel {
  zero,
  additive_uniform,  // score(s, h) ~ U[0, 10]
};

struct RandomInstanceSpec {
  std::size_t n = 10;
  std::size_t m = 2;
  std::uint64_t seed = 0;
  WeightModel weights;
  QuotaRule quota_rule = QuotaRule::equal_split;
  std::vector<std::size_t> quotas;  // explicit_list only
  DesirabilityModel desirability = DesirabilityModel::objective_uniform;
  ScoringModel scoring = ScoringModel::zero;
};

std::vector<std::size_t> equal_split_quotas(std::size_t n, std::size_t m);

/// Deterministic in the spec. Errors: InvalidInput.
InstanceConfig generate_random_instance(const RandomInstanceSpec& spec);

}  // namespace peermatch
