#pragma once

// Swap approval and exchange stability.

#include <cstddef>
#include <optional>
#include <utility>

#include "peermatch/market.hpp"

namespace peermatch {

/// Utility changes of the four agents touched by mu_s^t.
struct SwapAssessment {
  StudentId s = 0;
  StudentId t = 0;
  HouseId house_s = 0;  // mu(s) before the swap
  HouseId house_t = 0;  // mu(t) before the swap
  double delta_s = 0.0;
  double delta_t = 0.0;
  double delta_house_s = 0.0;
  double delta_house_t = 0.0;
  /// every delta >= -eps and at least one > eps
  bool approved = false;
  bool strict_improver_exists = false;
};

struct StabilityReport {
  bool stable = true;
  std::optional<std::pair<StudentId, StudentId>> witness;
  std::size_t pairs_checked = 0;
};

/// Errors: SameHouse, InvalidStudent.
SwapAssessment assess_swap(const Instance& inst, const Matching& mu, StudentId s, StudentId t,
                           double eps = kDefaultEpsilon);

/// Scans unordered cross-house pairs (s < t, holes included) in lexicographic
/// order and reports the first approved swap.
StabilityReport is_two_sided_exchange_stable(const Instance& inst, const Matching& mu,
                                             double eps = kDefaultEpsilon);

/// Benefit of s moving to house g:
///   D^s_g - D^s_{mu(s)} + w(s, mu(g)) - w(s, mu^2(s)).
/// U_s(mu_s^t) - U_s(mu) == alpha(s, mu(t)) - w(s, t). Errors: OwnHouse.
double alpha(const Instance& inst, const Matching& mu, StudentId s, HouseId g);

/// One-sided exchange stability phrased through alpha: every cross pair must
/// have s or t strictly refusing, or both exactly indifferent.
/// Errors: HousesActive unless the house scoring is zero.
StabilityReport is_one_sided_exchange_stable(const Instance& inst, const Matching& mu,
                                             double eps = kDefaultEpsilon);

}  // namespace peermatch
