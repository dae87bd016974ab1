#pragma once

// Exhaustive ground truth on desk-sized instances.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "peermatch/market.hpp"

namespace peermatch {

struct EnumerationLimits {
  std::size_t max_students = 12;
  std::uint64_t max_matchings = 10'000'000;
};

enum class EnumerationMode {
  labeled,   // every quota-exact assignment once
  quotient,  // one representative per relabeling of interchangeable houses
};

/// True when all houses share quota, desirability column and scoring, so
/// permuting house labels cannot change any utility.
bool houses_interchangeable(const Instance& inst);

/// n! / prod_h q_h! (divided by m! in quotient mode); saturates at UINT64_MAX.
std::uint64_t count_matchings(const Instance& inst,
                              EnumerationMode mode = EnumerationMode::labeled);

/// Calls `visit` once per matching. Errors: TooLarge past the limits;
/// InvalidInput for quotient mode on non-interchangeable houses.
void for_each_matching(const Instance& inst, const std::function<void(const Matching&)>& visit,
                       const EnumerationLimits& limits = {},
                       EnumerationMode mode = EnumerationMode::labeled);

std::vector<Matching> enumerate_matchings(const Instance& inst,
                                          const EnumerationLimits& limits = {});

struct ExactOptions {
  EnumerationLimits limits;
  double epsilon = kDefaultEpsilon;
  bool collect_stable = false;
};

struct ExactSummary {
  std::uint64_t matchings_enumerated = 0;
  std::uint64_t stable_count = 0;
  double max_welfare = 0.0;
  double max_stable_welfare = 0.0;
  double min_stable_welfare = 0.0;
  double exact_poa = 1.0;  // max W / min stable W
  double exact_pos = 1.0;  // max W / max stable W
  double gamma_star = 0.0;
  double min_stable_gamma = 0.0;
  /// (Q + gamma*) / (Q + min stable gamma); set for one-sided, objective,
  /// quota-exact instances with edges.
  std::optional<double> poa_via_gamma;
  Matching argmax_welfare;
  Matching argmax_stable;
  Matching argmin_stable;
  std::vector<Matching> stable_matchings;  // filled when collect_stable
};

ExactSummary exact_extremes(const Instance& inst, const ExactOptions& options = {});

/// No single swap (student-student or student-hole) raises Phi / W by more
/// than eps.
bool is_potential_local_max(const Instance& inst, const Matching& mu,
                            double eps = kDefaultEpsilon);
bool is_welfare_local_max(const Instance& inst, const Matching& mu, double eps = kDefaultEpsilon);

struct MaximaCheck {
  bool pass = true;
  std::uint64_t matchings = 0;
  std::uint64_t local_maxima = 0;
  std::optional<Matching> counterexample;
  bool global_max_stable = true;  // welfare check only
  double exact_pos = 1.0;         // welfare check only
};

/// Every local maximum of the potential is two-sided exchange-stable.
MaximaCheck verify_potential_maxima(const Instance& inst, const EnumerationLimits& limits = {});

/// With exact quotas and objective desirability every local maximum of the
/// welfare is stable, so the price of stability is 1.
/// Errors: HypothesisViolated, TooLarge.
MaximaCheck verify_welfare_maxima(const Instance& inst, const EnumerationLimits& limits = {});

}  // namespace peermatch
