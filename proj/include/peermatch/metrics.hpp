#pragma once

// Edge metrics, clustering (gamma), the Q ratio, price-of-anarchy bounds and
// the inequality checks the bounds rest on.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peermatch/market.hpp"

namespace peermatch {

struct PartitionMetrics {
  std::size_t house_count = 0;
  double total_edge_weight = 0.0;  // |E|
  double internal_weight = 0.0;    // E_in = sum_h E_hh
  /// Row-major house x house. Off-diagonal E_hg = sum over s in h, t in g;
  /// diagonal E_hh counts each internal edge once.
  std::vector<double> cross_weights;
  double gamma = 0.0;  // E_in / |E|, 0 for an empty network

  double cross(HouseId h, HouseId g) const { return cross_weights[h * house_count + g]; }
};

PartitionMetrics partition_metrics(const Instance& inst, const Matching& mu);

/// max gamma over quota-exact matchings by enumeration. Errors: TooLarge.
double gamma_star_exact(const Instance& inst, std::size_t student_cap = 12);

struct GammaHeuristicConfig {
  std::size_t restarts = 3;
  std::size_t mcmc_iterations = 20'000;
  double temperature = 2.0;  // in units of 1 / max edge weight
  std::uint64_t seed = 0;
};

/// Lower bound on gamma*: greedy and polished MCMC runs on the instance with
/// D = 0 and no house scoring, where welfare is 2 E_in.
double gamma_star_heuristic(const Instance& inst, const GammaHeuristicConfig& cfg = {});

/// sum_h q_h D_h / (2|E|). Errors: EmptyNetwork, HypothesisViolated.
double q_ratio(const Instance& inst);

/// Names of the failed hypotheses of the unweighted bound (empty when all hold).
std::vector<std::string> simple_bound_violations(const Instance& inst);
/// Names of the failed hypotheses of the general (weighted) setting.
std::vector<std::string> general_setting_violations(const Instance& inst);

std::size_t max_quota(const Instance& inst);
/// Smallest gap between consecutive sorted D_h; empty with one house.
std::optional<double> desirability_gap(const Instance& inst);

/// 1 + 2(m-1) gamma*. Errors: HypothesisViolated naming the failed hypotheses.
double poa_bound_simple(const Instance& inst, double gamma_star);

/// 1 + 2(m-1)(gamma* + q_max w_max / D_delta).
/// Errors: HypothesisViolated, DegenerateDelta when two houses share a D value.
double poa_bound_general(const Instance& inst, double gamma_star);

struct BoundReport {
  std::size_t m = 0;
  std::optional<double> q_ratio;
  double gamma_star = 0.0;
  bool gamma_star_exact = false;
  std::size_t q_max = 0;
  double w_max = 0.0;
  std::optional<double> d_delta;
  std::optional<double> bound_simple;
  std::vector<std::string> simple_violations;
  std::optional<double> bound_general;
  std::string general_error;  // empty when bound_general is set
};

BoundReport bound_report(const Instance& inst, double gamma_star, bool gamma_star_exact);

struct CrossEdgeCheck {
  HouseId h = 0;
  HouseId g = 0;
  double cross = 0.0;  // E_hg
  double limit = 0.0;
  bool pass = true;
};

struct CrossEdgeReport {
  bool general_form = false;    // true: the + q_max w_max slack is included
  bool matching_stable = true;  // the stability precondition, checked not assumed
  std::vector<CrossEdgeCheck> pairs;
  bool all_pass = true;
};

/// E_hg <= max(q_h(D_h-D_g), q_g(D_g-D_h)) + 2(E_hh + E_gg) [+ q_max w_max]
/// for every pair of houses. Errors: HypothesisViolated.
CrossEdgeReport check_cross_edge_bound(const Instance& inst, const Matching& mu);

struct GammaBoundCheck {
  double gamma = 0.0;
  double bound = 0.0;
  bool general_form = false;
  bool matching_stable = true;
  bool pass = true;
};

/// gamma(mu) >= max((E - sum_{g<h} q_h(D_h-D_g) [- C(m,2) q_max w_max]) / ((2m-1)E), 0)
/// with houses ordered by D. Errors: HypothesisViolated.
GammaBoundCheck check_gamma_lower_bound(const Instance& inst, const Matching& mu);

/// sum_{g<h} q_h(D_h-D_g) over D-sorted houses.
double ordered_gap_mass(std::span<const std::size_t> quotas, std::span<const double> values);

struct RatioCheck {
  double ratio = 0.0;
  double limit = 0.0;
  bool pass = true;
};

/// sum_{g<h} q_h(D_h-D_g) / sum_h q_h D_h <= m - 1 (0/0 counts as 0).
RatioCheck check_m_minus_one_bound(std::span<const std::size_t> quotas,
                                   std::span<const double> values);

}  // namespace peermatch
