#pragma once

// Greedy approved-swap ascent and the MCMC heat bath over welfare.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "peermatch/market.hpp"

namespace peermatch {

enum class PivotRule {
  first_improvement,  // first approved swap in a pair order re-shuffled every sweep
  best_improvement,   // approved swap with the largest potential gain
};

struct GreedyConfig {
  std::size_t max_iterations = 1'000'000;  // accepted swaps
  PivotRule pivot = PivotRule::first_improvement;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
};

struct McmcConfig {
  std::size_t max_iterations = 100'000;  // proposals
  double temperature = 1.0;
  std::uint64_t seed = 0;
  bool polish = false;
  /// When set, the temperature moves linearly from `temperature` to this
  /// value over the run. Off by default.
  std::optional<double> final_temperature;
};

enum class Termination { stable, iteration_cap };

struct TraceRecord {
  std::size_t iteration = 0;
  double welfare = 0.0;    // W of the current matching after this step
  double potential = 0.0;  // Phi of the current matching after this step
  bool accepted = false;
  StudentId s = 0;  // proposed pair; (0, 0) on the initial record
  StudentId t = 0;
  double proposal_welfare = 0.0;  // W(mu_s^t) of the proposal
  std::size_t evaluations = 0;    // cumulative swap evaluations
};

struct SolveTrace {
  /// Record 0 is the starting matching.
  std::vector<TraceRecord> records;
  double best_welfare = 0.0;
  Matching best_matching;
  Termination terminated_reason = Termination::iteration_cap;
  std::size_t accepted_swaps = 0;
  std::size_t swap_evaluations = 0;
  bool polished = false;
};

struct SolveResult {
  Matching matching;
  SolveTrace trace;
};

/// Shuffles the padded students and fills rosters in house order.
Matching random_matching(const Instance& inst, std::uint64_t seed);

SolveResult solve_greedy(const Instance& inst, const Matching& init, const GreedyConfig& cfg = {});

/// Logistic acceptance 1 / (1 + exp(-T * dW)).
double acceptance_probability(double welfare_delta, double temperature);

/// Errors: InvalidInput for a non-positive temperature or zero iterations.
SolveResult solve_mcmc(const Instance& inst, const Matching& init, const McmcConfig& cfg = {});

/// Greedy with the default configuration; the result is two-sided exchange-stable.
Matching polish(const Instance& inst, const Matching& mu);

}  // namespace peermatch
