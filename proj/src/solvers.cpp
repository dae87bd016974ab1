#include "peermatch/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "peermatch/random.hpp"
#include "peermatch/stability.hpp"

namespace peermatch {

Matching random_matching(const Instance& inst, std::uint64_t seed) {
  const std::size_t n = inst.padded_student_count();
  std::vector<StudentId> order(n);
  std::iota(order.begin(), order.end(), StudentId{0});
  Rng rng(seed);
  rng.shuffle(std::span<StudentId>(order));

  std::vector<HouseId> assignment(n, 0);
  std::size_t next = 0;
  for (HouseId h = 0; h < inst.house_count(); ++h) {
    for (std::size_t k = 0; k < inst.quota(h); ++k) assignment[order[next++]] = h;
  }
  return Matching::from_assignment(inst, std::move(assignment));
}

namespace {

struct Ascent {
  const Instance& inst;
  Matching mu;
  SolveTrace trace;
  double welfare;
  double phi;

  Ascent(const Instance& instance, const Matching& init)
      : inst(instance), mu(init), welfare(social_welfare(instance, init)),
        phi(potential(instance, init)) {
    trace.records.push_back({0, welfare, phi, false, 0, 0, welfare, 0});
    trace.best_welfare = welfare;
    trace.best_matching = mu;
  }

  void accept(StudentId s, StudentId t, const SwapDelta& d) {
    mu.swap_students(s, t);
    welfare += d.welfare;
    phi += d.potential;
    ++trace.accepted_swaps;
    trace.records.push_back(
        {trace.accepted_swaps, welfare, phi, true, s, t, welfare, trace.swap_evaluations});
    if (welfare > trace.best_welfare) {
      trace.best_welfare = welfare;
      trace.best_matching = mu;
    }
  }
};

// One sweep visits every unordered pair once, in the order induced by a fresh
// random permutation of the students. Returns the number of accepted swaps.
std::size_t first_improvement_sweep(Ascent& run, Rng& rng, std::vector<StudentId>& order,
                                    const GreedyConfig& cfg) {
  rng.shuffle(std::span<StudentId>(order));
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const StudentId s = order[i];
      const StudentId t = order[j];
      if (run.mu.house_of(s) == run.mu.house_of(t)) continue;
      ++run.trace.swap_evaluations;
      if (!assess_swap(run.inst, run.mu, s, t, cfg.epsilon).approved) continue;
      run.accept(std::min(s, t), std::max(s, t), welfare_delta(run.inst, run.mu, s, t));
      ++accepted;
      if (run.trace.accepted_swaps >= cfg.max_iterations) return accepted;
    }
  }
  return accepted;
}

bool best_improvement_step(Ascent& run, const GreedyConfig& cfg) {
  const std::size_t n = run.mu.student_count();
  bool found = false;
  StudentId best_s = 0;
  StudentId best_t = 0;
  SwapDelta best{};
  for (StudentId s = 0; s < n; ++s) {
    for (StudentId t = s + 1; t < n; ++t) {
      if (run.mu.house_of(s) == run.mu.house_of(t)) continue;
      ++run.trace.swap_evaluations;
      if (!assess_swap(run.inst, run.mu, s, t, cfg.epsilon).approved) continue;
      const SwapDelta d = welfare_delta(run.inst, run.mu, s, t);
      if (!found || d.potential > best.potential) {
        found = true;
        best_s = s;
        best_t = t;
        best = d;
      }
    }
  }
  if (found) run.accept(best_s, best_t, best);
  return found;
}

}  // namespace

SolveResult solve_greedy(const Instance& inst, const Matching& init, const GreedyConfig& cfg) {
  if (cfg.max_iterations == 0) throw Error(Errc::invalid_input, "max_iterations must be >= 1");
  Ascent run(inst, init);
  Rng rng(cfg.seed);
  std::vector<StudentId> order(init.student_count());
  std::iota(order.begin(), order.end(), StudentId{0});

  bool stable = false;
  while (run.trace.accepted_swaps < cfg.max_iterations) {
    const bool moved = cfg.pivot == PivotRule::first_improvement
                           ? first_improvement_sweep(run, rng, order, cfg) > 0
                           : best_improvement_step(run, cfg);
    if (!moved) {
      stable = true;
      break;
    }
  }
  if (!stable) stable = is_two_sided_exchange_stable(inst, run.mu, cfg.epsilon).stable;
  run.trace.terminated_reason = stable ? Termination::stable : Termination::iteration_cap;
  return {std::move(run.mu), std::move(run.trace)};
}

double acceptance_probability(double welfare_delta, double temperature) {
  return 1.0 / (1.0 + std::exp(-temperature * welfare_delta));
}

SolveResult solve_mcmc(const Instance& inst, const Matching& init, const McmcConfig& cfg) {
  if (!(cfg.temperature > 0.0)) throw Error(Errc::invalid_input, "temperature must be > 0");
  if (cfg.final_temperature && !(*cfg.final_temperature > 0.0)) {
    throw Error(Errc::invalid_input, "final temperature must be > 0");
  }
  if (cfg.max_iterations == 0) throw Error(Errc::invalid_input, "max_iterations must be >= 1");

  Ascent run(inst, init);
  Rng rng(cfg.seed);
  const std::size_t n = init.student_count();
  const bool has_cross_pair = inst.house_count() > 1;

  for (std::size_t it = 1; has_cross_pair && it <= cfg.max_iterations; ++it) {
    StudentId s = 0;
    StudentId t = 0;
    do {
      s = rng.uniform_index(n);
      t = rng.uniform_index(n);
    } while (s == t || run.mu.house_of(s) == run.mu.house_of(t));
    if (s > t) std::swap(s, t);

    double temperature = cfg.temperature;
    if (cfg.final_temperature) {
      const double frac = cfg.max_iterations > 1
                              ? static_cast<double>(it - 1) / static_cast<double>(cfg.max_iterations - 1)
                              : 0.0;
      temperature += frac * (*cfg.final_temperature - cfg.temperature);
    }

    const SwapDelta d = welfare_delta(inst, run.mu, s, t);
    const double proposal = run.welfare + d.welfare;
    const bool accepted = rng.uniform01() < acceptance_probability(d.welfare, temperature);
    ++run.trace.swap_evaluations;

    if (proposal > run.trace.best_welfare) {
      run.trace.best_welfare = proposal;
      run.trace.best_matching = apply_swap(run.mu, s, t);
    }
    if (accepted) {
      run.mu.swap_students(s, t);
      run.welfare = proposal;
      run.phi += d.potential;
      ++run.trace.accepted_swaps;
    }
    run.trace.records.push_back(
        {it, run.welfare, run.phi, accepted, s, t, proposal, run.trace.swap_evaluations});
  }
  run.trace.terminated_reason = Termination::iteration_cap;

  if (cfg.polish) {
    GreedyConfig greedy;
    greedy.seed = cfg.seed;
    SolveResult polished = solve_greedy(inst, run.trace.best_matching, greedy);
    run.trace.polished = true;
    run.trace.terminated_reason = polished.trace.terminated_reason;
    run.trace.swap_evaluations += polished.trace.swap_evaluations;
    return {std::move(polished.matching), std::move(run.trace)};
  }
  return {std::move(run.mu), std::move(run.trace)};
}

Matching polish(const Instance& inst, const Matching& mu) {
  return solve_greedy(inst, mu, GreedyConfig{}).matching;
}

}  // namespace peermatch
