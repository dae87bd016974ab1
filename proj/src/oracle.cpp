#include "peermatch/oracle.hpp"

#include <limits>
#include <string>

#include "peermatch/metrics.hpp"
#include "peermatch/stability.hpp"

namespace peermatch {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_binomial(std::uint64_t n, std::uint64_t k) {
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > kSaturated ? kSaturated : static_cast<std::uint64_t>(p);
}

class Enumerator {
public:
  Enumerator(const Instance& inst, const std::function<void(const Matching&)>& visit, bool quotient)
      : inst_(inst), visit_(visit), quotient_(quotient),
        assignment_(inst.padded_student_count(), 0), filled_(inst.house_count(), 0) {}

  void run() { place(0); }

private:
  void place(StudentId s) {
    if (s == assignment_.size()) {
      visit_(Matching::from_assignment(inst_, assignment_));
      return;
    }
    bool opened_empty = false;
    for (HouseId h = 0; h < filled_.size(); ++h) {
      if (filled_[h] == inst_.quota(h)) continue;
      if (quotient_ && filled_[h] == 0) {
        // Houses are interchangeable: only the first empty one may be opened.
        if (opened_empty) continue;
        opened_empty = true;
      }
      assignment_[s] = h;
      ++filled_[h];
      place(s + 1);
      --filled_[h];
    }
  }

  const Instance& inst_;
  const std::function<void(const Matching&)>& visit_;
  bool quotient_;
  std::vector<HouseId> assignment_;
  std::vector<std::size_t> filled_;
};

double ratio(double numerator, double denominator) {
  if (numerator == 0.0) return 1.0;
  if (denominator <= 0.0) return std::numeric_limits<double>::infinity();
  return numerator / denominator;
}

}  // namespace

bool houses_interchangeable(const Instance& inst) {
  const std::size_t m = inst.house_count();
  if (inst.scoring().mode() == HouseScoring::Mode::custom) return false;
  for (HouseId h = 1; h < m; ++h) {
    if (inst.quota(h) != inst.quota(0)) return false;
    for (StudentId s = 0; s < inst.real_student_count(); ++s) {
      if (inst.desirability(s, h) != inst.desirability(s, 0)) return false;
      if (inst.score(s, h) != inst.score(s, 0)) return false;
    }
  }
  return true;
}

std::uint64_t count_matchings(const Instance& inst, EnumerationMode mode) {
  std::uint64_t remaining = inst.padded_student_count();
  std::uint64_t total = 1;
  for (HouseId h = 0; h < inst.house_count(); ++h) {
    total = saturating_mul(total, saturating_binomial(remaining, inst.quota(h)));
    remaining -= inst.quota(h);
  }
  if (mode == EnumerationMode::quotient && total != kSaturated) {
    for (std::uint64_t k = 2; k <= inst.house_count(); ++k) total /= k;
  }
  return total;
}

void for_each_matching(const Instance& inst, const std::function<void(const Matching&)>& visit,
                       const EnumerationLimits& limits, EnumerationMode mode) {
  if (inst.padded_student_count() > limits.max_students) {
    throw Error(Errc::too_large, std::to_string(inst.padded_student_count()) +
                                     " students exceed the cap of " +
                                     std::to_string(limits.max_students));
  }
  const std::uint64_t count = count_matchings(inst, mode);
  if (count > limits.max_matchings) {
    throw Error(Errc::too_large, std::to_string(count) + " matchings exceed the cap of " +
                                     std::to_string(limits.max_matchings));
  }
  const bool quotient = mode == EnumerationMode::quotient;
  if (quotient && !houses_interchangeable(inst)) {
    throw Error(Errc::invalid_input, "quotient enumeration needs interchangeable houses");
  }
  Enumerator(inst, visit, quotient).run();
}

std::vector<Matching> enumerate_matchings(const Instance& inst, const EnumerationLimits& limits) {
  std::vector<Matching> out;
  for_each_matching(inst, [&](const Matching& mu) { out.push_back(mu); }, limits);
  return out;
}

ExactSummary exact_extremes(const Instance& inst, const ExactOptions& options) {
  ExactSummary summary;
  bool first = true;
  bool first_stable = true;
  for_each_matching(
      inst,
      [&](const Matching& mu) {
        ++summary.matchings_enumerated;
        const double w = social_welfare(inst, mu);
        const double gamma = partition_metrics(inst, mu).gamma;
        if (first || w > summary.max_welfare) {
          summary.max_welfare = w;
          summary.argmax_welfare = mu;
        }
        if (first || gamma > summary.gamma_star) summary.gamma_star = gamma;
        first = false;

        if (!is_two_sided_exchange_stable(inst, mu, options.epsilon).stable) return;
        ++summary.stable_count;
        if (options.collect_stable) summary.stable_matchings.push_back(mu);
        if (first_stable || w > summary.max_stable_welfare) {
          summary.max_stable_welfare = w;
          summary.argmax_stable = mu;
        }
        if (first_stable || w < summary.min_stable_welfare) {
          summary.min_stable_welfare = w;
          summary.argmin_stable = mu;
        }
        if (first_stable || gamma < summary.min_stable_gamma) summary.min_stable_gamma = gamma;
        first_stable = false;
      },
      options.limits);

  summary.exact_poa = ratio(summary.max_welfare, summary.min_stable_welfare);
  summary.exact_pos = ratio(summary.max_welfare, summary.max_stable_welfare);

  if (inst.scoring().is_zero() && inst.objective_desirability() && inst.exact_quotas() &&
      inst.network().total_weight() > 0.0 && summary.stable_count > 0) {
    const double q = q_ratio(inst);
    summary.poa_via_gamma = (q + summary.gamma_star) / (q + summary.min_stable_gamma);
  }
  return summary;
}

bool is_potential_local_max(const Instance& inst, const Matching& mu, double eps) {
  const std::size_t n = mu.student_count();
  for (StudentId s = 0; s < n; ++s) {
    for (StudentId t = s + 1; t < n; ++t) {
      if (mu.house_of(s) == mu.house_of(t)) continue;
      if (welfare_delta(inst, mu, s, t).potential > eps) return false;
    }
  }
  return true;
}

bool is_welfare_local_max(const Instance& inst, const Matching& mu, double eps) {
  const std::size_t n = mu.student_count();
  for (StudentId s = 0; s < n; ++s) {
    for (StudentId t = s + 1; t < n; ++t) {
      if (mu.house_of(s) == mu.house_of(t)) continue;
      if (welfare_delta(inst, mu, s, t).welfare > eps) return false;
    }
  }
  return true;
}

MaximaCheck verify_potential_maxima(const Instance& inst, const EnumerationLimits& limits) {
  MaximaCheck check;
  for_each_matching(
      inst,
      [&](const Matching& mu) {
        ++check.matchings;
        if (!is_potential_local_max(inst, mu)) return;
        ++check.local_maxima;
        if (check.pass && !is_two_sided_exchange_stable(inst, mu).stable) {
          check.pass = false;
          check.counterexample = mu;
        }
      },
      limits);
  return check;
}

MaximaCheck verify_welfare_maxima(const Instance& inst, const EnumerationLimits& limits) {
  if (!inst.exact_quotas()) throw Error(Errc::hypothesis_violated, "exact_quotas");
  if (!inst.objective_desirability()) {
    throw Error(Errc::hypothesis_violated, "objective_desirability");
  }
  MaximaCheck check;
  double max_welfare = 0.0;
  double max_stable = 0.0;
  bool first = true;
  bool first_stable = true;
  bool argmax_stable = false;
  for_each_matching(
      inst,
      [&](const Matching& mu) {
        ++check.matchings;
        const double w = social_welfare(inst, mu);
        const bool stable = is_two_sided_exchange_stable(inst, mu).stable;
        if (first || w > max_welfare) {
          max_welfare = w;
          argmax_stable = stable;
        }
        first = false;
        if (stable && (first_stable || w > max_stable)) {
          max_stable = w;
          first_stable = false;
        }
        if (!is_welfare_local_max(inst, mu)) return;
        ++check.local_maxima;
        if (check.pass && !stable) {
          check.pass = false;
          check.counterexample = mu;
        }
      },
      limits);
  check.global_max_stable = argmax_stable;
  check.exact_pos = first_stable ? std::numeric_limits<double>::infinity()
                                 : ratio(max_welfare, max_stable);
  check.pass = check.pass && check.global_max_stable;
  return check;
}

}  // namespace peermatch
