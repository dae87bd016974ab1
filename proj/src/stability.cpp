#include "peermatch/stability.hpp"

#include <cmath>
#include <string>

namespace peermatch {

namespace {

// Shared by both checkers so the one- and two-sided verdicts round identically.
double move_benefit(const Instance& inst, const Matching& mu, StudentId s, HouseId from,
                    HouseId to) {
  return inst.desirability(s, to) - inst.desirability(s, from) +
         weight_to_house(inst, mu, s, to) - weight_to_house(inst, mu, s, from);
}

}  // namespace

SwapAssessment assess_swap(const Instance& inst, const Matching& mu, StudentId s, StudentId t,
                           double eps) {
  if (s >= mu.student_count() || t >= mu.student_count()) {
    throw Error(Errc::invalid_student, std::to_string(s >= mu.student_count() ? s : t));
  }
  SwapAssessment a;
  a.s = s;
  a.t = t;
  a.house_s = mu.house_of(s);
  a.house_t = mu.house_of(t);
  if (a.house_s == a.house_t) {
    throw Error(Errc::same_house, std::to_string(s) + "," + std::to_string(t));
  }
  const HouseId h = a.house_s;
  const HouseId g = a.house_t;
  const double w_st = inst.network().weight(s, t);

  a.delta_s = move_benefit(inst, mu, s, h, g) - w_st;
  a.delta_t = move_benefit(inst, mu, t, g, h) - w_st;

  switch (inst.scoring().mode()) {
    case HouseScoring::Mode::zero: break;
    case HouseScoring::Mode::additive:
      a.delta_house_s = inst.score(t, h) - inst.score(s, h);
      a.delta_house_t = inst.score(s, g) - inst.score(t, g);
      break;
    case HouseScoring::Mode::custom: {
      const Matching after = apply_swap(mu, s, t);
      a.delta_house_s = house_utility(inst, after, h) - house_utility(inst, mu, h);
      a.delta_house_t = house_utility(inst, after, g) - house_utility(inst, mu, g);
      break;
    }
  }

  const double deltas[] = {a.delta_s, a.delta_t, a.delta_house_s, a.delta_house_t};
  bool weakly_better = true;
  for (double d : deltas) {
    if (d < -eps) weakly_better = false;
    if (d > eps) a.strict_improver_exists = true;
  }
  a.approved = weakly_better && a.strict_improver_exists;
  return a;
}

StabilityReport is_two_sided_exchange_stable(const Instance& inst, const Matching& mu,
                                             double eps) {
  StabilityReport report;
  const std::size_t n = mu.student_count();
  for (StudentId s = 0; s < n; ++s) {
    for (StudentId t = s + 1; t < n; ++t) {
      if (mu.house_of(s) == mu.house_of(t)) continue;
      ++report.pairs_checked;
      if (assess_swap(inst, mu, s, t, eps).approved) {
        report.stable = false;
        report.witness = {s, t};
        return report;
      }
    }
  }
  return report;
}

double alpha(const Instance& inst, const Matching& mu, StudentId s, HouseId g) {
  const HouseId h = mu.house_of(s);
  if (g == h) throw Error(Errc::own_house, std::to_string(s) + " already in " + std::to_string(g));
  if (g >= inst.house_count()) throw Error(Errc::invalid_input, "house " + std::to_string(g));
  return move_benefit(inst, mu, s, h, g);
}

StabilityReport is_one_sided_exchange_stable(const Instance& inst, const Matching& mu,
                                             double eps) {
  if (!inst.scoring().is_zero()) {
    throw Error(Errc::houses_active, "one-sided stability needs zero house scoring");
  }
  StabilityReport report;
  const std::size_t n = mu.student_count();
  for (StudentId s = 0; s < n; ++s) {
    for (StudentId t = s + 1; t < n; ++t) {
      const HouseId h = mu.house_of(s);
      const HouseId g = mu.house_of(t);
      if (h == g) continue;
      ++report.pairs_checked;
      const double w = inst.network().weight(s, t);
      const double gain_s = alpha(inst, mu, s, g) - w;
      const double gain_t = alpha(inst, mu, t, h) - w;
      const bool s_refuses = gain_s < -eps;
      const bool t_refuses = gain_t < -eps;
      const bool indifferent = std::abs(gain_s) <= eps && std::abs(gain_t) <= eps;
      if (!(s_refuses || t_refuses || indifferent)) {
        report.stable = false;
        report.witness = {s, t};
        return report;
      }
    }
  }
  return report;
}

}  // namespace peermatch
