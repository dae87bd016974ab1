#include "peermatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peermatch/oracle.hpp"
#include "peermatch/solvers.hpp"
#include "peermatch/stability.hpp"

namespace peermatch {

namespace {

constexpr double kCheckTolerance = 1e-9;

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
  return out;
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

void require_general_setting(const Instance& inst) {
  const auto violations = general_setting_violations(inst);
  if (!violations.empty()) throw Error(Errc::hypothesis_violated, join(violations));
}

std::vector<std::size_t> quotas_of(const Instance& inst) {
  std::vector<std::size_t> q(inst.house_count());
  for (HouseId h = 0; h < q.size(); ++h) q[h] = inst.quota(h);
  return q;
}

std::vector<double> values_of(const Instance& inst) {
  std::vector<double> d(inst.house_count());
  for (HouseId h = 0; h < d.size(); ++h) d[h] = inst.house_value(h);
  return d;
}

}  // namespace

PartitionMetrics partition_metrics(const Instance& inst, const Matching& mu) {
  PartitionMetrics pm;
  const std::size_t m = inst.house_count();
  pm.house_count = m;
  pm.cross_weights.assign(m * m, 0.0);
  const auto& net = inst.network();
  for (StudentId s = 0; s < net.student_count(); ++s) {
    const HouseId h = mu.house_of(s);
    for (const auto& n : net.neighbors(s)) {
      if (n.student < s) continue;
      const HouseId g = mu.house_of(n.student);
      if (h == g) {
        pm.cross_weights[h * m + h] += n.weight;
      } else {
        pm.cross_weights[h * m + g] += n.weight;
        pm.cross_weights[g * m + h] += n.weight;
      }
    }
  }
  pm.total_edge_weight = net.total_weight();
  for (HouseId h = 0; h < m; ++h) pm.internal_weight += pm.cross_weights[h * m + h];
  pm.gamma = pm.total_edge_weight > 0.0 ? pm.internal_weight / pm.total_edge_weight : 0.0;
  return pm;
}

double gamma_star_exact(const Instance& inst, std::size_t student_cap) {
  if (inst.network().total_weight() == 0.0) return 0.0;
  EnumerationLimits limits;
  limits.max_students = student_cap;
  // gamma only depends on who shares a house, so equal quotas allow the
  // quotient enumeration whatever the desirabilities are.
  std::vector<std::size_t> q = quotas_of(inst);
  const bool equal_quotas = std::all_of(q.begin(), q.end(), [&](std::size_t v) { return v == q[0]; });
  InstanceConfig bare;
  bare.students = inst.padded_student_count();
  for (HouseId h = 0; h < q.size(); ++h) bare.houses.push_back({static_cast<std::int64_t>(h), q[h], 0.0});
  bare.edges = inst.network().edges();
  const Instance shape = build_instance(bare);

  double best = 0.0;
  for_each_matching(
      shape, [&](const Matching& mu) { best = std::max(best, partition_metrics(shape, mu).gamma); },
      limits, equal_quotas ? EnumerationMode::quotient : EnumerationMode::labeled);
  return best;
}

double gamma_star_heuristic(const Instance& inst, const GammaHeuristicConfig& cfg) {
  const double total = inst.network().total_weight();
  if (total == 0.0) return 0.0;

  InstanceConfig bare;
  bare.students = inst.padded_student_count();
  for (HouseId h = 0; h < inst.house_count(); ++h) {
    bare.houses.push_back({static_cast<std::int64_t>(h), inst.quota(h), 0.0});
  }
  bare.edges = inst.network().edges();
  const Instance shape = build_instance(bare);

  double best_internal = 0.0;
  const std::size_t restarts = std::max<std::size_t>(cfg.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::uint64_t seed = cfg.seed + 2 * r;
    GreedyConfig greedy;
    greedy.seed = seed;
    const auto g = solve_greedy(shape, random_matching(shape, seed), greedy);
    best_internal = std::max(best_internal, partition_metrics(shape, g.matching).internal_weight);

    McmcConfig mcmc;
    mcmc.seed = seed + 1;
    mcmc.max_iterations = std::max<std::size_t>(cfg.mcmc_iterations, 1);
    mcmc.temperature = cfg.temperature / inst.network().max_weight();
    mcmc.polish = true;
    const auto c = solve_mcmc(shape, random_matching(shape, seed + 1), mcmc);
    best_internal = std::max(best_internal, partition_metrics(shape, c.matching).internal_weight);
    best_internal =
        std::max(best_internal, partition_metrics(shape, c.trace.best_matching).internal_weight);
  }
  return best_internal / total;
}

double q_ratio(const Instance& inst) {
  if (!inst.objective_desirability()) {
    throw Error(Errc::hypothesis_violated, "objective_desirability");
  }
  const double e = inst.network().total_weight();
  if (e == 0.0) throw Error(Errc::empty_network, "Q is undefined without edges");
  double mass = 0.0;
  for (HouseId h = 0; h < inst.house_count(); ++h) {
    mass += static_cast<double>(inst.quota(h)) * inst.house_value(h);
  }
  return mass / (2.0 * e);
}

std::vector<std::string> general_setting_violations(const Instance& inst) {
  std::vector<std::string> out;
  if (!inst.scoring().is_zero()) out.emplace_back("zero_house_scoring");
  if (!inst.objective_desirability()) out.emplace_back("objective_desirability");
  if (!inst.exact_quotas()) out.emplace_back("exact_quotas");
  return out;
}

std::vector<std::string> simple_bound_violations(const Instance& inst) {
  std::vector<std::string> out = general_setting_violations(inst);
  if (!inst.network().unit_weights()) out.emplace_back("unit_weights");
  const auto q = quotas_of(inst);
  const auto d = values_of(inst);
  if (std::any_of(q.begin(), q.end(), [](std::size_t v) { return v < 2; })) {
    out.emplace_back("quota_at_least_two");
  }
  if (!std::all_of(d.begin(), d.end(), is_integer)) out.emplace_back("integer_desirability");
  const bool equal_q = std::all_of(q.begin(), q.end(), [&](std::size_t v) { return v == q[0]; });
  const bool equal_d = std::all_of(d.begin(), d.end(), [&](double v) { return v == d[0]; });
  if (!equal_q && !equal_d) out.emplace_back("equal_quotas_or_equal_desirability");
  return out;
}

std::size_t max_quota(const Instance& inst) {
  std::size_t q = 0;
  for (HouseId h = 0; h < inst.house_count(); ++h) q = std::max(q, inst.quota(h));
  return q;
}

std::optional<double> desirability_gap(const Instance& inst) {
  if (inst.house_count() < 2) return std::nullopt;
  std::vector<double> d = values_of(inst);
  std::sort(d.begin(), d.end());
  double gap = d[1] - d[0];
  for (std::size_t i = 2; i < d.size(); ++i) gap = std::min(gap, d[i] - d[i - 1]);
  return gap;
}

double poa_bound_simple(const Instance& inst, double gamma_star) {
  const auto violations = simple_bound_violations(inst);
  if (!violations.empty()) throw Error(Errc::hypothesis_violated, join(violations));
  const double m = static_cast<double>(inst.house_count());
  return 1.0 + 2.0 * (m - 1.0) * gamma_star;
}

double poa_bound_general(const Instance& inst, double gamma_star) {
  require_general_setting(inst);
  const auto gap = desirability_gap(inst);
  if (!gap) throw Error(Errc::hypothesis_violated, "at_least_two_houses");
  if (*gap <= 0.0) throw Error(Errc::degenerate_delta, "two houses share a desirability value");
  const double m = static_cast<double>(inst.house_count());
  const double slack =
      static_cast<double>(max_quota(inst)) * inst.network().max_weight() / *gap;
  return 1.0 + 2.0 * (m - 1.0) * (gamma_star + slack);
}

BoundReport bound_report(const Instance& inst, double gamma_star, bool gamma_star_exact) {
  BoundReport r;
  r.m = inst.house_count();
  r.gamma_star = gamma_star;
  r.gamma_star_exact = gamma_star_exact;
  r.q_max = max_quota(inst);
  r.w_max = inst.network().max_weight();
  r.d_delta = desirability_gap(inst);
  if (inst.objective_desirability() && inst.network().total_weight() > 0.0) r.q_ratio = q_ratio(inst);

  r.simple_violations = simple_bound_violations(inst);
  if (r.simple_violations.empty()) r.bound_simple = poa_bound_simple(inst, gamma_star);
  try {
    r.bound_general = poa_bound_general(inst, gamma_star);
  } catch (const Error& e) {
    r.general_error = e.what();
  }
  return r;
}

CrossEdgeReport check_cross_edge_bound(const Instance& inst, const Matching& mu) {
  require_general_setting(inst);
  CrossEdgeReport report;
  report.general_form = !simple_bound_violations(inst).empty();
  report.matching_stable = is_two_sided_exchange_stable(inst, mu).stable;
  const auto pm = partition_metrics(inst, mu);
  const double slack = report.general_form
                           ? static_cast<double>(max_quota(inst)) * inst.network().max_weight()
                           : 0.0;
  for (HouseId h = 0; h < inst.house_count(); ++h) {
    for (HouseId g = h + 1; g < inst.house_count(); ++g) {
      const double qh = static_cast<double>(inst.quota(h));
      const double qg = static_cast<double>(inst.quota(g));
      const double dh = inst.house_value(h);
      const double dg = inst.house_value(g);
      CrossEdgeCheck c;
      c.h = h;
      c.g = g;
      c.cross = pm.cross(h, g);
      c.limit = std::max(qh * (dh - dg), qg * (dg - dh)) + 2.0 * (pm.cross(h, h) + pm.cross(g, g)) + slack;
      c.pass = c.cross <= c.limit + kCheckTolerance;
      report.all_pass = report.all_pass && c.pass;
      report.pairs.push_back(c);
    }
  }
  return report;
}

double ordered_gap_mass(std::span<const std::size_t> quotas, std::span<const double> values) {
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double mass = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      mass += static_cast<double>(quotas[order[j]]) * (values[order[j]] - values[order[i]]);
    }
  }
  return mass;
}

GammaBoundCheck check_gamma_lower_bound(const Instance& inst, const Matching& mu) {
  require_general_setting(inst);
  GammaBoundCheck check;
  check.general_form = !simple_bound_violations(inst).empty();
  check.matching_stable = is_two_sided_exchange_stable(inst, mu).stable;
  check.gamma = partition_metrics(inst, mu).gamma;

  const double e = inst.network().total_weight();
  if (e == 0.0) return check;
  const double m = static_cast<double>(inst.house_count());
  double numerator = e - ordered_gap_mass(quotas_of(inst), values_of(inst));
  if (check.general_form) {
    numerator -= m * (m - 1.0) / 2.0 * static_cast<double>(max_quota(inst)) *
                 inst.network().max_weight();
  }
  check.bound = std::max(numerator / ((2.0 * m - 1.0) * e), 0.0);
  check.pass = check.gamma >= check.bound - kCheckTolerance;
  return check;
}

RatioCheck check_m_minus_one_bound(std::span<const std::size_t> quotas,
                                   std::span<const double> values) {
  RatioCheck check;
  check.limit = static_cast<double>(quotas.size()) - 1.0;
  double mass = 0.0;
  for (std::size_t h = 0; h < quotas.size(); ++h) mass += static_cast<double>(quotas[h]) * values[h];
  const double gaps = ordered_gap_mass(quotas, values);
  check.ratio = mass > 0.0 ? gaps / mass : 0.0;
  check.pass = check.ratio <= check.limit + kCheckTolerance;
  return check;
}

}  // namespace peermatch
