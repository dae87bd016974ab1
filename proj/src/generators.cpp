#include "peermatch/generators.hpp"

#include <cmath>
#include <string>

#include "peermatch/metrics.hpp"
#include "peermatch/oracle.hpp"
#include "peermatch/random.hpp"
#include "peermatch/stability.hpp"

namespace peermatch {

namespace {

void self_check(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::self_check_failed, what);
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<HouseId> unbounded_poa_optimal_assignment() { return {0, 0, 1, 1}; }
std::vector<HouseId> unbounded_poa_stable_assignment() { return {0, 1, 0, 1}; }

InstanceConfig generate_unbounded_poa(double k) {
  if (!(k > 2.0)) throw Error(Errc::invalid_input, "k must exceed 2");
  InstanceConfig config;
  config.students = 4;
  config.houses = {{0, 2, 0.0}, {1, 2, 0.0}};
  // s3-s4 carry the optimum; s1 and s2 each hold one weak tie across the pairs.
  config.edges = {{2, 3, k / 2.0}, {0, 2, 0.5}, {1, 3, 0.5}};

  const Instance inst = build_instance(config);
  const ExactSummary exact = exact_extremes(inst);
  self_check(near(exact.max_welfare, k), "optimal welfare differs from k");
  const Matching bad = Matching::from_assignment(inst, unbounded_poa_stable_assignment());
  self_check(is_two_sided_exchange_stable(inst, bad).stable, "bad pairing is not stable");
  self_check(near(social_welfare(inst, bad), 2.0), "bad pairing welfare differs from 2");
  self_check(near(exact.min_stable_welfare, 2.0), "worst stable welfare differs from 2");
  return config;
}

std::vector<HouseId> tight_example_row_assignment(std::size_t m, std::size_t k) {
  std::vector<HouseId> out(m * m * k);
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = s / (m * k);
  return out;
}

std::vector<HouseId> tight_example_column_assignment(std::size_t m, std::size_t k) {
  std::vector<HouseId> out(m * m * k);
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = (s / k) % m;
  return out;
}

InstanceConfig generate_tight_example(std::size_t m, std::size_t k) {
  if (m < 2) throw Error(Errc::invalid_input, "m must be at least 2");
  if (k <= 2) throw Error(Errc::invalid_input, "k must exceed 2");
  const std::size_t hub = m / 2;
  const auto student = [&](std::size_t row, std::size_t col, std::size_t j) {
    return (row * m + col) * k + j;
  };

  InstanceConfig config;
  config.students = m * m * k;
  for (std::size_t h = 0; h < m; ++h) {
    config.houses.push_back({static_cast<std::int64_t>(h), m * k,
                             h == hub ? static_cast<double>(k + 1) : 0.0});
  }
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t col = 0; col < m; ++col) {
      if (col == hub) continue;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          config.edges.push_back({student(row, hub, a), student(row, col, b), 1.0});
        }
      }
    }
  }

  const Instance inst = build_instance(config);
  const double expected_edges = static_cast<double>(m * (m - 1) * k * k);
  self_check(inst.network().total_weight() == expected_edges, "edge count differs from m(m-1)k^2");
  const Matching rows = Matching::from_assignment(inst, tight_example_row_assignment(m, k));
  const Matching cols = Matching::from_assignment(inst, tight_example_column_assignment(m, k));
  self_check(partition_metrics(inst, rows).gamma == 1.0, "row matching is not fully internal");
  self_check(partition_metrics(inst, cols).gamma == 0.0, "column matching keeps internal edges");
  self_check(is_two_sided_exchange_stable(inst, cols).stable, "column matching is not stable");
  return config;
}

std::vector<std::size_t> equal_split_quotas(std::size_t n, std::size_t m) {
  if (m == 0) throw Error(Errc::invalid_input, "at least one house is required");
  std::vector<std::size_t> quotas(m, n / m);
  for (std::size_t h = 0; h < n % m; ++h) ++quotas[h];
  return quotas;
}

InstanceConfig generate_random_instance(const RandomInstanceSpec& spec) {
  if (spec.n == 0 || spec.m == 0) throw Error(Errc::invalid_input, "n and m must be positive");
  const auto& wm = spec.weights;
  if (!(wm.p >= 0.0 && wm.p <= 1.0)) throw Error(Errc::invalid_input, "edge probability outside [0, 1]");
  if (wm.kind == WeightModel::Kind::uniform && !(wm.low >= 0.0 && wm.low <= wm.high)) {
    throw Error(Errc::invalid_input, "uniform weights need 0 <= low <= high");
  }
  if (wm.kind == WeightModel::Kind::integer && wm.max_weight < 1) {
    throw Error(Errc::invalid_input, "max_weight must be >= 1");
  }

  std::vector<std::size_t> quotas;
  if (spec.quota_rule == QuotaRule::equal_split) {
    quotas = equal_split_quotas(spec.n, spec.m);
  } else {
    if (spec.quotas.size() != spec.m) throw Error(Errc::invalid_input, "need one quota per house");
    quotas = spec.quotas;
  }

  Rng rng(spec.seed);
  InstanceConfig config;
  config.students = spec.n;
  config.seed = spec.seed;
  for (std::size_t h = 0; h < spec.m; ++h) {
    double d = 0.0;
    if (spec.desirability == DesirabilityModel::objective_uniform) {
      d = rng.uniform(0.0, 10.0);
    } else if (spec.desirability == DesirabilityModel::objective_integer) {
      d = static_cast<double>(rng.uniform_index(11));
    }
    config.houses.push_back({static_cast<std::int64_t>(h), quotas[h], d});
  }

  for (StudentId u = 0; u < spec.n; ++u) {
    for (StudentId v = u + 1; v < spec.n; ++v) {
      if (rng.uniform01() >= wm.p) continue;
      double w = 1.0;
      if (wm.kind == WeightModel::Kind::uniform) {
        w = rng.uniform(wm.low, wm.high);
      } else if (wm.kind == WeightModel::Kind::integer) {
        w = static_cast<double>(1 + rng.uniform_index(static_cast<std::size_t>(wm.max_weight)));
      }
      if (w > 0.0) config.edges.push_back({u, v, w});
    }
  }

  auto draw_table = [&] {
    std::vector<std::vector<double>> table(spec.n, std::vector<double>(spec.m));
    for (auto& row : table) {
      for (auto& x : row) x = rng.uniform(0.0, 10.0);
    }
    return table;
  };
  if (spec.desirability == DesirabilityModel::per_student_uniform) config.desirability = draw_table();
  if (spec.scoring == ScoringModel::additive_uniform) config.scoring = HouseScoring::additive(draw_table());
  return config;
}

}  // namespace peermatch
