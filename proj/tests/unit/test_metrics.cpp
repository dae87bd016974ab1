#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "peermatch/metrics.hpp"
#include "peermatch/oracle.hpp"
#include "peermatch/solvers.hpp"
#include "peermatch/stability.hpp"

using namespace peermatch;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_input;
}

// Unweighted, equal quotas >= 2, integer objective D, zero scoring.
InstanceConfig simple_setting(std::uint64_t seed) {
  Rng rng(seed + 500);
  RandomInstanceSpec spec;
  spec.seed = seed;
  spec.m = 2 + rng.uniform_index(2);
  const std::size_t q = 2 + rng.uniform_index(spec.m == 2 ? 4 : 2);
  spec.n = spec.m * q;
  spec.weights = WeightModel::unit(0.2 + 0.5 * rng.uniform01());
  spec.desirability = DesirabilityModel::objective_integer;
  return generate_random_instance(spec);
}

}  // namespace

TEST_CASE("partition metrics of the triangle") {
  const Instance inst = build_instance(fixtures::triangle());
  const Matching mu = Matching::from_assignment(inst, {0, 0, 1});
  const PartitionMetrics pm = partition_metrics(inst, mu);
  CHECK(pm.total_edge_weight == 3.0);
  CHECK(pm.internal_weight == 1.0);
  CHECK(pm.cross(0, 1) == 2.0);
  CHECK(pm.cross(1, 0) == 2.0);
  CHECK(pm.gamma == doctest::Approx(1.0 / 3.0));
  CHECK(gamma_star_exact(inst) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("internal plus cross weight equals the total") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = build_instance(fixtures::random_small(seed, 25, 5));
    const PartitionMetrics pm = partition_metrics(inst, random_matching(inst, seed));
    double sum = pm.internal_weight;
    double direct = 0.0;
    for (HouseId h = 0; h < pm.house_count; ++h) {
      for (HouseId g = h + 1; g < pm.house_count; ++g) sum += pm.cross(h, g);
    }
    for (const auto& e : inst.network().edges()) direct += e.weight;
    CHECK(sum == doctest::Approx(pm.total_edge_weight));
    CHECK(direct == doctest::Approx(pm.total_edge_weight));
  }
}

TEST_CASE("empty network has gamma 0 and no Q") {
  InstanceConfig c;
  c.students = 4;
  c.houses = {{0, 2, 1.0}, {1, 2, 3.0}};
  const Instance inst = build_instance(c);
  CHECK(partition_metrics(inst, random_matching(inst, 0)).gamma == 0.0);
  CHECK(code_of([&] { q_ratio(inst); }) == Errc::empty_network);
}

TEST_CASE("heuristic gamma never exceeds the exact value") {
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = build_instance(fixtures::random_small(seed, 10, 3));
    const double exact = gamma_star_exact(inst);
    GammaHeuristicConfig cfg;
    cfg.seed = seed;
    cfg.mcmc_iterations = 2000;
    const double heuristic = gamma_star_heuristic(inst, cfg);
    CHECK(heuristic <= exact + 1e-12);
    if (std::abs(heuristic - exact) <= 1e-12) ++agree;
  }
  CHECK(agree >= 190);  // small instances should nearly always be solved
}

TEST_CASE("tight family values") {
  for (auto [m, k] : {std::pair<std::size_t, std::size_t>{3, 3}, {2, 4}, {3, 4}, {4, 3}}) {
    const Instance inst = build_instance(generate_tight_example(m, k));
    const double md = static_cast<double>(m);
    const double kd = static_cast<double>(k);
    CHECK(q_ratio(inst) == doctest::Approx((kd + 1) / (2 * (md - 1) * kd)));
    const Matching rows = Matching::from_assignment(inst, tight_example_row_assignment(m, k));
    const Matching cols = Matching::from_assignment(inst, tight_example_column_assignment(m, k));
    const double ratio = social_welfare(inst, rows) / social_welfare(inst, cols);
    CHECK(ratio == doctest::Approx(1 + 2 * (md - 1) * kd / (kd + 1)));
    CHECK(ratio <= poa_bound_simple(inst, 1.0));
    CHECK(is_two_sided_exchange_stable(inst, cols).stable);

    const GammaBoundCheck lower = check_gamma_lower_bound(inst, cols);
    CHECK(lower.bound == 0.0);
    CHECK(lower.gamma == 0.0);
    CHECK(lower.pass);
  }
  const Instance inst = build_instance(generate_tight_example(3, 3));
  const Matching rows = Matching::from_assignment(inst, tight_example_row_assignment(3, 3));
  CHECK(social_welfare(inst, rows) == 144.0);
  CHECK(q_ratio(inst) == doctest::Approx(1.0 / 3.0));
  CHECK(poa_bound_simple(inst, 1.0) == 5.0);
}

TEST_CASE("bound hypotheses are named") {
  auto c = fixtures::instance_a();
  c.houses[0].quota = 3;
  c.scoring = HouseScoring::additive(std::vector<std::vector<double>>(4, {1.0, 1.0}));
  const Instance inst = build_instance(c);
  const auto v = simple_bound_violations(inst);
  CHECK(std::find(v.begin(), v.end(), "zero_house_scoring") != v.end());
  CHECK(std::find(v.begin(), v.end(), "exact_quotas") != v.end());
  CHECK(std::find(v.begin(), v.end(), "unit_weights") != v.end());
  CHECK(std::find(v.begin(), v.end(), "equal_quotas_or_equal_desirability") != v.end());
  CHECK(code_of([&] { poa_bound_simple(inst, 1.0); }) == Errc::hypothesis_violated);

  const BoundReport report = bound_report(inst, 1.0, true);
  CHECK_FALSE(report.bound_simple.has_value());
  CHECK_FALSE(report.bound_general.has_value());
  CHECK(report.general_error.find("zero_house_scoring") != std::string::npos);
}

TEST_CASE("general bound needs distinct desirabilities") {
  InstanceConfig c;
  c.students = 4;
  c.houses = {{0, 2, 1.0}, {1, 2, 1.0}};
  c.edges = {{0, 1, 2.0}};
  CHECK(code_of([&] { poa_bound_general(build_instance(c), 1.0); }) == Errc::degenerate_delta);
  c.houses[1].desirability = 3.0;
  const Instance inst = build_instance(c);
  CHECK(desirability_gap(inst) == 2.0);
  // 1 + 2 (m-1)(gamma + q_max w_max / D_delta) = 1 + 2 (0.5 + 2 * 2 / 2)
  CHECK(poa_bound_general(inst, 0.5) == doctest::Approx(6.0));
}

TEST_CASE("exact price of anarchy respects the unweighted bound") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = build_instance(simple_setting(seed));
    if (inst.network().total_weight() == 0.0) continue;
    ExactOptions opts;
    opts.collect_stable = true;
    const ExactSummary s = exact_extremes(inst, opts);
    const double bound = poa_bound_simple(inst, s.gamma_star);
    CHECK(s.exact_poa <= bound + 1e-9);
    REQUIRE(s.poa_via_gamma.has_value());
    CHECK(*s.poa_via_gamma == doctest::Approx(s.exact_poa));
    for (const auto& mu : s.stable_matchings) {
      const CrossEdgeReport cross = check_cross_edge_bound(inst, mu);
      CHECK_FALSE(cross.general_form);
      CHECK(cross.matching_stable);
      CHECK(cross.all_pass);
      CHECK(check_gamma_lower_bound(inst, mu).pass);
    }
  }
}

TEST_CASE("the m - 1 inequality on random quota and value draws") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 1 + rng.uniform_index(8);
    std::vector<std::size_t> q(m);
    std::vector<double> d(m);
    for (std::size_t h = 0; h < m; ++h) {
      q[h] = 1 + rng.uniform_index(10);
      d[h] = rng.uniform(0.0, 10.0);
    }
    CHECK(check_m_minus_one_bound(q, d).pass);
  }
  const std::vector<std::size_t> q{2, 2};
  const std::vector<double> d{0.0, 5.0};
  CHECK(ordered_gap_mass(q, d) == 10.0);
  CHECK(check_m_minus_one_bound(q, d).ratio == 1.0);
}
