#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "peermatch/oracle.hpp"
#include "peermatch/stability.hpp"

using namespace peermatch;

namespace {

// Stable but not a local maximum: s1 would gain by trading places with s3,
// which raises both Phi and W, yet s1 loses its friend and refuses.
InstanceConfig converse_fixture() {
  InstanceConfig c;
  c.students = 4;
  c.houses = {{0, 2, 8.0}, {1, 2, 5.0}};
  c.edges = {{0, 1, 1.0}, {0, 2, 3.0}, {1, 2, 3.0}, {2, 3, 1.0}};
  return c;
}

}  // namespace

TEST_CASE("enumeration counts") {
  const Instance a = build_instance(fixtures::instance_a());
  CHECK(count_matchings(a) == 6);
  const auto all = enumerate_matchings(a);
  CHECK(all.size() == 6);
  std::set<std::vector<HouseId>> distinct;
  for (const auto& mu : all) distinct.insert({mu.assignment().begin(), mu.assignment().end()});
  CHECK(distinct.size() == 6);

  InstanceConfig c;
  c.students = 9;
  c.houses = {{0, 3, 0.0}, {1, 3, 0.0}, {2, 3, 0.0}};
  const Instance grid = build_instance(c);
  CHECK(count_matchings(grid) == 1680);
  CHECK(count_matchings(grid, EnumerationMode::quotient) == 280);
  std::uint64_t visited = 0;
  for_each_matching(grid, [&](const Matching&) { ++visited; }, {}, EnumerationMode::quotient);
  CHECK(visited == 280);
  CHECK(houses_interchangeable(grid));
  CHECK_FALSE(houses_interchangeable(a));
  CHECK_THROWS_AS(for_each_matching(a, [](const Matching&) {}, {}, EnumerationMode::quotient), Error);
}

TEST_CASE("enumeration limits") {
  InstanceConfig c;
  c.students = 13;
  c.houses = {{0, 7, 0.0}, {1, 6, 0.0}};
  try {
    enumerate_matchings(build_instance(c));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_large);
  }
  EnumerationLimits tight;
  tight.max_matchings = 5;
  CHECK_THROWS_AS(enumerate_matchings(build_instance(fixtures::instance_a()), tight), Error);
}

TEST_CASE("exact summary of the two-pair example") {
  const Instance inst = build_instance(fixtures::instance_a());
  const ExactSummary s = exact_extremes(inst);
  CHECK(s.matchings_enumerated == 6);
  CHECK(s.max_welfare == 16.0);
  CHECK(s.exact_pos == 1.0);
  CHECK(s.gamma_star == 1.0);
  CHECK(s.argmax_welfare == Matching::from_assignment(inst, {0, 0, 1, 1}));
}

TEST_CASE("exact price of anarchy grows with k") {
  for (double k : {4.0, 8.0, 16.0}) {
    const Instance inst = build_instance(generate_unbounded_poa(k));
    const ExactSummary s = exact_extremes(inst);
    CHECK(s.max_welfare == k);
    CHECK(s.min_stable_welfare == 2.0);
    CHECK(s.exact_poa == k / 2.0);
    REQUIRE(s.poa_via_gamma.has_value());
    CHECK(*s.poa_via_gamma == doctest::Approx(s.exact_poa));
  }
}

TEST_CASE("local maxima of the potential are stable") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = build_instance(fixtures::random_small(seed, 8, 3));
    const MaximaCheck check = verify_potential_maxima(inst);
    CHECK(check.pass);
    CHECK(check.local_maxima >= 1);
  }
}

TEST_CASE("with objective values and exact quotas the optimum is stable") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = build_instance(fixtures::random_small(seed, 8, 3, false, false));
    const MaximaCheck check = verify_welfare_maxima(inst);
    CHECK(check.pass);
    CHECK(check.global_max_stable);
    CHECK(std::abs(check.exact_pos - 1.0) <= 1e-9);
  }
  auto c = fixtures::instance_a();
  c.houses[0].quota = 3;
  try {
    verify_welfare_maxima(build_instance(c));
    FAIL("expected HypothesisViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::hypothesis_violated);
    CHECK(e.detail() == "exact_quotas");
  }
}

TEST_CASE("stable matchings need not be local maxima") {
  const Instance inst = build_instance(converse_fixture());
  const Matching mu = Matching::from_assignment(inst, {0, 0, 1, 1});
  CHECK(is_two_sided_exchange_stable(inst, mu).stable);
  CHECK_FALSE(is_potential_local_max(inst, mu));
  CHECK_FALSE(is_welfare_local_max(inst, mu));
  CHECK(welfare_delta(inst, mu, 0, 2).welfare == 2.0);
}

TEST_CASE("ratio conventions") {
  // No edges and D = 0: every matching has welfare 0.
  InstanceConfig c;
  c.students = 2;
  c.houses = {{0, 1, 0.0}, {1, 1, 0.0}};
  const ExactSummary s = exact_extremes(build_instance(c));
  CHECK(s.exact_poa == 1.0);
  CHECK(s.exact_pos == 1.0);
  CHECK_FALSE(s.poa_via_gamma.has_value());
}
