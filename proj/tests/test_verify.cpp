#include <doctest.h>

#include "dispersion/bounds.hpp"
#include "dispersion/verify.hpp"

using namespace dispersion;

TEST_CASE("net suites pass") {
  auto r = check_net_property(Construction::netgen, 3, 0.25, false, 1000, 7);
  CHECK(r.failures == 0);
  CHECK(r.ok);
  CHECK(r.trials == 1000);
  r = check_net_property(Construction::netd, 8, 0.25, false, 1000, 7);
  CHECK(r.failures == 0);
  r = check_net_property(Construction::netgen, 2, 0.5, true, 1000, 7);
  CHECK(r.failures == 0);
  CHECK_THROWS_AS(check_net_property(Construction::netd, 4, 0.01, false, 10, 1), RegimeError);
  CHECK_THROWS_AS(check_net_property(Construction::netd, 8, 0.25, true, 10, 1), std::invalid_argument);
}

TEST_CASE("dinet suite passes") {
  auto r = check_dinet_property(8, 0.5, 1000, 3);
  CHECK(r.failures == 0);
  r = check_dinet_property(12, 0.4, 200, 3);
  CHECK(r.failures == 0);
  CHECK_THROWS_AS(check_dinet_property(4, 0.05, 10, 1), RegimeError);
}

TEST_CASE("reports do not depend on the thread count") {
  VerifyOptions one, four;
  four.threads = 4;
  auto a = to_json(check_net_property(Construction::netgen, 4, 0.125, false, 300, 5, one));
  auto b = to_json(check_net_property(Construction::netgen, 4, 0.125, false, 300, 5, four));
  CHECK(a == b);
  a = to_json(torus_lower_consistency(2, 8, 30, 5, one));
  b = to_json(torus_lower_consistency(2, 8, 30, 5, four));
  CHECK(a == b);
  a = to_json(monte_carlo_lemma(2, 0.5, 0.5, Construction::netgen, 10, 5, 1.0, one));
  b = to_json(monte_carlo_lemma(2, 0.5, 0.5, Construction::netgen, 10, 5, 1.0, four));
  CHECK(a == b);
}

TEST_CASE("lemma reproduction") {
  const auto r = monte_carlo_lemma(2, 0.5, 0.5, Construction::netgen, 50, 11);
  const auto& s = r.statistics;
  const auto expect = lemma_point_count(netgen_cardinality_bound(2, 0.5).log_bound, 0.5, 0.5);
  CHECK(s["points"].get<std::uint64_t>() == expect.points);
  CHECK(s["success_fraction"].get<double>() >= 0.95);
  CHECK(r.ok);
  const auto more = monte_carlo_lemma(2, 0.5, 0.5, Construction::netgen, 20, 11, 2.0);
  CHECK(more.statistics["points"].get<std::uint64_t>() == 2 * expect.points);
  CHECK(more.statistics["success_fraction"].get<double>() >= 0.99);
  CHECK_THROWS_AS(monte_carlo_lemma(4, 0.5, 0.5, Construction::netgen, 1, 1), std::invalid_argument);
  VerifyOptions tight;
  tight.budget = 1000;
  CHECK_THROWS_AS(monte_carlo_lemma(2, 0.5, 0.5, Construction::netgen, 1, 1, 1.0, tight),
                  BudgetExceeded);
}

TEST_CASE("torus lower bound consistency") {
  auto r = torus_lower_consistency(2, 8, 100, 1);
  CHECK(r.failures == 0);
  CHECK(r.statistics["min_dispersion"].get<double>() >= 0.25);
  r = torus_lower_consistency(2, 4, 100, 1);
  CHECK(r.failures == 0);
  CHECK(r.statistics["min_dispersion"].get<double>() >= 0.5);
  r = torus_lower_consistency(3, 12, 10, 1);
  CHECK(r.failures == 0);
  CHECK_THROWS_AS(torus_lower_consistency(2, 3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(torus_lower_consistency(4, 12, 1, 1), std::invalid_argument);
}

TEST_CASE("empirical N") {
  // a single uniform point essentially never reaches 1/2, so the estimate is
  // an upper estimate only; the true value is 1
  auto r = empirical_N(0.5, 2, 20, 0.0, 1);
  CHECK(r.n >= 1);
  CHECK(r.n <= 5);
  CHECK(r.dispersion <= 0.5);
  r = empirical_N(0.26, 2, 10, 0.0, 1);
  CHECK(r.n <= 101);
  CHECK(r.n >= 3);
  r = empirical_N(0.25, 2, 10, 0.5, 1);
  CHECK(r.n >= 3);
  // bisection: n fails, n-1 is either a probe that failed or below the doubling start
  bool bracket = false;
  for (const auto& [n, v] : r.probes) {
    if (n == r.n - 1) bracket = v > 0.25;
  }
  CHECK((bracket || r.n == 1));
  CHECK_THROWS_AS(empirical_N(0.01, 2, 1, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(empirical_N(0.3, 4, 1, 0.0, 1), std::invalid_argument);
}

TEST_CASE("report JSON") {
  const auto r = check_net_property(Construction::netgen, 2, 0.5, false, 5, 1);
  const auto j = to_json(r);
  CHECK(j["suite"] == "net-netgen");
  CHECK(j["trials"] == 5);
  CHECK(j["failures"] == 0);
  CHECK(j["seed"] == 1);
  CHECK(j["exemplars"].empty());
  CHECK(j["parameters"]["eps"] == 0.5);
}
