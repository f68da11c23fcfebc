#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wsnlife/dynamic_sched.hpp"
#include "wsnlife/error.hpp"
#include "wsnlife/simulate.hpp"
#include "wsnlife/static_sched.hpp"

using namespace wsnlife;

TEST_SUITE("simulate") {

TEST_CASE("lifetime below one slot completes nothing") {
  Cluster c({{0, {0, 0}, 1, 1}, {1, {10, 0}, 1, 1}}, BitDistance{1});
  const StaticResult r = evaluate_schedule(std::vector<int>{0, 1}, c, Shannon{});
  CHECK(r.lifetime == doctest::Approx(2.0 / 3.0));
  const SimTrace t = simulate_static(r, c);
  CHECK(t.completed == 0);
  CHECK(t.first_dead >= 0);
}

TEST_CASE("hand-counted static run") {
  const std::vector<double> e{0.25, 0.5}, b{1, 1};
  const SimTrace t = simulate_static(e, b);
  CHECK(t.completed == 2);
  CHECK(t.first_dead == 1);
  REQUIRE(t.slots.size() == 2);
  CHECK(t.slots[1].remaining[0] == doctest::Approx(0.5));
  CHECK(t.slots[1].remaining[1] == doctest::Approx(0.0));
}

TEST_CASE("zero-energy plans are rejected") {
  const std::vector<double> e{0, 0}, b{1, 1};
  CHECK_THROWS_AS(simulate_static(e, b), Error);
  const std::vector<double> short_e{1};
  CHECK_THROWS_AS(simulate_static(short_e, b), Error);
}

TEST_CASE("dynamic symmetric example completes one slot") {
  // SRRA pair with columns (1, 0.5) and (0.5, 1) after scaling E = 1.
  Cluster c({{0, {0, 0}, 1, 1}, {1, {0.5, 0}, 1, 1}}, BitDistance{2});
  const DynamicPlan p = dynamic_lifetime(c, Srra{0.5});
  CHECK(p.lifetime == doctest::Approx(4.0 / 3.0));
  const SimTrace t = simulate_dynamic(p, c);
  CHECK(t.completed == 1);
  for (const auto& s : t.slots) {
    for (double r : s.remaining) CHECK(r >= -1e-9);
  }
}

TEST_CASE("static slots equal floor of the lifetime") {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 100; ++it) {
    auto nodes = oracle::random_nodes(rng, 2 + it % 4, 3.0, 5.0, 40.0, 0.5, 2.0);
    Cluster c = it % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.5) : Cluster(nodes, BitDistance{4});
    const StaticResult r = brute_force(c, Shannon{});
    const SimOptions quiet{false};
    CHECK(simulate_static(r, c, quiet).completed == static_cast<std::size_t>(std::floor(r.lifetime)));
  }
}

TEST_CASE("dynamic runs stay feasible and near the LP bound") {
  std::mt19937_64 rng(52);
  for (int it = 0; it < 20; ++it) {
    auto nodes = oracle::random_nodes(rng, 3, 3.0, 5.0, 40.0, 0.5, 2.0);
    Cluster c = oracle::gaussian_cluster(nodes, 1.0, 0.5);
    const DynamicPlan p = dynamic_lifetime(c, Shannon{}, 4);
    const SimTrace t = simulate_dynamic(p, c);
    CHECK(static_cast<double>(t.completed) >= std::floor(p.lifetime) - static_cast<double>(p.support()));
    CHECK(static_cast<double>(t.completed) <= p.lifetime + 1e-9);
    std::vector<double> prev = c.energies();
    for (const auto& s : t.slots) {
      for (std::size_t k = 0; k < prev.size(); ++k) {
        CHECK(s.remaining[k] <= prev[k]);
        CHECK(s.remaining[k] >= -1e-9);
      }
      prev = s.remaining;
    }
  }
}

TEST_CASE("dynamic plan with a foreign node id is rejected") {
  Cluster c({{0, {0, 0}, 1, 1}, {1, {0.5, 0}, 1, 1}}, BitDistance{2});
  DynamicPlan p = dynamic_lifetime(c, Srra{0.5});
  p.entries[0].column.order = {0, 5};
  try {
    simulate_dynamic(p, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownNode);
  }
}

}
