#include <doctest.h>

#include <cmath>

#include "dispersion/sampler.hpp"
#include "dispersion/solver.hpp"
#include "oracles.hpp"

using namespace dispersion;

namespace {

PointSet make(std::size_t d, std::initializer_list<std::vector<double>> rows) {
  PointSet p(d);
  for (const auto& r : rows) p.add(r);
  return p;
}

void check_witness(const PointSet& p, const DispersionResult& r) {
  for (std::size_t i = 0; i < p.size(); ++i) CHECK_FALSE(blocks(p[i], r.witness));
  CHECK(r.value == doctest::Approx(volume(r.witness)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("midpoint has dispersion one half") {
  for (std::size_t d = 1; d <= 4; ++d) {
    PointSet p(d);
    p.add(std::vector<double>(d, 0.5));
    const auto r = exact_dispersion_cube(p);
    CHECK(r.value == 0.5);
    check_witness(p, r);
  }
}

TEST_CASE("empty set") {
  const auto r = exact_dispersion_cube(PointSet(3));
  CHECK(r.value == 1.0);
  CHECK(std::get<AxisBox>(r.witness) == AxisBox::unit(3));
  const auto t = exact_dispersion_torus(PointSet(2));
  CHECK(t.value == 1.0);
  CHECK(t.note.has_value());
  CHECK(grid_dispersion(PointSet(2), Geometry::cube, 7).value == 1.0);
}

TEST_CASE("two diagonal points") {
  const auto p = make(2, {{0.25, 0.25}, {0.75, 0.75}});
  const auto r = exact_dispersion_cube(p);
  CHECK(r.value == doctest::Approx(0.5625).epsilon(1e-12));
  check_witness(p, r);
  // the frozen value agrees with both oracles
  CHECK(oracle::naive_cube(p) == 0.5625);
  const double scan = oracle::grid_scan_2d(p, 1000);
  CHECK(scan <= 0.5625);
  CHECK(0.5625 - scan <= 0.004);
  const auto g = grid_dispersion(p, Geometry::cube, 200);
  CHECK(g.value <= 0.5625);
  CHECK(g.value >= 0.5625 - 0.02);
  const auto t = exact_dispersion_torus(p);
  CHECK(t.value >= r.value - 1e-12);
  CHECK(t.value == doctest::Approx(oracle::naive_torus(p)).epsilon(1e-12));
}

TEST_CASE("equally spaced points on the line") {
  for (int n = 1; n <= 9; ++n) {
    PointSet p(1);
    for (int i = 1; i <= n; ++i) p.add(std::vector<double>{double(i) / (n + 1)});
    CHECK(exact_dispersion_cube(p).value == doctest::Approx(1.0 / (n + 1)).epsilon(1e-12));
  }
}

TEST_CASE("points on the lower faces do not shrink the supremum") {
  // Boxes [a,1) with a slightly above 0 avoid the point, so the sup is 1.
  auto p = make(1, {{0.0}});
  CHECK(exact_dispersion_cube(p).value == 1.0);
  p = make(2, {{0.0, 0.3}});
  CHECK(exact_dispersion_cube(p).value == 1.0);
  p = make(2, {{1.0, 1.0}});
  CHECK(exact_dispersion_cube(p).value == 1.0);
}

TEST_CASE("torus examples") {
  CHECK(exact_dispersion_torus(make(1, {{0.3}})).value == 1.0);
  CHECK(exact_dispersion_torus(make(1, {{0.0}, {0.5}})).value == 0.5);
  // each of the two points is cut out by the punctured circle on its own axis
  CHECK(exact_dispersion_torus(make(2, {{0.25, 0.25}, {0.75, 0.75}})).value == 1.0);
  const auto three = make(2, {{0.25, 0.5}, {0.5, 0.25}, {0.75, 0.75}});
  CHECK(exact_dispersion_torus(three).value == doctest::Approx(oracle::naive_torus(three)).epsilon(1e-12));
}

TEST_CASE("grid on aligned point") {
  CHECK(grid_dispersion(make(2, {{0.5, 0.5}}), Geometry::cube, 2).value == 0.5);
  CHECK_THROWS_AS(grid_dispersion(make(1, {{0.5}}), Geometry::cube, 1), std::invalid_argument);
}

TEST_CASE("budget guard") {
  oracle::Gen g(3);
  const auto p = g.points(40, 4);
  SolverOptions small;
  small.budget = 1000;
  CHECK_THROWS_AS(exact_dispersion_cube(p, small), BudgetExceeded);
  CHECK_THROWS_AS(exact_dispersion_torus(p, small), BudgetExceeded);
  CHECK_NOTHROW(grid_dispersion(g.points(5, 2), Geometry::cube, 50, small));
}

TEST_CASE("property: exact solver matches brute enumeration") {
  oracle::Gen g(21);
  for (int t = 0; t < 150; ++t) {
    const std::size_t d = g.between(1, 3);
    const std::size_t n = g.between(1, d == 3 ? 5 : 7);
    const auto p = g.points(n, d);
    const auto r = exact_dispersion_cube(p);
    CHECK(r.value == doctest::Approx(oracle::naive_cube(p)).epsilon(1e-12));
    check_witness(p, r);
    CHECK(r.value >= 1.0 / (n + 1) - 1e-15);
  }
}

TEST_CASE("property: torus solver matches brute enumeration and dominates the cube") {
  oracle::Gen g(22);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = g.between(1, 3);
    const std::size_t n = g.between(1, d == 3 ? 4 : 6);
    const auto p = g.points(n, d);
    const auto r = exact_dispersion_torus(p);
    CHECK(r.value == doctest::Approx(oracle::naive_torus(p)).epsilon(1e-12));
    check_witness(p, r);
    CHECK(r.value >= exact_dispersion_cube(p).value - 1e-12);
  }
}

TEST_CASE("property: adding a point never increases dispersion") {
  oracle::Gen g(23);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = g.between(2, 3);
    PointSet p(d);
    double prev_cube = 1.0, prev_torus = 1.0;
    for (int k = 0; k < 6; ++k) {
      std::vector<double> x(d);
      for (auto& c : x) c = g.coord();
      p.add(x);
      const double c = exact_dispersion_cube(p).value;
      const double tt = exact_dispersion_torus(p).value;
      CHECK(c <= prev_cube);
      CHECK(tt <= prev_torus);
      prev_cube = c;
      prev_torus = tt;
    }
  }
}

TEST_CASE("property: grid sandwich") {
  oracle::Gen g(24);
  for (int t = 0; t < 60; ++t) {
    const std::size_t d = g.between(1, 3);
    const int r = g.between(2, 60);
    const auto p = g.points(g.between(1, 5), d);
    for (auto mode : {Geometry::cube, Geometry::torus}) {
      const double exact = mode == Geometry::cube ? exact_dispersion_cube(p).value
                                                  : exact_dispersion_torus(p).value;
      const auto gr = grid_dispersion(p, mode, r);
      CHECK(gr.value <= exact + 1e-12);
      CHECK(exact <= gr.value + 2.0 * d / r + 1e-12);
      if (gr.value > 0) check_witness(p, gr);
    }
  }
}

TEST_CASE("property: result does not depend on the thread count") {
  oracle::Gen g(25);
  for (int t = 0; t < 20; ++t) {
    const auto p = g.points(g.between(2, 9), g.between(2, 3));
    SolverOptions one, many;
    many.threads = 4;
    const auto a = exact_dispersion_cube(p, one), b = exact_dispersion_cube(p, many);
    CHECK(a.value == b.value);
    CHECK(std::get<AxisBox>(a.witness) == std::get<AxisBox>(b.witness));
    const auto c = exact_dispersion_torus(p, one), e = exact_dispersion_torus(p, many);
    CHECK(c.value == e.value);
    CHECK(std::get<TorusBox>(c.witness) == std::get<TorusBox>(e.witness));
  }
}

TEST_CASE("larger uniform sets agree with the grid bracket") {
  Rng rng(5, 0);
  const auto p = sample_uniform(rng, 10, 4);
  const double exact = exact_dispersion_cube(p).value;
  const double gr = grid_dispersion(p, Geometry::cube, 40).value;
  CHECK(gr <= exact + 1e-12);
  CHECK(exact <= gr + 8.0 / 40);
}
