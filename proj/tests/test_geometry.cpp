#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dispersion/geometry.hpp"
#include "oracles.hpp"

using namespace dispersion;

TEST_CASE("points reject coordinates outside the unit cube") {
  CHECK_NOTHROW(Point{0.0, 1.0});
  CHECK_THROWS_AS(Point({1.5}), std::invalid_argument);
  CHECK_THROWS_AS(Point({-0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(Point({std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Point(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("point set keeps one dimension") {
  PointSet s(2);
  CHECK(s.empty());
  s.add(Point{0.1, 0.2});
  CHECK(s.size() == 1);
  CHECK_THROWS_AS(s.add(Point{0.1}), std::invalid_argument);
  CHECK(s.coord(0, 1) == 0.2);
}

TEST_CASE("interval is half open and nondegenerate") {
  Interval i(0.25, 0.5);
  CHECK(i.contains(0.25));
  CHECK_FALSE(i.contains(0.5));
  CHECK(i.length() == 0.25);
  CHECK_THROWS_AS(Interval(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Interval(0.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Interval(0.0, 1.1), std::invalid_argument);
}

TEST_CASE("box volume and containment") {
  const std::vector<double> lo{0.0, 0.5}, hi{0.5, 1.0};
  AxisBox b(lo, hi);
  CHECK(b.volume() == 0.25);
  CHECK(contains(b, Point{0.0, 0.5}));
  CHECK_FALSE(contains(b, Point{0.5, 0.6}));
  CHECK_FALSE(contains(b, Point{0.2, 1.0}));
  CHECK(AxisBox::unit(3).volume() == 1.0);
  CHECK_THROWS_AS(contains(b, Point{0.1}), std::invalid_argument);
}

TEST_CASE("box subset examples") {
  const std::vector<double> a{0.1}, b{0.4}, z{0.0}, h{0.5}, s{0.6};
  CHECK(box_subset(AxisBox(a, b), AxisBox(z, h)));
  CHECK_FALSE(box_subset(AxisBox(z, s), AxisBox(z, h)));
  CHECK(interval_subset(TorusInterval(0.85, 0.15), TorusInterval(0.8, 0.2)));
  CHECK_FALSE(interval_subset(TorusInterval(0.8, 0.2), TorusInterval(0.85, 0.15)));
  CHECK_FALSE(interval_subset(TorusInterval(0.1, 0.3), TorusInterval(0.8, 0.2)));
  CHECK(interval_subset(TorusInterval(0.9, 0.95), TorusInterval(0.8, 0.2)));
  CHECK(interval_subset(TorusInterval(0.05, 0.1), TorusInterval(0.8, 0.2)));
}

TEST_CASE("torus intervals") {
  TorusInterval w(0.8, 0.2);
  CHECK(w.wraps());
  CHECK(w.length() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(w.contains(0.9));
  CHECK(w.contains(0.0));
  CHECK(w.contains(0.1));
  CHECK_FALSE(w.contains(0.2));
  CHECK_FALSE(w.contains(0.8));
  CHECK_FALSE(w.contains(0.5));
  TorusInterval o(0.2, 0.8);
  CHECK_FALSE(o.contains(0.2));
  CHECK(o.contains(0.5));
  TorusInterval p(0.3, 0.3);
  CHECK(p.punctured());
  CHECK(p.length() == 1.0);
  CHECK_FALSE(p.contains(0.3));
  CHECK(p.contains(0.31));
  CHECK(torus_length(0.25, 0.75) == 0.5);
  CHECK(torus_length(0.75, 0.25) == 0.5);
}

TEST_CASE("property: volume is multiplicative over axis splits") {
  oracle::Gen g(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = g.between(1, 6);
    std::vector<double> lo(d), hi(d), a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
      double x = g.unit(), y = g.unit();
      if (x == y) y = std::nextafter(x, 1.0);
      lo[i] = std::min(x, y);
      hi[i] = std::max(x, y);
      a[i] = g.unit();
      b[i] = g.unit();
    }
    AxisBox box(lo, hi);
    TorusBox tb(a, b);
    CHECK(box.volume() == doctest::Approx(box.volume_recomputed()).epsilon(1e-12));
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      std::vector<std::size_t> in, out;
      for (std::size_t i = 0; i < d; ++i) ((mask >> i) & 1 ? in : out).push_back(i);
      if (in.empty() || out.empty()) continue;
      CHECK(box.restrict_to(in).volume() * box.restrict_to(out).volume() ==
            doctest::Approx(box.volume()).epsilon(1e-12));
      CHECK(tb.restrict_to(in).volume() * tb.restrict_to(out).volume() ==
            doctest::Approx(tb.volume()).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: containment is monotone under subset") {
  oracle::Gen g(12);
  int checked = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = g.between(1, 3);
    std::vector<double> lo(d), hi(d), ilo(d), ihi(d), a(d), b(d), ia(d), ib(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = g.unit() * 0.5;
      hi[i] = 0.5 + g.unit() * 0.5 + 1e-9;
      hi[i] = std::min(hi[i], 1.0);
      ilo[i] = lo[i] + g.unit() * (0.5 - lo[i]);
      ihi[i] = 0.5 + g.unit() * (hi[i] - 0.5) + 1e-12;
      ihi[i] = std::min(ihi[i], hi[i]);
      // torus: outer arc from a of length L, inner arc nested within it
      a[i] = g.unit();
      const double len = 0.1 + 0.8 * g.unit();
      b[i] = std::fmod(a[i] + len, 1.0);
      const double s0 = g.unit() * len * 0.4, s1 = g.unit() * len * 0.4;
      ia[i] = std::fmod(a[i] + s0, 1.0);
      ib[i] = std::fmod(a[i] + len - s1, 1.0);
    }
    AxisBox outer(lo, hi), inner(ilo, ihi);
    REQUIRE(box_subset(inner, outer));
    TorusBox tout(a, b), tin(ia, ib);
    const bool tsub = box_subset(tin, tout);
    for (int s = 0; s < 20; ++s) {
      std::vector<double> p(d);
      for (auto& x : p) x = g.coord();
      if (contains(inner, p)) {
        CHECK(contains(outer, p));
        ++checked;
      }
      if (tsub && contains(tin, p)) CHECK(contains(tout, p));
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("property: torus intervals are shift invariant") {
  oracle::Gen g(13);
  // Multiples of 1/64 keep every shift exact in binary.
  auto q = [&] { return g.between(0, 63) / 64.0; };
  for (int t = 0; t < 100; ++t) {
    const double a = q(), b = q(), s = q();
    TorusInterval i(a, b), j(std::fmod(a + s, 1.0), std::fmod(b + s, 1.0));
    CHECK(i.length() == doctest::Approx(j.length()).epsilon(1e-12));
    for (int k = 0; k < 64; ++k) {
      const double p = k / 64.0;
      CHECK(i.contains(p) == j.contains(std::fmod(p + s, 1.0)));
    }
  }
}
