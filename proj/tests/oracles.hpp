#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the PointSet container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <random>
#include <set>
#include <stack>
#include <vector>

#include "dispersion/geometry.hpp"

namespace oracle {

using dispersion::PointSet;

// Largest empty box by plain enumeration of every endpoint combination.
// Endpoints come from {0, coordinates, 1}; a point spoils the candidate only
// when it sits strictly inside on every axis.
inline double naive_cube(const PointSet& pts) {
  const std::size_t d = pts.dim();
  std::vector<std::vector<double>> cand(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::set<double> s{0.0, 1.0};
    for (std::size_t r = 0; r < pts.size(); ++r) s.insert(pts.coord(r, i));
    cand[i].assign(s.begin(), s.end());
  }
  std::vector<double> lo(d), hi(d);
  double best = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t axis, double vol) {
    if (vol <= best) return;
    if (axis == d) {
      for (std::size_t r = 0; r < pts.size(); ++r) {
        bool inside = true;
        for (std::size_t i = 0; i < d && inside; ++i) {
          const double x = pts.coord(r, i);
          inside = lo[i] < x && x < hi[i];
        }
        if (inside) return;
      }
      best = vol;
      return;
    }
    for (std::size_t a = 0; a < cand[axis].size(); ++a) {
      for (std::size_t b = a + 1; b < cand[axis].size(); ++b) {
        lo[axis] = cand[axis][a];
        hi[axis] = cand[axis][b];
        rec(axis + 1, vol * (hi[axis] - lo[axis]));
      }
    }
  };
  rec(0, 1.0);
  return best;
}

// Periodic analogue. Per axis both endpoints range over the coordinates; a
// repeated endpoint is the circle with one point removed.
inline double naive_torus(const PointSet& pts) {
  if (pts.empty()) return 1.0;
  const std::size_t d = pts.dim();
  std::vector<std::vector<double>> cand(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::set<double> s;
    for (std::size_t r = 0; r < pts.size(); ++r) s.insert(pts.coord(r, i));
    cand[i].assign(s.begin(), s.end());
  }
  auto inside = [](double a, double b, double x) {
    if (a < b) return a < x && x < b;
    if (b < a) return x > a || x < b;
    return x != a;
  };
  auto length = [](double a, double b) {
    if (a < b) return b - a;
    if (b < a) return 1.0 - (a - b);
    return 1.0;
  };
  std::vector<double> as(d), bs(d);
  double best = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t axis, double vol) {
    if (vol <= best) return;
    if (axis == d) {
      for (std::size_t r = 0; r < pts.size(); ++r) {
        bool in = true;
        for (std::size_t i = 0; i < d && in; ++i) in = inside(as[i], bs[i], pts.coord(r, i));
        if (in) return;
      }
      best = vol;
      return;
    }
    for (double a : cand[axis]) {
      for (double b : cand[axis]) {
        as[axis] = a;
        bs[axis] = b;
        rec(axis + 1, vol * length(a, b));
      }
    }
  };
  rec(0, 1.0);
  return best;
}

// Maximal empty rectangle on an r x r cell grid, d = 2 only. A cell is
// occupied when its closed square holds a point, so the answer never exceeds
// the true dispersion. Classic histogram-and-stack scan, O(r^2).
inline double grid_scan_2d(const PointSet& pts, int r) {
  std::vector<std::vector<char>> occ(r, std::vector<char>(r, 0));
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double x = pts.coord(p, 0) * r, y = pts.coord(p, 1) * r;
    for (int i = std::max(0, int(std::ceil(x)) - 1); i <= std::min(r - 1, int(std::floor(x))); ++i) {
      for (int j = std::max(0, int(std::ceil(y)) - 1); j <= std::min(r - 1, int(std::floor(y))); ++j) {
        occ[i][j] = 1;
      }
    }
  }
  std::vector<int> h(r, 0);
  long best = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) h[j] = occ[i][j] ? 0 : h[j] + 1;
    std::stack<int> st;
    for (int j = 0; j <= r; ++j) {
      const int cur = j == r ? 0 : h[j];
      while (!st.empty() && h[st.top()] >= cur) {
        const int top = st.top();
        st.pop();
        const int left = st.empty() ? -1 : st.top();
        best = std::max(best, long(h[top]) * (j - left - 1));
      }
      st.push(j);
    }
  }
  return double(best) / (double(r) * r);
}

// Small hand-rolled generator for property tests.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }
  int between(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
  // Coordinates on a coarse lattice now and then, so ties and faces get hit.
  double coord() { return between(0, 3) == 0 ? between(0, 8) / 8.0 : unit(); }
  PointSet points(std::size_t n, std::size_t d) {
    PointSet p(d);
    std::vector<double> x(d);
    for (std::size_t r = 0; r < n; ++r) {
      for (auto& c : x) c = coord();
      p.add(x);
    }
    return p;
  }
};

}  // namespace oracle
