#include "dispersion/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "dispersion/parallel.hpp"

namespace dispersion {
namespace {

// Endpoint lattice: point coordinates (resolution 0) or multiples of 1/r.
struct Lattice {
  int resolution = 0;

  bool exact() const { return resolution == 0; }
  double value(long i) const { return static_cast<double>(i) / resolution; }

  double up(double x) const {
    if (exact()) return x;
    long i = static_cast<long>(std::ceil(x * resolution));
    while (value(i) < x) ++i;
    while (i > 0 && value(i - 1) >= x) --i;
    return value(i);
  }

  double down(double x) const {
    if (exact()) return x;
    long i = static_cast<long>(std::floor(x * resolution));
    while (value(i) > x) --i;
    while (i < resolution && value(i + 1) <= x) ++i;
    return value(i);
  }

  std::vector<double> grid() const {
    std::vector<double> g(static_cast<std::size_t>(resolution) + 1);
    for (int i = 0; i <= resolution; ++i) g[i] = value(i);
    return g;
  }
};

// Best interval on the last axis given the currently active points.
struct Gap {
  double lo = 0.0;
  double hi = 1.0;
  double length = 1.0;
};

struct LongerFirst {
  bool operator()(const Gap& x, const Gap& y) const {
    if (x.length != y.length) return x.length > y.length;
    if (x.lo != y.lo) return x.lo < y.lo;
    return x.hi < y.hi;
  }
};

// Maximal open gaps between active coordinates and the faces 0 and 1.
class CubeGaps {
 public:
  explicit CubeGaps(Lattice lattice) : lattice_(lattice) { reset(); }

  void reset() {
    cuts_ = {0.0, 1.0};
    gaps_.clear();
    gaps_.insert(make(0.0, 1.0));
  }

  void insert(double x) {
    auto [it, inserted] = cuts_.insert(x);
    if (!inserted) return;
    const double l = *std::prev(it);
    const double h = *std::next(it);
    gaps_.erase(gaps_.find(make(l, h)));
    gaps_.insert(make(l, x));
    gaps_.insert(make(x, h));
  }

  const Gap& best() const { return *gaps_.begin(); }

 private:
  Gap make(double l, double h) const {
    const double lo = lattice_.up(l);
    const double hi = lattice_.down(h);
    if (lo < hi) return {lo, hi, hi - lo};
    return {l, h, 0.0};
  }

  Lattice lattice_;
  std::set<double> cuts_;
  std::multiset<Gap, LongerFirst> gaps_;
};

// Maximal cyclic gaps between active coordinates. With no active coordinate
// the whole open interval (0,1) is free; with one, the punctured circle.
class TorusGaps {
 public:
  explicit TorusGaps(Lattice lattice) : lattice_(lattice) {}

  void reset() {
    values_.clear();
    gaps_.clear();
  }

  void insert(double x) {
    auto [it, inserted] = values_.insert(x);
    if (!inserted) return;
    if (values_.size() == 1) {
      gaps_.insert(make(x, x));
      return;
    }
    if (values_.size() == 2) {
      gaps_.clear();
      const double v1 = *values_.begin();
      const double v2 = *values_.rbegin();
      gaps_.insert(make(v1, v2));
      gaps_.insert(make(v2, v1));
      return;
    }
    const double pred = it == values_.begin() ? *values_.rbegin() : *std::prev(it);
    const double succ = std::next(it) == values_.end() ? *values_.begin() : *std::next(it);
    gaps_.erase(gaps_.find(make(pred, succ)));
    gaps_.insert(make(pred, x));
    gaps_.insert(make(x, succ));
  }

  Gap best() const {
    if (values_.empty()) return {0.0, 1.0, 1.0};
    return *gaps_.begin();
  }

 private:
  Gap make(double l, double h) const {
    const double a = lattice_.up(l);
    const double b = lattice_.down(h);
    if (l < h) {
      if (a < b) return {a, b, torus_length(a, b)};
      return {l, h, 0.0};
    }
    return {a, b, torus_length(a, b)};
  }

  Lattice lattice_;
  std::set<double> values_;
  std::multiset<Gap, LongerFirst> gaps_;
};

struct CubePolicy {
  using Gaps = CubeGaps;
  Lattice lattice;

  std::vector<double> values(const PointSet& pts, std::size_t axis) const {
    if (!lattice.exact()) return lattice.grid();
    std::vector<double> v{0.0, 1.0};
    for (std::size_t i = 0; i < pts.size(); ++i) v.push_back(pts.coord(i, axis));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
  static bool is_start(double v) { return v < 1.0; }
  static std::vector<double> ends(const std::vector<double>& values, double lo) {
    return {std::upper_bound(values.begin(), values.end(), lo), values.end()};
  }
  static bool inside(double lo, double hi, double x) { return lo < x && x < hi; }
  static double length(double lo, double hi) { return hi - lo; }
  static double max_length(double lo) { return 1.0 - lo; }
  Gaps make_gaps() const { return CubeGaps(lattice); }
};

struct TorusPolicy {
  using Gaps = TorusGaps;
  Lattice lattice;

  std::vector<double> values(const PointSet& pts, std::size_t axis) const {
    if (!lattice.exact()) return lattice.grid();
    std::vector<double> v;
    for (std::size_t i = 0; i < pts.size(); ++i) v.push_back(pts.coord(i, axis));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
  static bool is_start(double) { return true; }
  // Nested order: (a,b) for b>a ascending, then the wrapped [0,b) u (a,1] for
  // b<a ascending, then the punctured circle.
  static std::vector<double> ends(const std::vector<double>& values, double a) {
    auto split = std::upper_bound(values.begin(), values.end(), a);
    std::vector<double> out(split, values.end());
    for (auto it = values.begin(); it != values.end() && *it < a; ++it) out.push_back(*it);
    out.push_back(a);
    return out;
  }
  static bool inside(double a, double b, double x) {
    if (a < b) return a < x && x < b;
    if (b < a) return x < b || x > a;
    return x != a;
  }
  static double length(double a, double b) { return torus_length(a, b); }
  static double max_length(double) { return 1.0; }
  Gaps make_gaps() const { return TorusGaps(lattice); }
};

struct Best {
  double volume = 0.0;
  std::vector<double> lo;
  std::vector<double> hi;

  bool found() const { return !lo.empty(); }
};

// Strict total order on candidates: larger volume first, then the smaller
// (lo..., hi...) key.
bool better(double volume, std::span<const double> lo, std::span<const double> hi, const Best& best) {
  if (!(volume > 0.0)) return false;
  if (!best.found()) return true;
  if (volume != best.volume) return volume > best.volume;
  const auto key = [](std::span<const double> l, std::span<const double> h) {
    std::vector<double> k(l.begin(), l.end());
    k.insert(k.end(), h.begin(), h.end());
    return k;
  };
  return key(lo, hi) < key(best.lo, best.hi);
}

template <typename Policy>
class Search {
 public:
  Search(const PointSet& points, Policy policy, std::atomic<double>& shared)
      : points_(points), policy_(policy), shared_(shared), d_(points.dim()) {
    for (std::size_t axis = 0; axis < d_; ++axis) {
      values_.push_back(policy_.values(points_, axis));
      std::vector<double> s;
      for (double v : values_.back()) {
        if (Policy::is_start(v)) s.push_back(v);
      }
      starts_.push_back(std::move(s));
    }
  }

  std::size_t top_level_size() const { return d_ == 1 ? 1 : starts_[0].size(); }

  struct Worker {
    std::vector<double> lo;
    std::vector<double> hi;
    typename Policy::Gaps gaps;
    Best best;
  };

  Worker make_worker() const {
    return Worker{std::vector<double>(d_), std::vector<double>(d_), policy_.make_gaps(), Best{}};
  }

  void run(std::size_t index, Worker& w) {
    std::vector<std::uint32_t> all(points_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    if (d_ == 1) {
      w.gaps.reset();
      for (auto p : all) w.gaps.insert(points_.coord(p, 0));
      consider(w, 1.0, w.gaps.best());
      return;
    }
    const double start = starts_[0][index];
    if (d_ == 2) {
      sweep(w, 0, start, all, 1.0);
    } else {
      expand(w, 0, start, all, 1.0);
    }
  }

 private:
  double threshold(const Worker& w) const {
    return std::max(w.best.volume, shared_.load(std::memory_order_relaxed));
  }

  void consider(Worker& w, double partial, const Gap& gap) {
    const double volume = partial * gap.length;
    if (!(volume > 0.0)) return;
    w.lo[d_ - 1] = gap.lo;
    w.hi[d_ - 1] = gap.hi;
    if (!better(volume, w.lo, w.hi, w.best)) return;
    w.best.volume = volume;
    w.best.lo = w.lo;
    w.best.hi = w.hi;
    double seen = shared_.load(std::memory_order_relaxed);
    while (volume > seen && !shared_.compare_exchange_weak(seen, volume, std::memory_order_relaxed)) {
    }
  }

  // Full enumeration of (start, end) on `axis`, recursing towards the sweep axis.
  void expand(Worker& w, std::size_t axis, double start, const std::vector<std::uint32_t>& active,
              double partial) {
    const auto ends = Policy::ends(values_[axis], start);
    std::vector<std::uint32_t> next;
    for (double end : ends) {
      const double len = Policy::length(start, end);
      if (partial * len < threshold(w)) continue;
      next.clear();
      for (auto p : active) {
        if (Policy::inside(start, end, points_.coord(p, axis))) next.push_back(p);
      }
      w.lo[axis] = start;
      w.hi[axis] = end;
      const double inner = partial * len;
      const std::size_t child = axis + 1;
      for (double s : starts_[child]) {
        if (child == d_ - 2) {
          sweep(w, child, s, next, inner);
        } else {
          expand(w, child, s, next, inner);
        }
      }
    }
  }

  // Second-to-last axis: grow the interval through its nested ends and keep
  // the last-axis gap structure updated as points become active.
  void sweep(Worker& w, std::size_t axis, double start, const std::vector<std::uint32_t>& active,
             double partial) {
    if (partial * Policy::max_length(start) < threshold(w)) return;
    const auto ends = Policy::ends(values_[axis], start);
    std::vector<std::vector<std::uint32_t>> arrivals(ends.size());
    for (auto p : active) {
      const double x = points_.coord(p, axis);
      std::size_t lo = 0, hi = ends.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (Policy::inside(start, ends[mid], x)) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (lo < ends.size()) arrivals[lo].push_back(p);
    }
    const std::size_t last = d_ - 1;
    w.gaps.reset();
    w.lo[axis] = start;
    for (std::size_t e = 0; e < ends.size(); ++e) {
      for (auto p : arrivals[e]) w.gaps.insert(points_.coord(p, last));
      const Gap gap = w.gaps.best();
      if (partial * Policy::max_length(start) * gap.length < threshold(w)) break;
      w.hi[axis] = ends[e];
      consider(w, partial * Policy::length(start, ends[e]), gap);
    }
  }

  const PointSet& points_;
  Policy policy_;
  std::atomic<double>& shared_;
  std::size_t d_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<double>> starts_;
};

template <typename Policy>
Best run_search(const PointSet& points, Policy policy, unsigned threads) {
  std::atomic<double> shared{0.0};
  Search<Policy> search(points, policy, shared);
  const unsigned workers = resolve_threads(threads);
  std::vector<typename Search<Policy>::Worker> pool;
  for (unsigned i = 0; i < workers; ++i) pool.push_back(search.make_worker());
  parallel_for(search.top_level_size(), workers,
               [&](std::size_t index, unsigned worker) { search.run(index, pool[worker]); });
  Best best;
  for (const auto& w : pool) {
    if (w.best.found() && better(w.best.volume, w.best.lo, w.best.hi, best)) best = w.best;
  }
  return best;
}

std::uint64_t saturating_power_product(long double base, std::size_t exponent, long double factor) {
  long double v = factor;
  for (std::size_t i = 0; i < exponent; ++i) v *= base;
  constexpr auto cap = static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
  return v >= cap ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(v);
}

DispersionResult empty_set_result(std::size_t d, Geometry mode, Method method) {
  DispersionResult r;
  r.value = 1.0;
  r.mode = mode;
  r.method = method;
  if (mode == Geometry::cube) {
    r.witness = AxisBox::unit(d);
  } else {
    r.witness = TorusBox::unit(d);
    r.note = "periodic dispersion of the empty set is undefined; reporting 1";
  }
  return r;
}

DispersionResult finish(const Best& best, std::size_t d, Geometry mode, Method method) {
  DispersionResult r;
  r.mode = mode;
  r.method = method;
  if (!best.found()) {
    r.value = 0.0;
    r.witness = mode == Geometry::cube ? AnyBox(AxisBox::unit(d)) : AnyBox(TorusBox::unit(d));
    r.note = "no empty box with endpoints on this grid; witness is a placeholder";
    return r;
  }
  if (mode == Geometry::cube) {
    r.witness = AxisBox(best.lo, best.hi);
  } else {
    r.witness = TorusBox(best.lo, best.hi);
  }
  r.value = volume(r.witness);
  return r;
}

void check_budget(std::size_t n, std::size_t d, Geometry mode, const SolverOptions& options) {
  const auto work = exact_work_estimate(n, d, mode);
  if (work > options.budget) {
    throw BudgetExceeded("exact search needs about " + std::to_string(work) + " steps for n=" +
                         std::to_string(n) + ", d=" + std::to_string(d) + " (budget " +
                         std::to_string(options.budget) +
                         "); raise the budget or use the grid method");
  }
}

}  // namespace

const char* to_string(Geometry g) { return g == Geometry::cube ? "cube" : "torus"; }
const char* to_string(Method m) { return m == Method::exact ? "exact" : "grid"; }

bool blocks(std::span<const double> p, const AxisBox& candidate) {
  if (p.size() != candidate.dim()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!CubePolicy::inside(candidate.side(i).lo(), candidate.side(i).hi(), p[i])) return false;
  }
  return true;
}

bool blocks(std::span<const double> p, const TorusBox& candidate) { return contains(candidate, p); }

bool blocks(std::span<const double> p, const AnyBox& candidate) {
  return std::visit([&](const auto& b) { return blocks(p, b); }, candidate);
}

std::uint64_t exact_work_estimate(std::size_t n, std::size_t d, Geometry mode) {
  const long double values = mode == Geometry::cube ? n + 2.0L : static_cast<long double>(n);
  const long double pairs = mode == Geometry::cube ? values * (values - 1) / 2 : values * values;
  return saturating_power_product(pairs, d - 1, n + 1.0L);
}

DispersionResult exact_dispersion_cube(const PointSet& points, const SolverOptions& options) {
  const std::size_t d = points.dim();
  if (points.empty()) return empty_set_result(d, Geometry::cube, Method::exact);
  check_budget(points.size(), d, Geometry::cube, options);
  const auto best = run_search(points, CubePolicy{Lattice{}}, options.threads);
  return finish(best, d, Geometry::cube, Method::exact);
}

DispersionResult exact_dispersion_torus(const PointSet& points, const SolverOptions& options) {
  const std::size_t d = points.dim();
  if (points.empty()) return empty_set_result(d, Geometry::torus, Method::exact);
  check_budget(points.size(), d, Geometry::torus, options);
  const auto best = run_search(points, TorusPolicy{Lattice{}}, options.threads);
  return finish(best, d, Geometry::torus, Method::exact);
}

DispersionResult grid_dispersion(const PointSet& points, Geometry mode, int resolution,
                                 const SolverOptions& options) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  const std::size_t d = points.dim();
  if (points.empty()) {
    auto r = empty_set_result(d, mode, Method::grid);
    r.note.reset();
    return r;
  }
  const Lattice lattice{resolution};
  const auto best = mode == Geometry::cube ? run_search(points, CubePolicy{lattice}, options.threads)
                                           : run_search(points, TorusPolicy{lattice}, options.threads);
  return finish(best, d, mode, Method::grid);
}

}  // namespace dispersion
