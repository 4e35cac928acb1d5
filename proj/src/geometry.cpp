#include "dispersion/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dispersion {
namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }  // false for NaN

void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                                ", got " + std::to_string(got));
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("point dimension must be at least 1");
  for (double x : coords_) {
    if (!in_unit(x)) throw std::invalid_argument("point coordinate outside [0,1]");
  }
}

PointSet::PointSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("point set dimension must be at least 1");
}

PointSet::PointSet(std::size_t dim, std::span<const Point> points) : PointSet(dim) {
  coords_.reserve(points.size() * dim);
  for (const auto& p : points) add(p);
}

void PointSet::add(std::span<const double> p) {
  require_dim(dim_, p.size());
  for (double x : p) {
    if (!in_unit(x)) throw std::invalid_argument("point coordinate outside [0,1]");
  }
  coords_.insert(coords_.end(), p.begin(), p.end());
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(in_unit(lo) && in_unit(hi) && lo < hi)) {
    throw std::invalid_argument("interval must satisfy 0 <= lo < hi <= 1");
  }
}

AxisBox::AxisBox(std::vector<Interval> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw std::invalid_argument("box dimension must be at least 1");
  volume_ = volume_recomputed();
}

AxisBox::AxisBox(std::span<const double> lo, std::span<const double> hi)
    : AxisBox([&] {
        require_dim(lo.size(), hi.size());
        std::vector<Interval> s;
        s.reserve(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) s.emplace_back(lo[i], hi[i]);
        return s;
      }()) {}

AxisBox AxisBox::unit(std::size_t dim) {
  return AxisBox(std::vector<Interval>(dim, Interval(0.0, 1.0)));
}

std::vector<double> AxisBox::lo() const {
  std::vector<double> out;
  out.reserve(dim());
  for (const auto& s : sides_) out.push_back(s.lo());
  return out;
}

std::vector<double> AxisBox::hi() const {
  std::vector<double> out;
  out.reserve(dim());
  for (const auto& s : sides_) out.push_back(s.hi());
  return out;
}

double AxisBox::volume_recomputed() const {
  double v = 1.0;
  for (const auto& s : sides_) v *= s.length();
  return v;
}

AxisBox AxisBox::restrict_to(std::span<const std::size_t> axes) const {
  std::vector<Interval> s;
  s.reserve(axes.size());
  for (auto i : axes) s.push_back(sides_.at(i));
  return AxisBox(std::move(s));
}

double torus_length(double a, double b) {
  if (a < b) return b - a;
  if (b < a) return 1.0 - (a - b);
  return 1.0;
}

TorusInterval::TorusInterval(double a, double b) : a_(a), b_(b) {
  if (!(in_unit(a) && in_unit(b))) {
    throw std::invalid_argument("periodic interval endpoints must lie in [0,1]");
  }
  if (!(length() > 0.0)) throw std::invalid_argument("periodic interval has zero length");
}

bool TorusInterval::contains(double x) const {
  if (a_ < b_) return a_ < x && x < b_;
  if (b_ < a_) return x < b_ || x > a_;
  return x != a_;
}

TorusBox::TorusBox(std::vector<TorusInterval> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw std::invalid_argument("box dimension must be at least 1");
  volume_ = volume_recomputed();
}

TorusBox::TorusBox(std::span<const double> a, std::span<const double> b)
    : TorusBox([&] {
        require_dim(a.size(), b.size());
        std::vector<TorusInterval> s;
        s.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) s.emplace_back(a[i], b[i]);
        return s;
      }()) {}

TorusBox TorusBox::unit(std::size_t dim) {
  return TorusBox(std::vector<TorusInterval>(dim, TorusInterval(0.0, 1.0)));
}

std::vector<double> TorusBox::a() const {
  std::vector<double> out;
  out.reserve(dim());
  for (const auto& s : sides_) out.push_back(s.a());
  return out;
}

std::vector<double> TorusBox::b() const {
  std::vector<double> out;
  out.reserve(dim());
  for (const auto& s : sides_) out.push_back(s.b());
  return out;
}

double TorusBox::volume_recomputed() const {
  double v = 1.0;
  for (const auto& s : sides_) v *= s.length();
  return v;
}

TorusBox TorusBox::restrict_to(std::span<const std::size_t> axes) const {
  std::vector<TorusInterval> s;
  s.reserve(axes.size());
  for (auto i : axes) s.push_back(sides_.at(i));
  return TorusBox(std::move(s));
}

double volume(const AxisBox& box) { return box.volume(); }
double volume(const TorusBox& box) { return box.volume(); }
double volume(const AnyBox& box) {
  return std::visit([](const auto& b) { return b.volume(); }, box);
}

bool contains(const AxisBox& box, std::span<const double> p) {
  require_dim(box.dim(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!box.side(i).contains(p[i])) return false;
  }
  return true;
}

bool contains(const TorusBox& box, std::span<const double> p) {
  require_dim(box.dim(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!box.side(i).contains(p[i])) return false;
  }
  return true;
}

bool contains(const AnyBox& box, std::span<const double> p) {
  return std::visit([&](const auto& b) { return contains(b, p); }, box);
}

bool box_subset(const AxisBox& inner, const AxisBox& outer) {
  require_dim(outer.dim(), inner.dim());
  for (std::size_t i = 0; i < inner.dim(); ++i) {
    if (!(outer.side(i).lo() <= inner.side(i).lo() && inner.side(i).hi() <= outer.side(i).hi())) {
      return false;
    }
  }
  return true;
}

// Cases follow the shape of each set: (a,b) is one open arc, [0,b) u (a,1] is
// two pieces separated by the closed gap [b,a], and the punctured circle misses
// a single point.
bool interval_subset(const TorusInterval& inner, const TorusInterval& outer) {
  const double ia = inner.a(), ib = inner.b(), oa = outer.a(), ob = outer.b();
  if (inner.punctured()) return outer.punctured() && oa == ia;
  if (!inner.wraps()) {
    if (outer.punctured()) return oa <= ia || oa >= ib;
    if (!outer.wraps()) return oa <= ia && ib <= ob;
    return ib <= ob || ia >= oa;
  }
  if (outer.punctured()) return ib <= oa && oa <= ia;
  if (!outer.wraps()) return false;
  return ib <= ob && ia >= oa;
}

bool box_subset(const TorusBox& inner, const TorusBox& outer) {
  require_dim(outer.dim(), inner.dim());
  for (std::size_t i = 0; i < inner.dim(); ++i) {
    if (!interval_subset(inner.side(i), outer.side(i))) return false;
  }
  return true;
}

std::size_t dim(const AnyBox& box) {
  return std::visit([](const auto& b) { return b.dim(); }, box);
}

}  // namespace dispersion
