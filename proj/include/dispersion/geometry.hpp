#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

namespace dispersion {

// A point of the unit cube [0,1]^d.
class Point {
 public:
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

// Finite point set with a fixed dimension. Coordinates are stored row-major.
class PointSet {
 public:
  explicit PointSet(std::size_t dim);
  PointSet(std::size_t dim, std::span<const Point> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double coord(std::size_t i, std::size_t axis) const { return coords_[i * dim_ + axis]; }

  void add(std::span<const double> p);
  void add(const Point& p) { add(p.coords()); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

// Half-open interval [lo, hi) inside [0,1].
class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  bool contains(double x) const { return lo_ <= x && x < hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

// Axis-parallel box, a product of half-open intervals.
class AxisBox {
 public:
  explicit AxisBox(std::vector<Interval> sides);
  AxisBox(std::span<const double> lo, std::span<const double> hi);

  static AxisBox unit(std::size_t dim);

  std::size_t dim() const { return sides_.size(); }
  const Interval& side(std::size_t i) const { return sides_[i]; }
  const std::vector<Interval>& sides() const { return sides_; }
  std::vector<double> lo() const;
  std::vector<double> hi() const;

  // Cached at construction; volume_recomputed() multiplies the sides again.
  double volume() const { return volume_; }
  double volume_recomputed() const;

  // Sub-box on the listed axes, in the listed order.
  AxisBox restrict_to(std::span<const std::size_t> axes) const;

  friend bool operator==(const AxisBox& a, const AxisBox& b) { return a.sides_ == b.sides_; }

 private:
  std::vector<Interval> sides_;
  double volume_;
};

// Length of the cyclic interval I(a,b): b-a when a<b, 1-(a-b) when b<a, and 1
// for the punctured circle a==b. Every torus length in the library goes
// through this function so products agree bit for bit.
double torus_length(double a, double b);

// Periodic interval I(a,b): the open interval (a,b) when a<b, the wrapped set
// [0,b) u (a,1] when b<a. The limit case a==b is the circle minus one point
// and only arises as a supremum witness.
class TorusInterval {
 public:
  TorusInterval(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  bool wraps() const { return b_ < a_; }
  bool punctured() const { return a_ == b_; }
  double length() const { return torus_length(a_, b_); }
  bool contains(double x) const;

  friend bool operator==(const TorusInterval&, const TorusInterval&) = default;

 private:
  double a_;
  double b_;
};

class TorusBox {
 public:
  explicit TorusBox(std::vector<TorusInterval> sides);
  TorusBox(std::span<const double> a, std::span<const double> b);

  static TorusBox unit(std::size_t dim);

  std::size_t dim() const { return sides_.size(); }
  const TorusInterval& side(std::size_t i) const { return sides_[i]; }
  const std::vector<TorusInterval>& sides() const { return sides_; }
  std::vector<double> a() const;
  std::vector<double> b() const;

  double volume() const { return volume_; }
  double volume_recomputed() const;
  TorusBox restrict_to(std::span<const std::size_t> axes) const;

  friend bool operator==(const TorusBox& x, const TorusBox& y) { return x.sides_ == y.sides_; }

 private:
  std::vector<TorusInterval> sides_;
  double volume_;
};

using AnyBox = std::variant<AxisBox, TorusBox>;

double volume(const AxisBox& box);
double volume(const TorusBox& box);
double volume(const AnyBox& box);

// Membership with the literal conventions: [lo,hi) per axis for AxisBox, the
// open periodic sets for TorusBox. Throws std::invalid_argument on dimension
// mismatch.
bool contains(const AxisBox& box, std::span<const double> p);
bool contains(const TorusBox& box, std::span<const double> p);
bool contains(const AnyBox& box, std::span<const double> p);
inline bool contains(const AxisBox& box, const Point& p) { return contains(box, p.coords()); }
inline bool contains(const TorusBox& box, const Point& p) { return contains(box, p.coords()); }

// Set inclusion inner ⊆ outer.
bool box_subset(const AxisBox& inner, const AxisBox& outer);
bool box_subset(const TorusBox& inner, const TorusBox& outer);
bool interval_subset(const TorusInterval& inner, const TorusInterval& outer);

std::size_t dim(const AnyBox& box);

}  // namespace dispersion
