#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "dispersion/geometry.hpp"

namespace dispersion {

enum class Geometry { cube, torus };
enum class Method { exact, grid };

const char* to_string(Geometry g);
const char* to_string(Method m);

struct SolverOptions {
  // Cap on the work estimate returned by exact_work_estimate().
  std::uint64_t budget = 100'000'000;
  unsigned threads = 1;  // 0 means hardware concurrency
};

struct DispersionResult {
  double value = 0.0;
  AnyBox witness = AxisBox::unit(1);
  Geometry mode = Geometry::cube;
  Method method = Method::exact;
  std::optional<std::string> note;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Blocking rule that realizes the supremum over half-open boxes: a point
// excludes the candidate (lo,hi) unless it lies strictly inside on every axis.
// Faces supported by a point can be moved infinitesimally past it, so a point
// on a face never blocks, including a point on a face at 0.
bool blocks(std::span<const double> p, const AxisBox& candidate);
// Periodic intervals are open already; blocking is plain membership.
bool blocks(std::span<const double> p, const TorusBox& candidate);
bool blocks(std::span<const double> p, const AnyBox& candidate);

// Number of elementary steps the exact search is allowed to take: candidate
// interval pairs on all axes but the last, times the last-axis scan length.
std::uint64_t exact_work_estimate(std::size_t n, std::size_t d, Geometry mode);

// Largest empty axis-parallel box in [0,1]^d. Ties between equal volumes go
// to the lexicographically smallest (lo..., hi...) witness, independent of the
// thread count. An empty set yields 1 and the unit cube.
DispersionResult exact_dispersion_cube(const PointSet& points, const SolverOptions& options = {});

// Largest empty periodic box. The empty set is reported as 1 with a note; a
// single point on an axis gives the punctured interval of length 1.
DispersionResult exact_dispersion_torus(const PointSet& points, const SolverOptions& options = {});

// Largest empty box whose endpoints lie on {0, 1/r, ..., 1}. Never exceeds
// the exact value and is within 2d/r of it.
DispersionResult grid_dispersion(const PointSet& points, Geometry mode, int resolution,
                                 const SolverOptions& options = {});

}  // namespace dispersion
