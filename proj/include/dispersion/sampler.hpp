#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "dispersion/geometry.hpp"

namespace dispersion {

// Seeded generator addressed by (seed, stream). Two generators with the same
// pair produce the same sequence on every platform: mt19937_64 and seed_seq
// are fully specified, and doubles are built from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0,1)
  double exponential();  // rate 1

 private:
  std::mt19937_64 engine_;
};

struct SampleConfig {
  std::size_t n = 0;
  std::size_t d = 1;
  std::optional<double> eps;
  std::uint64_t seed = 0;
  bool adjusted = false;
  std::uint64_t stream = 0;
};

// Clamp of [0,1] onto [eps, 1-eps]. eps must lie in (0, 1/2].
double phi_eps(double t, double eps);
Point phi_eps(const Point& p, double eps);

// Dispatches on config.adjusted.
PointSet sample_points(const SampleConfig& config);
PointSet sample_uniform(const SampleConfig& config);
PointSet sample_adjusted(const SampleConfig& config);
PointSet sample_uniform(Rng& rng, std::size_t n, std::size_t d);

// Random box of volume at least eps (eps in (0,1]). The target volume is
// uniform on [eps,1] and its logarithm is split across axes by normalized
// exponential weights.
AxisBox sample_axis_box(Rng& rng, std::size_t d, double eps);
TorusBox sample_torus_box(Rng& rng, std::size_t d, double eps);
AnyBox sample_box(std::size_t d, double eps, std::uint64_t seed, bool periodic,
                  std::uint64_t stream = 0);

}  // namespace dispersion
