#include "dispersion/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dispersion {
namespace {

constexpr int kMaxBoxAttempts = 1000;

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void check_eps_box(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("box volume threshold must lie in (0,1]");
}

// Side lengths whose product is a volume drawn uniformly from [eps,1].
std::vector<double> draw_lengths(Rng& rng, std::size_t d, double eps) {
  const double v = eps + (1.0 - eps) * rng.uniform();
  const double log_v = std::log(v);
  std::vector<double> w(d);
  double total = 0.0;
  for (auto& x : w) {
    x = rng.exponential();
    total += x;
  }
  std::vector<double> len(d);
  for (std::size_t i = 0; i < d; ++i) {
    len[i] = total > 0.0 ? std::exp(log_v * w[i] / total) : std::exp(log_v / static_cast<double>(d));
  }
  return len;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(seeded_engine(seed, stream)) {}

double Rng::exponential() { return -std::log1p(-uniform()); }

double phi_eps(double t, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("phi_eps requires eps in (0, 1/2]");
  if (t < eps) return eps;
  if (t > 1.0 - eps) return 1.0 - eps;
  return t;
}

Point phi_eps(const Point& p, double eps) {
  std::vector<double> out(p.coords().begin(), p.coords().end());
  for (auto& x : out) x = phi_eps(x, eps);
  return Point(std::move(out));
}

PointSet sample_uniform(Rng& rng, std::size_t n, std::size_t d) {
  PointSet out(d);
  std::vector<double> p(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : p) x = rng.uniform();
    out.add(p);
  }
  return out;
}

PointSet sample_uniform(const SampleConfig& config) {
  if (config.adjusted) throw std::invalid_argument("sample_uniform called with adjusted=true");
  Rng rng(config.seed, config.stream);
  return sample_uniform(rng, config.n, config.d);
}

PointSet sample_adjusted(const SampleConfig& config) {
  if (!config.adjusted || !config.eps) {
    throw std::invalid_argument("adjusted sampling requires adjusted=true and eps");
  }
  const double eps = *config.eps;
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("adjusted sampling requires eps in (0, 1/2)");
  Rng rng(config.seed, config.stream);
  PointSet out(config.d);
  std::vector<double> p(config.d);
  for (std::size_t i = 0; i < config.n; ++i) {
    for (auto& x : p) x = phi_eps(rng.uniform(), eps);
    out.add(p);
  }
  return out;
}

PointSet sample_points(const SampleConfig& config) {
  return config.adjusted ? sample_adjusted(config) : sample_uniform(config);
}

AxisBox sample_axis_box(Rng& rng, std::size_t d, double eps) {
  check_eps_box(eps);
  if (d == 0) throw std::invalid_argument("box dimension must be at least 1");
  if (eps == 1.0) return AxisBox::unit(d);
  for (int attempt = 0; attempt < kMaxBoxAttempts; ++attempt) {
    const auto len = draw_lengths(rng, d, eps);
    std::vector<double> lo(d), hi(d);
    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i) {
      if (len[i] > 1.0) ok = false;
      lo[i] = rng.uniform() * (1.0 - len[i]);
      hi[i] = std::min(1.0, lo[i] + len[i]);
      if (!(lo[i] < hi[i])) ok = false;
    }
    if (!ok) continue;
    AxisBox box(lo, hi);
    if (box.volume() >= eps) return box;
  }
  throw std::runtime_error("sample_box: rejection cap exceeded");
}

TorusBox sample_torus_box(Rng& rng, std::size_t d, double eps) {
  check_eps_box(eps);
  if (d == 0) throw std::invalid_argument("box dimension must be at least 1");
  if (eps == 1.0) return TorusBox::unit(d);
  for (int attempt = 0; attempt < kMaxBoxAttempts; ++attempt) {
    const auto len = draw_lengths(rng, d, eps);
    std::vector<double> a(d), b(d);
    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i) {
      if (len[i] >= 1.0) {
        a[i] = 0.0;
        b[i] = 1.0;
        continue;
      }
      a[i] = rng.uniform();
      b[i] = a[i] + len[i];
      if (b[i] > 1.0) {
        b[i] -= 1.0;
        if (!(b[i] < a[i])) ok = false;
      }
    }
    if (!ok) continue;
    TorusBox box(a, b);
    if (box.volume() >= eps) return box;
  }
  throw std::runtime_error("sample_box: rejection cap exceeded");
}

AnyBox sample_box(std::size_t d, double eps, std::uint64_t seed, bool periodic, std::uint64_t stream) {
  Rng rng(seed, stream);
  if (periodic) return sample_torus_box(rng, d, eps);
  return sample_axis_box(rng, d, eps);
}

}  // namespace dispersion
