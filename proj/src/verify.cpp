#include "dispersion/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "dispersion/bounds.hpp"
#include "dispersion/io.hpp"
#include "dispersion/parallel.hpp"
#include "dispersion/sampler.hpp"

namespace dispersion {

using json = nlohmann::ordered_json;

namespace {

// Runs `trial(t)` for every t and folds the failures in trial order, so the
// report does not depend on the thread count.
template <typename Trial>
void run_trials(TrialReport& report, unsigned threads, Trial&& trial) {
  std::vector<std::optional<json>> outcome(report.trials);
  parallel_for(report.trials, resolve_threads(threads),
               [&](std::size_t t, unsigned) { outcome[t] = trial(t); });
  for (std::size_t t = 0; t < outcome.size(); ++t) {
    if (!outcome[t]) continue;
    ++report.failures;
    if (report.exemplars.size() < kMaxExemplars) {
      (*outcome[t])["trial"] = t;
      report.exemplars.push_back(std::move(*outcome[t]));
    }
  }
  report.ok = report.failures == 0;
}

bool subset(const AnyBox& inner, const AnyBox& outer) {
  if (inner.index() != outer.index()) return false;
  if (const auto* a = std::get_if<AxisBox>(&inner)) return box_subset(*a, std::get<AxisBox>(outer));
  return box_subset(std::get<TorusBox>(inner), std::get<TorusBox>(outer));
}

SolverOptions solver_options(const VerifyOptions& o) {
  return SolverOptions{o.budget, 1};
}

void check_budget(std::uint64_t n, std::size_t d, Geometry mode, const VerifyOptions& o) {
  const auto work = exact_work_estimate(n, d, mode);
  if (work > o.budget) {
    throw BudgetExceeded("exact solver work " + std::to_string(work) + " for n=" + std::to_string(n) +
                         ", d=" + std::to_string(d) + " exceeds the budget " +
                         std::to_string(o.budget) + "; use fewer points or the grid method");
  }
}

}  // namespace

json to_json(const TrialReport& r) {
  return json{{"suite", r.suite},
              {"trials", r.trials},
              {"failures", r.failures},
              {"seed", r.seed},
              {"parameters", r.parameters},
              {"exemplars", r.exemplars},
              {"statistics", r.statistics},
              {"ok", r.ok}};
}

TrialReport check_net_property(Construction construction, std::size_t dim, double eps, bool periodic,
                               std::uint64_t trials, std::uint64_t seed,
                               const VerifyOptions& options) {
  double target = 0.5;
  switch (construction) {
    case Construction::netgen:
      netgen_params(dim, eps, periodic);
      break;
    case Construction::netd:
      if (periodic) throw std::invalid_argument("the net-d construction has no periodic version");
      netd_params(dim, eps);
      target = 0.25;
      break;
    case Construction::dinet:
      throw std::invalid_argument("use check_dinet_property for the dinet");
  }
  TrialReport report;
  report.suite = std::string("net-") + to_string(construction);
  report.trials = trials;
  report.seed = seed;
  report.parameters = {{"construction", to_string(construction)},
                       {"dim", dim},
                       {"eps", eps},
                       {"periodic", periodic},
                       {"ratio_floor", target}};
  std::vector<double> ratios(trials, 1.0);
  run_trials(report, options.threads, [&](std::size_t t) -> std::optional<json> {
    Rng rng(seed, t);
    const AnyBox box = periodic ? AnyBox(sample_torus_box(rng, dim, eps))
                                : AnyBox(sample_axis_box(rng, dim, eps));
    const CoverResult cover = construction == Construction::netgen
                                  ? netgen_cover(box, eps)
                                  : netd_cover(std::get<AxisBox>(box), eps);
    ratios[t] = cover.ratio;
    const bool inside = subset(cover.element, box);
    const bool large = cover.ratio >= target;
    if (inside && large) return std::nullopt;
    return json{{"box", to_json(box)},
                {"cover", to_json(cover)},
                {"reason", !inside ? "element not inside box" : "volume ratio below floor"}};
  });
  report.statistics = {{"min_ratio", trials ? *std::min_element(ratios.begin(), ratios.end()) : 1.0}};
  return report;
}

TrialReport check_dinet_property(std::size_t d, double eps, std::uint64_t trials, std::uint64_t seed,
                                 const VerifyOptions& options) {
  dinet_params(d, eps);
  constexpr std::size_t kMaxCornerDim = 16;
  constexpr int kSamples = 100;
  TrialReport report;
  report.suite = "dinet";
  report.trials = trials;
  report.seed = seed;
  report.parameters = {{"d", d}, {"eps", eps}, {"ratio_floor", 0.5}, {"samples", kSamples},
                       {"corners", d <= kMaxCornerDim}};
  std::vector<double> ratios(trials, 1.0);
  run_trials(report, options.threads, [&](std::size_t t) -> std::optional<json> {
    Rng rng(seed, t);
    const AxisBox box = sample_axis_box(rng, d, eps);
    const CoverResult cover = dinet_cover(box, eps);
    const auto& element = std::get<AxisBox>(cover.element);
    ratios[t] = cover.ratio;
    auto fail = [&](const char* reason, const std::vector<double>* z) -> json {
      json j{{"box", to_json(box)}, {"cover", to_json(cover)}, {"reason", reason}};
      if (z) j["point"] = *z;
      return j;
    };
    if (!(cover.ratio >= 0.5)) return fail("volume ratio below floor", nullptr);

    std::vector<double> lo = element.lo(), top(d), z(d), image(d);
    for (std::size_t i = 0; i < d; ++i) top[i] = std::nextafter(element.side(i).hi(), 0.0);
    auto maps_inside = [&](const std::vector<double>& p) {
      for (std::size_t i = 0; i < d; ++i) image[i] = phi_eps(p[i], eps);
      return contains(box, image);
    };
    if (d <= kMaxCornerDim) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        for (std::size_t i = 0; i < d; ++i) z[i] = (mask >> i) & 1u ? top[i] : lo[i];
        if (!maps_inside(z)) return fail("corner maps outside the box", &z);
      }
    }
    for (int s = 0; s < kSamples; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        const auto& side = element.side(i);
        z[i] = std::min(side.lo() + rng.uniform() * side.length(), top[i]);
      }
      if (!maps_inside(z)) return fail("sample maps outside the box", &z);
    }
    return std::nullopt;
  });
  report.statistics = {{"min_ratio", trials ? *std::min_element(ratios.begin(), ratios.end()) : 1.0}};
  return report;
}

TrialReport monte_carlo_lemma(std::size_t d, double eps, double delta, Construction construction,
                              std::uint64_t trials, std::uint64_t seed, double multiplier,
                              const VerifyOptions& options) {
  if (d > 3) throw std::invalid_argument("the Monte Carlo check is limited to d <= 3");
  if (!(multiplier >= 1.0)) throw std::invalid_argument("point multiplier must be at least 1");
  double log_net = 0.0;
  switch (construction) {
    case Construction::netgen: log_net = netgen_cardinality_bound(d, eps).log_bound; break;
    case Construction::dinet: log_net = dinet_cardinality_bound(d, eps).log_bound; break;
    case Construction::netd: log_net = netd_cardinality_bound(d, eps).log_bound; break;
  }
  const LemmaCount count = lemma_point_count(log_net, delta, eps);
  const auto n = static_cast<std::uint64_t>(std::ceil(static_cast<double>(count.points) * multiplier));
  check_budget(n, d, Geometry::cube, options);
  const bool adjusted = construction == Construction::dinet;

  TrialReport report;
  report.suite = "lemma";
  report.trials = trials;
  report.seed = seed;
  report.parameters = {{"d", d},           {"eps", eps},
                       {"delta", delta},   {"construction", to_string(construction)},
                       {"multiplier", multiplier}, {"adjusted", adjusted}};
  std::vector<double> values(trials, 0.0);
  run_trials(report, options.threads, [&](std::size_t t) -> std::optional<json> {
    SampleConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.seed = seed;
    cfg.stream = t;
    cfg.adjusted = adjusted;
    if (adjusted) cfg.eps = eps;
    const PointSet points = sample_points(cfg);
    const auto result = exact_dispersion_cube(points, solver_options(options));
    values[t] = result.value;
    if (result.value <= eps) return std::nullopt;
    return json{{"dispersion", result.value}, {"witness", to_json(result.witness)}};
  });
  const double tr = static_cast<double>(std::max<std::uint64_t>(trials, 1));
  const double fraction = static_cast<double>(trials - report.failures) / tr;
  const double sigma = std::sqrt(fraction * (1.0 - fraction) / tr);
  const double threshold = std::max(0.0, count.success_floor - 3.0 * sigma);
  report.ok = fraction >= threshold;
  report.statistics = {{"points", n},
                       {"log_net_size", log_net},
                       {"lemma_bound", count.bound},
                       {"success_fraction", fraction},
                       {"sigma", sigma},
                       {"success_floor", count.success_floor},
                       {"threshold", threshold},
                       {"max_dispersion", trials ? *std::max_element(values.begin(), values.end()) : 0.0}};
  return report;
}

EmpiricalN empirical_N(double eps, std::size_t d, std::uint64_t trials_per_n, double quantile,
                       std::uint64_t seed, const VerifyOptions& options) {
  if (d > 3) throw std::invalid_argument("empirical N is limited to d <= 3");
  if (!(eps >= 0.05 && eps < 1.0)) throw std::invalid_argument("empirical N needs eps in [0.05,1)");
  if (!(quantile >= 0.0 && quantile <= 1.0)) throw std::invalid_argument("quantile must lie in [0,1]");
  if (trials_per_n == 0) throw std::invalid_argument("trials per n must be positive");
  constexpr std::uint64_t kCap = 10'000;

  EmpiricalN out;
  auto probe = [&](std::uint64_t n) {
    if (n > kCap) throw std::runtime_error("empirical N search exceeded n = 10000");
    check_budget(n, d, Geometry::cube, options);
    std::vector<double> values(trials_per_n);
    parallel_for(trials_per_n, resolve_threads(options.threads), [&](std::size_t t, unsigned) {
      Rng rng(seed, (n << 32) | t);
      values[t] = exact_dispersion_cube(sample_uniform(rng, n, d), solver_options(options)).value;
    });
    std::sort(values.begin(), values.end());
    const auto k = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(trials_per_n - 1)));
    out.probes.emplace_back(n, values[k]);
    return values[k];
  };

  std::uint64_t hi = 1;
  double hi_value = probe(hi);
  std::uint64_t lo = 0;  // largest n known to fail
  while (hi_value > eps) {
    lo = hi;
    hi *= 2;
    hi_value = probe(hi);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const double v = probe(mid);
    if (v <= eps) {
      hi = mid;
      hi_value = v;
    } else {
      lo = mid;
    }
  }
  out.n = hi;
  out.dispersion = hi_value;
  return out;
}

TrialReport torus_lower_consistency(std::size_t d, std::uint64_t n, std::uint64_t sets,
                                    std::uint64_t seed, const VerifyOptions& options) {
  if (d != 2 && d != 3) throw std::invalid_argument("torus lower check needs d in {2,3}");
  if (n < 2 * d || n > 16) throw std::invalid_argument("torus lower check needs 2d <= n <= 16");
  check_budget(n, d, Geometry::torus, options);
  const double floor = static_cast<double>(d) / static_cast<double>(n);
  TrialReport report;
  report.suite = "torus-lower";
  report.trials = sets;
  report.seed = seed;
  report.parameters = {{"d", d}, {"n", n}, {"floor", floor}};
  std::vector<double> values(sets, 1.0);
  run_trials(report, options.threads, [&](std::size_t t) -> std::optional<json> {
    Rng rng(seed, t);
    const PointSet points = sample_uniform(rng, n, d);
    const auto result = exact_dispersion_torus(points, solver_options(options));
    values[t] = result.value;
    if (result.value >= floor - 1e-9) return std::nullopt;
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < points.size(); ++i) pts.emplace_back(points[i].begin(), points[i].end());
    return json{{"points", pts}, {"dispersion", result.value}, {"witness", to_json(result.witness)}};
  });
  report.statistics = {{"min_dispersion", sets ? *std::min_element(values.begin(), values.end()) : 1.0}};
  return report;
}

}  // namespace dispersion
