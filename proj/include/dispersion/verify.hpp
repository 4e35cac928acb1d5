#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dispersion/nets.hpp"
#include "dispersion/solver.hpp"

namespace dispersion {

// Outcome of a randomized suite. Trial t draws from Rng(seed, t), so any
// exemplar can be replayed from the seed and its "trial" field.
struct TrialReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::uint64_t seed = 0;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<nlohmann::ordered_json> exemplars;  // at most kMaxExemplars
  nlohmann::ordered_json statistics = nlohmann::ordered_json::object();
  bool ok = true;
};

inline constexpr std::size_t kMaxExemplars = 10;

nlohmann::ordered_json to_json(const TrialReport& report);

struct VerifyOptions {
  unsigned threads = 1;
  std::uint64_t budget = SolverOptions{}.budget;
};

// Cover random boxes of volume >= eps and check B0 ⊆ B and the volume ratio
// (1/2 for netgen, 1/4 for netd). netd is cube only.
TrialReport check_net_property(Construction construction, std::size_t dim, double eps, bool periodic,
                               std::uint64_t trials, std::uint64_t seed,
                               const VerifyOptions& options = {});

// Cover random boxes with the dinet and check the ratio 1/2 and that phi_eps
// maps every corner of the element (for d <= 16) and 100 random points of it
// into the box. The corners of [x,y) are taken at x_i and the largest double
// below y_i.
TrialReport check_dinet_property(std::size_t d, double eps, std::uint64_t trials, std::uint64_t seed,
                                 const VerifyOptions& options = {});

// Draws N points, N from the union-bound count on the construction's
// cardinality bound (times `multiplier`), and checks exact dispersion <= eps.
// Passes when the success fraction is at least max(0, floor - 3 sigma).
TrialReport monte_carlo_lemma(std::size_t d, double eps, double delta, Construction construction,
                              std::uint64_t trials, std::uint64_t seed, double multiplier = 1.0,
                              const VerifyOptions& options = {});

struct EmpiricalN {
  std::uint64_t n = 0;      // upper estimate of N(eps,d)
  double dispersion = 0.0;  // the quantile achieved at n
  std::vector<std::pair<std::uint64_t, double>> probes;  // (n, quantile) in search order
};

// Smallest n found by doubling then bisection for which the `quantile` of the
// exact dispersion over `trials_per_n` uniform sets is <= eps. Quantile 0
// is the best trial. This is an upper estimate only.
EmpiricalN empirical_N(double eps, std::size_t d, std::uint64_t trials_per_n, double quantile,
                       std::uint64_t seed, const VerifyOptions& options = {});

// Every random n-point set must have periodic dispersion >= d/n. Requires
// d in {2,3}, 2d <= n <= 16.
TrialReport torus_lower_consistency(std::size_t d, std::uint64_t n, std::uint64_t sets,
                                    std::uint64_t seed, const VerifyOptions& options = {});

}  // namespace dispersion
