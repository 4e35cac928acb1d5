#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dispersion/geometry.hpp"
#include "dispersion/sampler.hpp"  // phi_eps

namespace dispersion {

// Raised when parameters fall outside the hypotheses of a construction.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by the enumerator when the cardinality bound exceeds the cap.
class CapExceeded : public std::length_error {
 public:
  CapExceeded(const std::string& what, double log_bound)
      : std::length_error(what), log_bound(log_bound) {}
  double log_bound;
};

// Permutation sorting side lengths nondecreasingly, ties by axis index.
// Indices are 0-based.
struct SigmaOrder {
  std::vector<std::size_t> order;
};

SigmaOrder sigma_order(std::span<const double> lengths);

// Grouping of m axes by length rank into blocks of sizes 2, 2, 4, ...,
// 2^(k-1), m - 2^k, where 2^k <= m < 2^(k+1).
struct DyadicPartition {
  std::size_t m = 0;
  int k = 0;
  std::vector<std::size_t> sizes;  // k+1 entries

  // 0-based block index of the axis at 0-based rank `position`.
  int block_of_rank(std::size_t position) const;
  // Block index per axis when ranks are given by `sigma`.
  std::vector<int> assign(const SigmaOrder& sigma) const;
};

DyadicPartition dyadic_partition(std::size_t m);

// Grid parameters of the general construction. Block j (0-based) uses the
// spacing 2^(-k-3) * eps^(2^-j) and the grid {0, spacing, ..., s_j * spacing}.
struct NetGenParams {
  std::size_t m = 0;
  double eps = 0.0;
  bool periodic = false;
  DyadicPartition partition;
  std::vector<double> spacing;
  std::vector<std::int64_t> steps;  // s_j

  double grid_value(int block, std::int64_t index) const {
    return static_cast<double>(index) * spacing[block];
  }
  // Index t with grid_value(block, t) within 1e-12 of x, if any.
  std::optional<std::int64_t> grid_index(int block, double x) const;
};

NetGenParams netgen_params(std::size_t m, double eps, bool periodic);

enum class Construction { netgen, netd, dinet };
const char* to_string(Construction c);
Construction construction_from_string(const std::string& name);

// Per-axis provenance of a net element. `block` is the partition block the
// axis was assigned to; the indices locate the endpoints on that block's grid.
//  netgen: block in [0,k], indices into the block grid.
//  netd:   block -1 for the inner (shortest m) axes, which carry the inner
//          netgen block in `inner_block`; otherwise block j >= 1 and indices t
//          with x = t*delta, y = 1 - t'*delta.
//  dinet:  block -1 for the active axes (inner netgen as above), 0 for the
//          full intervals [0,1).
struct AxisCode {
  int block = 0;
  int inner_block = 0;
  std::int64_t lo_index = 0;
  std::int64_t hi_index = 0;

  friend bool operator==(const AxisCode&, const AxisCode&) = default;
};

struct FamilyId {
  Construction construction = Construction::netgen;
  std::vector<AxisCode> axes;
};

struct CoverResult {
  AnyBox element = AxisBox::unit(1);
  FamilyId family;
  double ratio = 0.0;  // volume(element) / volume(box)
};

// Approximating net element for a box of volume >= eps (Remark: the cover map
// orders axes by length, assigns dyadic blocks, and snaps lower endpoints up
// and upper endpoints down to the block grids). Throws std::invalid_argument
// when the box volume is below eps.
CoverResult netgen_cover(const AxisBox& box, double eps);
CoverResult netgen_cover(const TorusBox& box, double eps);
CoverResult netgen_cover(const AnyBox& box, double eps);

struct CardinalityBound {
  double log_bound = 0.0;               // natural log of the reported bound
  std::optional<double> value;          // exp(log_bound) when finite
  double general_log = 0.0;             // (14m)^(4m) / eps^(2 log2(2m))
  std::optional<double> refined_log;    // (24m)^(2m) / eps^(2 log2 m), m a power of two
  std::optional<double> headline_log;   // construction-specific closed form
};

// Uses the power-of-two refinement whenever it applies.
CardinalityBound netgen_cardinality_bound(std::size_t m, double eps);

// Streams every element of the union over all dyadic partitions, each box
// once, and returns the count. No size guard.
std::uint64_t netgen_for_each(const NetGenParams& params, const std::function<void(const AnyBox&)>& sink);

// Same, but throws CapExceeded first when the cardinality bound exceeds `cap`.
std::uint64_t netgen_enumerate(const NetGenParams& params, std::uint64_t cap,
                               const std::function<void(const AnyBox&)>& sink);
std::vector<AnyBox> netgen_enumerate(std::size_t m, double eps, bool periodic, std::uint64_t cap);

// True if the box has the exact coordinates of a member of the net: some
// dyadic partition puts every endpoint on its block grid (tolerance 1e-12).
bool netgen_member(const NetGenParams& params, const AnyBox& box);

// Parameters of the long-axis construction for eps <= 1/4 and
// d >= 4 ln(1/eps).
struct NetDParams {
  std::size_t d = 0;
  double eps = 0.0;
  int k = 0;             // smallest with 2^k >= 2 ln(1/eps)
  std::size_t m = 0;     // 2^k
  int n = 0;             // 2^n <= d < 2^(n+1)
  double delta = 0.0;    // 1/(8d)
  std::int64_t s = 0;    // floor(1/delta)
  std::vector<std::size_t> block_sizes;  // |A_0| = m, |A_j| = 2^(k+j-1), |A_(n-k+1)| = d - 2^n
  std::vector<std::uint64_t> pair_counts;  // |P_j| for j = 1..n-k+1 (index j-1)

  double low_value(std::int64_t t) const { return static_cast<double>(t) * delta; }
  double high_value(std::int64_t t) const { return 1.0 - static_cast<double>(t) * delta; }
  // Endpoint limit 2^(1-k-j) ln(1/eps) defining P_j.
  double pair_reach(int j) const;
  bool in_pair_set(int j, double x, double y) const;
  // Block j >= 1 of the axis at 0-based rank `position` >= m.
  int block_of_rank(std::size_t position) const;
};

bool netd_regime(std::size_t d, double eps);
NetDParams netd_params(std::size_t d, double eps);
CoverResult netd_cover(const AxisBox& box, double eps);
// log of (24m)^(6d) / eps^(2 log2 m); headline_log is C d ln ln(1/eps).
CardinalityBound netd_cardinality_bound(std::size_t d, double eps, double C = 1000.0);

struct DinetParams {
  std::size_t d = 0;
  double eps = 0.0;
  std::size_t m = 0;  // smallest integer >= ln(1/eps)/eps
  NetGenParams inner;
};

bool dinet_regime(std::size_t d, double eps);
DinetParams dinet_params(std::size_t d, double eps);
// The element need not lie inside the box; every z in it satisfies
// phi_eps(z) in box.
CoverResult dinet_cover(const AxisBox& box, double eps);
// log_bound = 9 ln(1/eps) ln(18d) / eps; general_log holds the intermediate
// (18d)^(4m) / eps^(2 log2(2m)).
CardinalityBound dinet_cardinality_bound(std::size_t d, double eps);

// Tries dinet, then netd, then netgen, returning the first construction whose
// hypotheses hold.
CoverResult cover_any(const AxisBox& box, double eps);

}  // namespace dispersion
