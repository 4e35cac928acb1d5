#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dispersion/solver.hpp"  // Geometry

namespace dispersion {

inline constexpr double kDefaultC = 1000.0;
inline constexpr double kDefaultCLrb = 1.0;

struct BoundReport {
  std::string formula;  // th1-i, th1-ii, th2, table-tiny, th-per-i, ...
  std::string regime;
  double log_value = 0.0;
  std::optional<double> value;  // exp(log_value) when representable
  double C = kDefaultC;
  std::optional<double> eps;
  std::size_t d = 0;
  std::optional<std::uint64_t> n;
  // Which hypothesis admitted the branch ("table", "th2", "table+th2", ...).
  std::optional<std::string> admitted_by;
  std::optional<std::string> note;
};

struct LemmaCount {
  double bound = 0.0;       // 3 log|N| / ((1-delta) eps)
  std::uint64_t points = 0;  // ceil(bound)
  double success_floor = 0.0;  // 1 - 1/|N|
};

// Number of uniform points the union bound asks for, given ln|N|.
// delta in [0,1), eps in (0,1]; ln|N| must be at least ln 3.
LemmaCount lemma_point_count(double log_net_size, double delta, double eps);

struct Branch {
  BoundReport report;
  bool applicable = false;
};

// Every branch of the upper bound for N(eps,d) with its applicability.
// eps in (0,1/2], d >= 2.
std::vector<Branch> upper_N_branches(double eps, std::size_t d, double C, Geometry mode);
// Minimum over the applicable branches.
BoundReport regime_upper_N(double eps, std::size_t d, double C = kDefaultC,
                           Geometry mode = Geometry::cube);

// Upper bound for the minimal dispersion with n points. Cube needs
// n >= 2 ln d, torus n >= 2 d ln d. Branches are tried from the largest n
// range down, so a boundary value belongs to the branch above it.
BoundReport regime_upper_disp(std::uint64_t n, std::size_t d, double C = kDefaultC,
                              Geometry mode = Geometry::cube);

// trivial, AHR (eps < 1/4 only), torus and random-method; with n also the
// trivial dispersion bound 1/(n+1).
std::vector<BoundReport> lower_bounds(double eps, std::size_t d,
                                      std::optional<std::uint64_t> n = std::nullopt,
                                      double c = kDefaultCLrb);

// Earlier upper bounds, for comparison: Rudolf, Larcher, Ullrich-Vybiral and
// Rudolf's periodic bound.
std::vector<BoundReport> comparison_bounds(double eps, std::size_t d);

struct SosnovecBound {
  std::uint64_t value = 0;
  std::optional<std::uint64_t> known_value;  // 1 for eps >= 1/2
};

// 1 + floor(1/(eps - 1/4)) for eps > 1/4. A quotient within 1e-9 of an
// integer is taken as that integer.
SosnovecBound sosnovec_large_eps(double eps);

struct RegimeRow {
  double eps = 0.0;
  BoundReport upper;
  std::vector<BoundReport> lower;
  std::optional<SosnovecBound> sosnovec;
};

std::vector<RegimeRow> regime_table(std::size_t d, const std::vector<double>& eps_grid,
                                    double C = kDefaultC, double c = kDefaultCLrb,
                                    Geometry mode = Geometry::cube);

}  // namespace dispersion
