#include "dispersion/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dispersion {
namespace {

std::optional<double> finite_exp(double log_value) {
  if (log_value < std::log(std::numeric_limits<double>::max())) return std::exp(log_value);
  return std::nullopt;
}

BoundReport make(std::string formula, std::string regime, double log_value, double C,
                 std::optional<double> eps, std::size_t d) {
  BoundReport r;
  r.formula = std::move(formula);
  r.regime = std::move(regime);
  r.log_value = log_value;
  r.value = finite_exp(log_value);
  r.C = C;
  r.eps = eps;
  r.d = d;
  return r;
}

BoundReport plain(std::string formula, std::string regime, double value, std::optional<double> eps,
                  std::size_t d) {
  BoundReport r = make(std::move(formula), std::move(regime), std::log(value), 0.0, eps, d);
  r.value = value;
  return r;
}

std::optional<std::string> join(bool a, const char* na, bool b, const char* nb) {
  if (a && b) return std::string(na) + "+" + nb;
  if (a) return std::string(na);
  if (b) return std::string(nb);
  return std::nullopt;
}

void check_eps_d(double eps, std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0,1/2]");
}

}  // namespace

LemmaCount lemma_point_count(double log_net_size, double delta, double eps) {
  if (!(log_net_size >= std::log(3.0))) {
    throw std::invalid_argument("net must have at least 3 elements (log size >= ln 3)");
  }
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0,1)");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
  LemmaCount r;
  r.bound = 3.0 * log_net_size / ((1.0 - delta) * eps);
  r.points = static_cast<std::uint64_t>(std::ceil(r.bound));
  r.success_floor = -std::expm1(-log_net_size);
  return r;
}

std::vector<Branch> upper_N_branches(double eps, std::size_t d, double C, Geometry mode) {
  check_eps_d(eps, d);
  if (!(C >= 1.0)) throw std::invalid_argument("constant C must be at least 1");
  const double dd = static_cast<double>(d);
  const double lnC = std::log(C);
  const double lnd = std::log(dd);
  const double L = std::log(1.0 / eps);  // ln(1/eps)
  const bool below_exp_d = L >= dd;      // eps <= e^-d
  const bool above_exp_d = L <= dd;      // eps >= e^-d

  std::vector<Branch> out;
  auto add = [&](BoundReport r, std::optional<std::string> admitted) {
    r.admitted_by = admitted;
    out.push_back({std::move(r), admitted.has_value()});
  };

  if (mode == Geometry::cube) {
    const double table_large = lnd * lnd / (dd * std::log(std::log(2.0 * dd)));
    add(make("th2", "large-eps", lnC + std::log(lnd) + std::log(L) + 2.0 * L, C, eps, d),
        join(eps >= table_large, "table", eps >= lnd / dd, "th2"));
    add(make("th1-ii", "moderate", lnC + lnd + std::log(std::log(std::log(2.0 / eps))) + L, C, eps, d),
        join(eps <= table_large && above_exp_d, "table", above_exp_d, "th1-ii"));
    const double Cd = std::pow(C, dd);
    add(make("th1-i", "small", lnC + std::log(lnd) + std::log(L) + L, C, eps, d),
        join(below_exp_d && L <= Cd, "table", below_exp_d, "th1-i"));
    add(make("table-tiny", "tiny", dd * lnC + L, C, eps, d),
        L >= Cd ? std::optional<std::string>("table") : std::nullopt);
  } else {
    add(make("th-per-i", "small", lnC + std::log(lnd) + std::log(L) + L, C, eps, d),
        below_exp_d ? std::optional<std::string>("th-per-i") : std::nullopt);
    add(make("th-per-ii", "moderate", lnC + lnd + std::log(lnd) + L, C, eps, d),
        above_exp_d ? std::optional<std::string>("th-per-ii") : std::nullopt);
  }
  return out;
}

BoundReport regime_upper_N(double eps, std::size_t d, double C, Geometry mode) {
  const auto branches = upper_N_branches(eps, d, C, mode);
  const BoundReport* best = nullptr;
  for (const auto& b : branches) {
    if (b.applicable && (!best || b.report.log_value < best->log_value)) best = &b.report;
  }
  if (!best) throw std::logic_error("no applicable upper bound branch");
  return *best;
}

BoundReport regime_upper_disp(std::uint64_t n, std::size_t d, double C, Geometry mode) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(C >= 1.0)) throw std::invalid_argument("constant C must be at least 1");
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double lnd = std::log(dd);
  const double lnC = std::log(C);
  const double floor_n = mode == Geometry::cube ? 2.0 * lnd : 2.0 * dd * lnd;
  if (nn < floor_n) {
    throw std::invalid_argument(std::string("n below the range of the bound (needs n >= ") +
                                (mode == Geometry::cube ? "2 ln d" : "2 d ln d") + ")");
  }
  const bool large_n = std::log(nn) >= dd + lnd + std::log(lnd);  // n >= e^d d ln d
  const std::string prefix = mode == Geometry::cube ? "disp1-" : "th-per-disp-";
  BoundReport r;
  if (large_n) {
    r = make(prefix + "i", "large-n", lnC + std::log(lnd) - std::log(nn) + std::log(std::log(nn / lnd)),
             C, std::nullopt, d);
  } else if (mode == Geometry::torus) {
    r = make(prefix + "ii", "moderate-n", lnC + lnd + std::log(lnd) - std::log(nn), C, std::nullopt, d);
  } else {
    const double lnlnd = std::log(lnd);
    const double mid_floor = dd * dd * lnlnd * lnlnd / (lnd * lnd);
    if (nn >= mid_floor) {
      const double ln_ratio = std::log(nn / dd);
      if (ln_ratio > 1.0) {
        r = make(prefix + "ii", "moderate-n", lnC + lnd - std::log(nn) + std::log(std::log(ln_ratio)), C,
                 std::nullopt, d);
      } else {
        r = make(prefix + "ii", "moderate-n", 0.0, C, std::nullopt, d);
        r.note = "ln ln(n/d) <= 0; trivial bound 1 reported";
      }
    } else {
      r = make(prefix + "iii", "small-n",
               0.5 * (lnC + std::log(lnd) - std::log(nn) + std::log(std::log(nn / lnd))), C,
               std::nullopt, d);
    }
  }
  r.n = n;
  return r;
}

std::vector<BoundReport> lower_bounds(double eps, std::size_t d, std::optional<std::uint64_t> n,
                                      double c) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  const double dd = static_cast<double>(d);
  std::vector<BoundReport> out;
  out.push_back(plain("trivial", "N", 1.0 / eps - 1.0, eps, d));
  if (eps < 0.25) {
    out.push_back(plain("AHR", "N", (1.0 - 4.0 * eps) * std::log2(dd) / (4.0 * eps), eps, d));
  }
  out.push_back(plain("torus", "tilde-N", dd / eps, eps, d));
  auto lrb = plain("random-method", "method-limit",
                   std::max(c / eps * std::log(1.0 / eps), dd / (2.0 * eps)), eps, d);
  lrb.C = c;
  lrb.note = "limit of uniform random points, not a bound on N";
  out.push_back(lrb);
  if (n) {
    auto t = plain("trivial-disp", "disp", 1.0 / (static_cast<double>(*n) + 1.0), std::nullopt, d);
    t.n = n;
    out.push_back(t);
  }
  return out;
}

std::vector<BoundReport> comparison_bounds(double eps, std::size_t d) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  const double dd = static_cast<double>(d);
  std::vector<BoundReport> out;
  out.push_back(plain("Rudolf", "N", 8.0 * dd / eps * std::log2(33.0 / eps), eps, d));
  out.push_back(make("Larcher", "N", (7.0 * dd + 1.0) * std::log(2.0) + std::log(1.0 / eps), 0.0,
                     eps, d));
  if (eps < 0.25) {
    const double l2 = std::log2(1.0 / eps);
    out.push_back(plain("Ullrich-Vybiral", "N", 128.0 / (eps * eps) * l2 * l2 * std::log2(dd), eps, d));
  }
  out.push_back(plain("Rudolf-torus", "tilde-N",
                      8.0 * dd / eps * (std::log(dd) + std::log(8.0 / eps)), eps, d));
  return out;
}

SosnovecBound sosnovec_large_eps(double eps) {
  if (!(eps > 0.25)) throw std::invalid_argument("the large-eps bound needs eps > 1/4");
  const double q = 1.0 / (eps - 0.25);
  const double r = std::round(q);
  const double f = std::abs(q - r) <= 1e-9 * std::max(1.0, q) ? r : std::floor(q);
  SosnovecBound out;
  out.value = 1 + static_cast<std::uint64_t>(f);
  if (eps >= 0.5) out.known_value = 1;
  return out;
}

std::vector<RegimeRow> regime_table(std::size_t d, const std::vector<double>& eps_grid, double C,
                                    double c, Geometry mode) {
  std::vector<RegimeRow> rows;
  for (double eps : eps_grid) {
    RegimeRow row;
    row.eps = eps;
    row.upper = regime_upper_N(eps, d, C, mode);
    row.lower = lower_bounds(eps, d, std::nullopt, c);
    if (mode == Geometry::cube && eps > 0.25) row.sosnovec = sosnovec_large_eps(eps);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dispersion
