#include "dispersion/nets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

namespace dispersion {
namespace {

constexpr double kGridTol = 1e-12;

// Smallest t with t*delta >= a.
std::int64_t snap_up(double a, double delta) {
  auto t = static_cast<std::int64_t>(std::ceil(a / delta));
  while (t > 0 && static_cast<double>(t - 1) * delta >= a) --t;
  while (static_cast<double>(t) * delta < a) ++t;
  return t;
}

// Largest t with t*delta <= b.
std::int64_t snap_down(double b, double delta) {
  auto t = static_cast<std::int64_t>(std::floor(b / delta));
  while (static_cast<double>(t) * delta > b) --t;
  while (static_cast<double>(t + 1) * delta <= b) ++t;
  return t;
}

std::int64_t grid_steps(double delta) {
  auto s = static_cast<std::int64_t>(std::floor(1.0 / delta));
  while (static_cast<double>(s) * delta > 1.0) --s;
  while (static_cast<double>(s + 1) * delta <= 1.0) ++s;
  return s;
}

std::optional<double> finite_exp(double log_value) {
  if (log_value < std::log(std::numeric_limits<double>::max())) return std::exp(log_value);
  return std::nullopt;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void require_volume(double vol, double eps) {
  if (vol < eps) throw std::invalid_argument("box below volume threshold");
}

// Every assignment of m axes to blocks with the partition's block sizes.
std::vector<std::vector<int>> all_assignments(const DyadicPartition& part) {
  std::vector<std::vector<int>> out;
  std::vector<std::size_t> left = part.sizes;
  std::vector<int> current(part.m);
  auto rec = [&](auto&& self, std::size_t axis) -> void {
    if (axis == part.m) {
      out.push_back(current);
      return;
    }
    for (std::size_t j = 0; j < left.size(); ++j) {
      if (left[j] == 0) continue;
      --left[j];
      current[axis] = static_cast<int>(j);
      self(self, axis + 1);
      ++left[j];
    }
  };
  rec(rec, 0);
  return out;
}

struct Endpoints {
  std::vector<double> lo;
  std::vector<double> hi;
  bool periodic = false;
};

Endpoints endpoints(const AnyBox& box) {
  if (const auto* b = std::get_if<AxisBox>(&box)) return {b->lo(), b->hi(), false};
  const auto& t = std::get<TorusBox>(box);
  return {t.a(), t.b(), true};
}

struct NetGenOutput {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<AxisCode> codes;
};

// Core of the general cover on explicit endpoints and lengths.
NetGenOutput netgen_snap(const NetGenParams& params, std::span<const double> a,
                         std::span<const double> b, std::span<const double> lengths) {
  const std::size_t m = params.m;
  const auto blocks = params.partition.assign(sigma_order(lengths));
  NetGenOutput out{std::vector<double>(m), std::vector<double>(m), std::vector<AxisCode>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    const int j = blocks[i];
    const double delta = params.spacing[j];
    const std::int64_t s = params.steps[j];
    const double floor_len = std::ldexp(delta, params.partition.k + 3);
    if (lengths[i] < floor_len * (1.0 - kGridTol)) {
      throw std::logic_error("side shorter than its block allows (" + num(lengths[i]) + " < " +
                             num(floor_len) + ")");
    }
    std::int64_t tx = snap_up(a[i], delta);
    if (tx > s) {
      if (!params.periodic) throw std::logic_error("lower endpoint beyond the last grid value");
      tx = 0;
    }
    const std::int64_t ty = std::min(snap_down(b[i], delta), s);
    out.lo[i] = params.grid_value(j, tx);
    out.hi[i] = params.grid_value(j, ty);
    if (params.periodic ? out.lo[i] == out.hi[i] : !(out.lo[i] < out.hi[i])) {
      throw std::logic_error("snapped interval is degenerate");
    }
    out.codes[i] = AxisCode{j, 0, tx, ty};
  }
  return out;
}

CoverResult netgen_cover_axis(const AxisBox& box, double eps, bool check_volume) {
  const auto params = netgen_params(box.dim(), eps, false);
  if (check_volume) require_volume(box.volume(), eps);
  std::vector<double> lengths;
  for (const auto& s : box.sides()) lengths.push_back(s.length());
  auto snapped = netgen_snap(params, box.lo(), box.hi(), lengths);
  CoverResult r;
  r.element = AxisBox(snapped.lo, snapped.hi);
  r.family = FamilyId{Construction::netgen, std::move(snapped.codes)};
  r.ratio = std::get<AxisBox>(r.element).volume() / box.volume();
  return r;
}

// Lengths, their ascending-rank order and the first `count` axes of it,
// re-sorted by index.
std::vector<std::size_t> shortest_axes(const AxisBox& box, std::size_t count) {
  std::vector<double> lengths;
  for (const auto& s : box.sides()) lengths.push_back(s.length());
  auto order = sigma_order(lengths).order;
  std::vector<std::size_t> head(order.begin(), order.begin() + static_cast<long>(count));
  std::sort(head.begin(), head.end());
  return head;
}

}  // namespace

SigmaOrder sigma_order(std::span<const double> lengths) {
  SigmaOrder s;
  s.order.resize(lengths.size());
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](std::size_t x, std::size_t y) { return lengths[x] < lengths[y]; });
  return s;
}

DyadicPartition dyadic_partition(std::size_t m) {
  if (m < 2) throw std::invalid_argument("dyadic partition needs m >= 2");
  DyadicPartition p;
  p.m = m;
  p.k = static_cast<int>(std::bit_width(m)) - 1;
  p.sizes.push_back(2);
  for (int j = 2; j <= p.k; ++j) p.sizes.push_back(std::size_t{1} << (j - 1));
  p.sizes.push_back(m - (std::size_t{1} << p.k));
  return p;
}

int DyadicPartition::block_of_rank(std::size_t position) const {
  const std::size_t p = position + 1;
  if (p <= 2) return 0;
  return static_cast<int>(std::bit_width(p - 1)) - 1;
}

std::vector<int> DyadicPartition::assign(const SigmaOrder& sigma) const {
  std::vector<int> blocks(sigma.order.size());
  for (std::size_t r = 0; r < sigma.order.size(); ++r) blocks[sigma.order[r]] = block_of_rank(r);
  return blocks;
}

std::optional<std::int64_t> NetGenParams::grid_index(int block, double x) const {
  const double delta = spacing[block];
  const auto t = static_cast<std::int64_t>(std::llround(x / delta));
  if (t < 0 || t > steps[block]) return std::nullopt;
  if (std::abs(grid_value(block, t) - x) > kGridTol) return std::nullopt;
  return t;
}

NetGenParams netgen_params(std::size_t m, double eps, bool periodic) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  NetGenParams p;
  p.m = m;
  p.eps = eps;
  p.periodic = periodic;
  p.partition = dyadic_partition(m);
  for (int j = 0; j <= p.partition.k; ++j) {
    const double delta = std::ldexp(std::pow(eps, std::ldexp(1.0, -j)), -p.partition.k - 3);
    p.spacing.push_back(delta);
    p.steps.push_back(grid_steps(delta));
  }
  return p;
}

const char* to_string(Construction c) {
  switch (c) {
    case Construction::netgen: return "netgen";
    case Construction::netd: return "netd";
    case Construction::dinet: return "dinet";
  }
  return "?";
}

Construction construction_from_string(const std::string& name) {
  if (name == "netgen") return Construction::netgen;
  if (name == "netd") return Construction::netd;
  if (name == "dinet") return Construction::dinet;
  throw std::invalid_argument("unknown construction: " + name);
}

CoverResult netgen_cover(const AxisBox& box, double eps) {
  return netgen_cover_axis(box, eps, true);
}

CoverResult netgen_cover(const TorusBox& box, double eps) {
  const auto params = netgen_params(box.dim(), eps, true);
  require_volume(box.volume(), eps);
  std::vector<double> lengths;
  for (const auto& s : box.sides()) {
    if (s.punctured()) throw std::invalid_argument("punctured periodic intervals cannot be covered");
    lengths.push_back(s.length());
  }
  auto snapped = netgen_snap(params, box.a(), box.b(), lengths);
  CoverResult r;
  r.element = TorusBox(snapped.lo, snapped.hi);
  r.family = FamilyId{Construction::netgen, std::move(snapped.codes)};
  r.ratio = std::get<TorusBox>(r.element).volume() / box.volume();
  return r;
}

CoverResult netgen_cover(const AnyBox& box, double eps) {
  return std::visit([&](const auto& b) { return netgen_cover(b, eps); }, box);
}

CardinalityBound netgen_cardinality_bound(std::size_t m, double eps) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  const double md = static_cast<double>(m);
  const double L = std::log(1.0 / eps);
  CardinalityBound r;
  r.general_log = 4.0 * md * std::log(14.0 * md) + 2.0 * std::log2(2.0 * md) * L;
  r.log_bound = r.general_log;
  if (std::has_single_bit(m)) {
    r.refined_log = 2.0 * md * std::log(24.0 * md) + 2.0 * std::log2(md) * L;
    r.log_bound = *r.refined_log;
  }
  r.value = finite_exp(r.log_bound);
  return r;
}

bool netgen_member(const NetGenParams& params, const AnyBox& box) {
  const auto e = endpoints(box);
  if (e.periodic != params.periodic || e.lo.size() != params.m) return false;
  const std::size_t blocks = params.spacing.size();
  std::vector<std::vector<char>> on(params.m, std::vector<char>(blocks));
  for (std::size_t i = 0; i < params.m; ++i) {
    for (std::size_t j = 0; j < blocks; ++j) {
      on[i][j] = params.grid_index(static_cast<int>(j), e.lo[i]).has_value() &&
                 params.grid_index(static_cast<int>(j), e.hi[i]).has_value();
    }
  }
  for (const auto& assignment : all_assignments(params.partition)) {
    bool ok = true;
    for (std::size_t i = 0; i < params.m && ok; ++i) ok = on[i][assignment[i]];
    if (ok) return true;
  }
  return false;
}

std::uint64_t netgen_enumerate(const NetGenParams& params, std::uint64_t cap,
                               const std::function<void(const AnyBox&)>& sink) {
  const auto bound = netgen_cardinality_bound(params.m, params.eps);
  if (bound.log_bound > std::log(static_cast<double>(cap))) {
    throw CapExceeded("net cardinality bound exp(" + num(bound.log_bound) + ") exceeds cap " +
                          std::to_string(cap),
                      bound.log_bound);
  }
  return netgen_for_each(params, sink);
}

std::uint64_t netgen_for_each(const NetGenParams& params, const std::function<void(const AnyBox&)>& sink) {
  const std::size_t blocks = params.spacing.size();
  // Admissible endpoint index pairs per block, with a mask of the blocks
  // whose grids contain both endpoints.
  struct Pair {
    double x, y;
    std::uint32_t mask;
  };
  std::vector<std::vector<Pair>> pairs(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    const int jb = static_cast<int>(j);
    const std::int64_t s = params.steps[j];
    for (std::int64_t t = 0; t <= s; ++t) {
      for (std::int64_t u = 0; u <= s; ++u) {
        const double x = params.grid_value(jb, t);
        const double y = params.grid_value(jb, u);
        if (params.periodic ? (t == u || !(torus_length(x, y) > 0.0)) : !(x < y)) continue;
        std::uint32_t mask = 0;
        for (std::size_t q = 0; q < blocks; ++q) {
          const int qb = static_cast<int>(q);
          if (params.grid_index(qb, x) && params.grid_index(qb, y)) mask |= 1u << q;
        }
        pairs[j].push_back({x, y, mask});
      }
    }
  }

  const auto assignments = all_assignments(params.partition);
  const std::size_t m = params.m;
  std::uint64_t count = 0;
  std::vector<std::size_t> idx(m);
  std::vector<double> lo(m), hi(m);
  for (std::size_t p = 0; p < assignments.size(); ++p) {
    const auto& blk = assignments[p];
    bool any_empty = false;
    for (std::size_t i = 0; i < m; ++i) any_empty = any_empty || pairs[blk[i]].empty();
    if (any_empty) continue;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      bool seen = false;
      for (std::size_t q = 0; q < p && !seen; ++q) {
        bool all = true;
        for (std::size_t i = 0; i < m && all; ++i) {
          all = (pairs[blk[i]][idx[i]].mask >> assignments[q][i]) & 1u;
        }
        seen = all;
      }
      if (!seen) {
        for (std::size_t i = 0; i < m; ++i) {
          lo[i] = pairs[blk[i]][idx[i]].x;
          hi[i] = pairs[blk[i]][idx[i]].y;
        }
        if (params.periodic) sink(AnyBox(TorusBox(lo, hi)));
        else sink(AnyBox(AxisBox(lo, hi)));
        ++count;
      }
      std::size_t i = 0;
      while (i < m && ++idx[i] == pairs[blk[i]].size()) idx[i++] = 0;
      if (i == m) break;
    }
  }
  return count;
}

std::vector<AnyBox> netgen_enumerate(std::size_t m, double eps, bool periodic, std::uint64_t cap) {
  std::vector<AnyBox> out;
  netgen_enumerate(netgen_params(m, eps, periodic), cap,
                   [&](const AnyBox& b) { out.push_back(b); });
  return out;
}

double NetDParams::pair_reach(int j) const {
  return std::ldexp(std::log(1.0 / eps), 1 - k - j);
}

bool NetDParams::in_pair_set(int j, double x, double y) const {
  const auto t = static_cast<std::int64_t>(std::llround(x / delta));
  const auto u = static_cast<std::int64_t>(std::llround((1.0 - y) / delta));
  if (t < 1 || t > s || std::abs(low_value(t) - x) > kGridTol) return false;
  if (u < 1 || u > s || std::abs(high_value(u) - y) > kGridTol) return false;
  const double reach = pair_reach(j);
  return x < y && x <= reach + delta + kGridTol && y >= 1.0 - reach - delta - kGridTol;
}

int NetDParams::block_of_rank(std::size_t position) const {
  const std::size_t p = position + 1;
  return static_cast<int>(std::bit_width(p - 1)) - k;
}

bool netd_regime(std::size_t d, double eps) {
  return d >= 4 && eps > 0.0 && eps <= 0.25 &&
         static_cast<double>(d) >= 4.0 * std::log(1.0 / eps);
}

NetDParams netd_params(std::size_t d, double eps) {
  if (!netd_regime(d, eps)) {
    throw RegimeError("outside net-d regime: needs d >= 4, eps <= 1/4 and d >= 4 ln(1/eps)");
  }
  NetDParams p;
  p.d = d;
  p.eps = eps;
  const double L = std::log(1.0 / eps);
  while (std::ldexp(1.0, p.k) < 2.0 * L) ++p.k;
  p.m = std::size_t{1} << p.k;
  p.n = static_cast<int>(std::bit_width(d)) - 1;
  p.delta = 1.0 / (8.0 * static_cast<double>(d));
  p.s = grid_steps(p.delta);
  while (p.s > 0 && p.high_value(p.s) < 0.0) --p.s;
  p.block_sizes.push_back(p.m);
  for (int j = 1; j <= p.n - p.k; ++j) p.block_sizes.push_back(std::size_t{1} << (p.k + j - 1));
  p.block_sizes.push_back(d - (std::size_t{1} << p.n));
  for (int j = 1; j <= p.n - p.k + 1; ++j) {
    const double reach = p.pair_reach(j);
    std::uint64_t count = 0;
    for (std::int64_t t = 1; t <= p.s && p.low_value(t) <= reach + p.delta; ++t) {
      for (std::int64_t u = 1; u <= p.s && p.high_value(u) >= 1.0 - reach - p.delta; ++u) {
        if (p.low_value(t) < p.high_value(u)) ++count;
      }
    }
    p.pair_counts.push_back(count);
  }
  return p;
}

CoverResult netd_cover(const AxisBox& box, double eps) {
  const auto params = netd_params(box.dim(), eps);
  require_volume(box.volume(), eps);
  const std::size_t d = box.dim();
  const double L = std::log(1.0 / eps);

  const auto inner_axes = shortest_axes(box, params.m);
  const auto inner = netgen_cover_axis(box.restrict_to(inner_axes), eps, false);
  const auto& inner_box = std::get<AxisBox>(inner.element);

  std::vector<double> lo(d), hi(d);
  std::vector<AxisCode> codes(d);
  for (std::size_t r = 0; r < inner_axes.size(); ++r) {
    const std::size_t i = inner_axes[r];
    lo[i] = inner_box.side(r).lo();
    hi[i] = inner_box.side(r).hi();
    const auto& c = inner.family.axes[r];
    codes[i] = AxisCode{-1, c.block, c.lo_index, c.hi_index};
  }

  std::vector<double> lengths;
  for (const auto& s : box.sides()) lengths.push_back(s.length());
  const auto sigma = sigma_order(lengths);
  for (std::size_t r = params.m; r < d; ++r) {
    const std::size_t i = sigma.order[r];
    const int j = params.block_of_rank(r);
    const double limit = 1.0 - L / std::ldexp(1.0, params.k + j - 1);
    if (!(lengths[i] > limit - kGridTol)) {
      throw std::logic_error("long side shorter than its block allows (" + num(lengths[i]) +
                             " <= " + num(limit) + ")");
    }
    const double a = box.side(i).lo();
    const double b = box.side(i).hi();
    const std::int64_t t = std::max<std::int64_t>(1, snap_up(a, params.delta));
    // Smallest u >= 1 with 1 - u*delta <= b.
    auto u = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((1.0 - b) / params.delta)));
    while (u > 1 && params.high_value(u - 1) <= b) --u;
    while (params.high_value(u) > b) ++u;
    lo[i] = params.low_value(t);
    hi[i] = params.high_value(u);
    if (!params.in_pair_set(j, lo[i], hi[i])) {
      throw std::logic_error("long-axis endpoints fall outside their pair set");
    }
    codes[i] = AxisCode{j, 0, t, u};
  }

  CoverResult res;
  AxisBox element(lo, hi);
  res.ratio = element.volume() / box.volume();
  res.element = std::move(element);
  res.family = FamilyId{Construction::netd, std::move(codes)};
  return res;
}

CardinalityBound netd_cardinality_bound(std::size_t d, double eps, double C) {
  const auto p = netd_params(d, eps);
  const double L = std::log(1.0 / eps);
  CardinalityBound r;
  r.general_log = 6.0 * static_cast<double>(d) * std::log(24.0 * static_cast<double>(p.m)) +
                  2.0 * static_cast<double>(p.k) * L;
  r.log_bound = r.general_log;
  r.headline_log = C * static_cast<double>(d) * std::log(L);
  r.value = finite_exp(r.log_bound);
  return r;
}

bool dinet_regime(std::size_t d, double eps) {
  return d >= 4 && eps > 0.0 && eps <= 0.5 &&
         static_cast<double>(d) >= std::log(1.0 / eps) / eps;
}

DinetParams dinet_params(std::size_t d, double eps) {
  if (!dinet_regime(d, eps)) {
    throw RegimeError("outside dinet regime: needs d >= 4, eps <= 1/2 and d >= ln(1/eps)/eps");
  }
  DinetParams p;
  p.d = d;
  p.eps = eps;
  const double target = std::log(1.0 / eps) / eps;
  auto m = static_cast<std::size_t>(std::ceil(target));
  while (m > 0 && static_cast<double>(m - 1) >= target) --m;
  while (static_cast<double>(m) < target) ++m;
  p.m = m;
  p.inner = netgen_params(m, eps, false);
  return p;
}

CoverResult dinet_cover(const AxisBox& box, double eps) {
  const auto params = dinet_params(box.dim(), eps);
  require_volume(box.volume(), eps);
  const std::size_t d = box.dim();
  const auto active = shortest_axes(box, params.m);
  const auto inner = netgen_cover_axis(box.restrict_to(active), eps, false);
  const auto& inner_box = std::get<AxisBox>(inner.element);

  std::vector<double> lo(d, 0.0), hi(d, 1.0);
  std::vector<AxisCode> codes(d);
  for (std::size_t r = 0; r < active.size(); ++r) {
    const std::size_t i = active[r];
    lo[i] = inner_box.side(r).lo();
    hi[i] = inner_box.side(r).hi();
    const auto& c = inner.family.axes[r];
    codes[i] = AxisCode{-1, c.block, c.lo_index, c.hi_index};
  }
  CoverResult res;
  AxisBox element(lo, hi);
  res.ratio = element.volume() / box.volume();
  res.element = std::move(element);
  res.family = FamilyId{Construction::dinet, std::move(codes)};
  return res;
}

CardinalityBound dinet_cardinality_bound(std::size_t d, double eps) {
  const auto p = dinet_params(d, eps);
  const double L = std::log(1.0 / eps);
  const double dd = static_cast<double>(d);
  const double md = static_cast<double>(p.m);
  CardinalityBound r;
  r.log_bound = 9.0 * L * std::log(18.0 * dd) / eps;
  r.general_log = 4.0 * md * std::log(18.0 * dd) + 2.0 * std::log2(2.0 * md) * L;
  r.value = finite_exp(r.log_bound);
  return r;
}

CoverResult cover_any(const AxisBox& box, double eps) {
  if (dinet_regime(box.dim(), eps)) return dinet_cover(box, eps);
  if (netd_regime(box.dim(), eps)) return netd_cover(box, eps);
  return netgen_cover(box, eps);
}

}  // namespace dispersion
