#include "dispersion/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "dispersion/bounds.hpp"
#include "dispersion/io.hpp"
#include "dispersion/nets.hpp"
#include "dispersion/sampler.hpp"
#include "dispersion/solver.hpp"
#include "dispersion/verify.hpp"

namespace dispersion::cli {

using json = nlohmann::ordered_json;

namespace {

// Verification suite failed with zero tolerance.
struct SuiteFailed {};

double parse_number(const std::string& s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number in eps grid: '" + s + "'");
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

Geometry geometry_from(const std::string& s) { return s == "torus" ? Geometry::torus : Geometry::cube; }

struct Globals {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  unsigned threads = 1;
  std::uint64_t budget = SolverOptions{}.budget;
  std::string output = "-";
  std::string format;
};

class Runner {
 public:
  Runner(Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  std::uint64_t seed() const {
    if (g_.seed_opt->count() == 0) throw std::invalid_argument("--seed is required for randomized commands");
    return g_.seed;
  }

  VerifyOptions verify_options() const { return VerifyOptions{g_.threads, g_.budget}; }
  SolverOptions solver_options() const { return SolverOptions{g_.budget, g_.threads}; }

  std::string format(const std::string& fallback) const {
    if (!g_.format.empty()) return g_.format;
    auto ends = [&](const char* suffix) {
      const std::string s(suffix);
      return g_.output.size() >= s.size() && g_.output.compare(g_.output.size() - s.size(), s.size(), s) == 0;
    };
    if (ends(".csv")) return "csv";
    if (ends(".json") || ends(".jsonl")) return "json";
    return fallback;
  }

  std::ostream& stream() {
    if (g_.output == "-") return out_;
    if (!file_) {
      file_ = std::make_unique<std::ofstream>(g_.output);
      if (!*file_) throw std::runtime_error("cannot write " + g_.output);
    }
    return *file_;
  }

  void emit(const json& j, const std::string& fallback = "json") {
    if (format(fallback) == "csv") stream() << json_to_csv(j);
    else stream() << j.dump(2) << "\n";
  }

  std::ostream& err() { return err_; }

 private:
  Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<std::ofstream> file_;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }
}

std::string summary_number(double x) { return format_double(x); }

}  // namespace

std::vector<double> parse_eps_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
    const auto parts = split(spec, ':');
    if (parts.size() != 4) throw std::invalid_argument("eps grid must read kind:a:b:k");
    const double a = parse_number(parts[1]);
    const double b = parse_number(parts[2]);
    const double k = parse_number(parts[3]);
    if (!(k >= 1.0) || k != std::floor(k)) throw std::invalid_argument("eps grid needs an integer count k >= 1");
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("eps grid endpoints must be positive");
    const auto count = static_cast<std::size_t>(k);
    const bool log = parts[0] == "log";
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
    }
    out.front() = a;
    if (count > 1) out.back() = b;
  } else {
    for (const auto& item : split(spec, ',')) out.push_back(parse_number(item));
  }
  if (out.empty()) throw std::invalid_argument("empty eps grid");
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dispersion of point sets: exact solver, nets, bounds and verification suites",
               "dispersion"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML or INI file");
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "Random seed (required by randomized commands)");
  app.add_option("--threads", g.threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();
  app.add_option("--budget", g.budget, "Work cap for the exact solver")->capture_default_str();
  app.add_option("--output", g.output, "Output path, - for stdout")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  // disp
  auto* disp = app.add_subcommand("disp", "Dispersion of a point set read from CSV");
  std::string disp_input, disp_mode = "cube", disp_method = "exact";
  int disp_resolution = 200;
  disp->add_option("--input", disp_input, "CSV file with one point per line")->required();
  disp->add_option("--mode", disp_mode)->check(CLI::IsMember({"cube", "torus"}))->capture_default_str();
  disp->add_option("--method", disp_method)->check(CLI::IsMember({"exact", "grid"}))->capture_default_str();
  disp->add_option("--resolution", disp_resolution, "Grid resolution r for --method grid")->capture_default_str();

  // net
  auto* net = app.add_subcommand("net", "Net constructions");
  net->require_subcommand(1);
  auto* cover = net->add_subcommand("cover", "Approximate a box by a net element");
  std::string cover_construction = "netgen", cover_box;
  double cover_eps = 0.0;
  bool cover_periodic = false;
  cover->add_option("--construction", cover_construction)
      ->check(CLI::IsMember({"netgen", "netd", "dinet"}))
      ->capture_default_str();
  cover->add_option("--eps", cover_eps, "Volume threshold")->required();
  cover->add_option("--box", cover_box, "Box JSON file")->required();
  cover->add_flag("--periodic", cover_periodic, "Require a periodic box");

  auto* enumerate = net->add_subcommand("enumerate", "Write every net element as JSON lines");
  std::size_t enum_m = 2;
  double enum_eps = 0.0;
  bool enum_periodic = false;
  std::uint64_t enum_cap = 100'000'000;
  enumerate->add_option("--m", enum_m, "Dimension")->required();
  enumerate->add_option("--eps", enum_eps)->required();
  enumerate->add_flag("--periodic", enum_periodic);
  enumerate->add_option("--cap", enum_cap, "Largest admissible cardinality bound")->capture_default_str();

  auto* nbound = net->add_subcommand("bound", "Cardinality bound of a net");
  std::string nbound_construction = "netgen";
  std::size_t nbound_d = 0;
  double nbound_eps = 0.0, nbound_C = kDefaultC;
  nbound->add_option("--construction", nbound_construction)
      ->check(CLI::IsMember({"netgen", "netd", "dinet"}))
      ->capture_default_str();
  nbound->add_option("--d,--m", nbound_d, "Dimension")->required();
  nbound->add_option("--eps", nbound_eps)->required();
  nbound->add_option("--const", nbound_C, "Constant C of the headline form")->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Upper and lower bounds for N(eps,d) and disp*(n,d)");
  bounds->require_subcommand(0, 1);
  double b_eps = 0.0, b_C = kDefaultC, b_c = kDefaultCLrb;
  std::size_t b_d = 0;
  std::uint64_t b_n = 0;
  std::string b_mode = "cube";
  auto* b_eps_opt = bounds->add_option("--eps", b_eps);
  auto* b_d_opt = bounds->add_option("--d", b_d);
  auto* b_n_opt = bounds->add_option("--n", b_n, "Also bound disp*(n,d)");
  bounds->add_option("--mode", b_mode)->check(CLI::IsMember({"cube", "torus"}))->capture_default_str();
  bounds->add_option("--const", b_C, "Constant C of the upper bounds")->capture_default_str();
  bounds->add_option("--c-lrb", b_c, "Constant c of the random-method limit")->capture_default_str();

  auto* table = bounds->add_subcommand("regime-table", "Bounds over a grid of eps values");
  std::size_t t_d = 0;
  std::string t_grid;
  table->add_option("--d", t_d)->required();
  table->add_option("--eps-grid", t_grid, "log:a:b:k, lin:a:b:k or a comma list")->required();

  // sample
  auto* sample = app.add_subcommand("sample", "Random point set as CSV");
  std::uint64_t s_n = 0;
  std::size_t s_d = 0;
  double s_eps = 0.0;
  bool s_adjusted = false, s_no_header = false;
  std::uint64_t s_stream = 0;
  sample->add_option("--n", s_n)->required();
  sample->add_option("--d", s_d)->required();
  auto* s_eps_opt = sample->add_option("--eps", s_eps, "Clamp parameter for --adjusted");
  sample->add_flag("--adjusted", s_adjusted, "Clamp coordinates to [eps, 1-eps]");
  sample->add_option("--stream", s_stream, "Stream index of the generator")->capture_default_str();
  sample->add_flag("--no-header", s_no_header, "Omit the x1,...,xd header");

  // verify
  auto* verify = app.add_subcommand("verify", "Randomized verification suites");
  verify->require_subcommand(1);
  auto* v_net = verify->add_subcommand("net", "Net property: B0 inside B with large volume");
  std::string vn_construction = "netgen";
  std::size_t vn_dim = 0;
  double vn_eps = 0.0;
  bool vn_periodic = false;
  std::uint64_t vn_trials = 1000;
  v_net->add_option("--construction", vn_construction)
      ->check(CLI::IsMember({"netgen", "netd"}))
      ->capture_default_str();
  v_net->add_option("--m,--d", vn_dim, "Dimension")->required();
  v_net->add_option("--eps", vn_eps)->required();
  v_net->add_flag("--periodic", vn_periodic);
  v_net->add_option("--trials", vn_trials)->capture_default_str();

  auto* v_dinet = verify->add_subcommand("dinet", "Dinet property under the clamp");
  std::size_t vd_d = 0;
  double vd_eps = 0.0;
  std::uint64_t vd_trials = 1000;
  v_dinet->add_option("--d", vd_d)->required();
  v_dinet->add_option("--eps", vd_eps)->required();
  v_dinet->add_option("--trials", vd_trials)->capture_default_str();

  auto* v_lemma = verify->add_subcommand("lemma", "Monte Carlo check of the union-bound point count");
  std::size_t vl_d = 2;
  double vl_eps = 0.0, vl_delta = 0.5, vl_mult = 1.0;
  std::string vl_construction = "netgen";
  std::uint64_t vl_trials = 200;
  v_lemma->add_option("--d", vl_d)->required();
  v_lemma->add_option("--eps", vl_eps)->required();
  v_lemma->add_option("--delta", vl_delta)->capture_default_str();
  v_lemma->add_option("--construction", vl_construction)
      ->check(CLI::IsMember({"netgen", "dinet"}))
      ->capture_default_str();
  v_lemma->add_option("--trials", vl_trials)->capture_default_str();
  v_lemma->add_option("--multiplier", vl_mult, "Scale the point count")->capture_default_str();

  auto* v_torus = verify->add_subcommand("torus-lower", "Periodic dispersion of random sets is at least d/n");
  std::size_t vt_d = 2;
  std::uint64_t vt_n = 0, vt_sets = 100;
  v_torus->add_option("--d", vt_d)->required();
  v_torus->add_option("--n", vt_n)->required();
  v_torus->add_option("--sets", vt_sets)->capture_default_str();

  auto* v_emp = verify->add_subcommand("empirical-n", "Upper estimate of N(eps,d) from random sets");
  std::size_t ve_d = 2;
  double ve_eps = 0.0, ve_quantile = 0.0;
  std::uint64_t ve_trials = 20;
  v_emp->add_option("--d", ve_d)->required();
  v_emp->add_option("--eps", ve_eps)->required();
  v_emp->add_option("--trials", ve_trials, "Random sets per n")->capture_default_str();
  v_emp->add_option("--quantile", ve_quantile, "0 = best set")->capture_default_str();

  for (auto* sub : {disp, net, cover, enumerate, nbound, bounds, table, sample, verify, v_net, v_dinet,
                    v_lemma, v_torus, v_emp}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  Runner r(g, out, err);
  try {
    if (disp->parsed()) {
      const PointSet points = read_points_csv_file(disp_input);
      const Geometry mode = geometry_from(disp_mode);
      DispersionResult res =
          disp_method == "grid"
              ? grid_dispersion(points, mode, disp_resolution, r.solver_options())
              : (mode == Geometry::cube ? exact_dispersion_cube(points, r.solver_options())
                                        : exact_dispersion_torus(points, r.solver_options()));
      if (mode == Geometry::torus && points.empty() && res.note) r.err() << "warning: " << *res.note << "\n";
      json j = to_json(res);
      j["n"] = points.size();
      r.emit(j);
      r.err() << "disp: " << summary_number(res.value) << " (" << disp_mode << ", " << disp_method
              << ", n=" << points.size() << ", d=" << points.dim() << ")\n";
    } else if (cover->parsed()) {
      const AnyBox box = box_from_json(read_json_file(cover_box));
      if (cover_periodic && !std::holds_alternative<TorusBox>(box)) {
        throw std::invalid_argument("--periodic given but the box JSON is not periodic");
      }
      const Construction c = construction_from_string(cover_construction);
      CoverResult res;
      if (c == Construction::netgen) {
        res = netgen_cover(box, cover_eps);
      } else {
        if (!std::holds_alternative<AxisBox>(box)) {
          throw std::invalid_argument(std::string(to_string(c)) + " covers cube boxes only");
        }
        res = c == Construction::netd ? netd_cover(std::get<AxisBox>(box), cover_eps)
                                      : dinet_cover(std::get<AxisBox>(box), cover_eps);
      }
      r.emit(to_json(res));
      r.err() << "net cover: " << cover_construction << " ratio " << summary_number(res.ratio) << "\n";
    } else if (enumerate->parsed()) {
      const auto params = netgen_params(enum_m, enum_eps, enum_periodic);
      auto& os = r.stream();
      const auto count = netgen_enumerate(params, enum_cap, [&](const AnyBox& b) { os << to_json(b).dump() << "\n"; });
      r.err() << "net enumerate: " << count << " elements\n";
    } else if (nbound->parsed()) {
      json j{{"construction", nbound_construction}, {"d", nbound_d}, {"eps", nbound_eps}};
      try {
        CardinalityBound b;
        const Construction c = construction_from_string(nbound_construction);
        if (c == Construction::netgen) b = netgen_cardinality_bound(nbound_d, nbound_eps);
        else if (c == Construction::netd) b = netd_cardinality_bound(nbound_d, nbound_eps, nbound_C);
        else b = dinet_cardinality_bound(nbound_d, nbound_eps);
        const json bj = to_json(b);
        for (const auto& [k, v] : bj.items()) j[k] = v;
        j["regime_ok"] = true;
      } catch (const RegimeError& e) {
        j["regime_ok"] = false;
        j["error"] = e.what();
        r.emit(j);
        r.err() << "error: " << e.what() << "\n";
        return 1;
      }
      r.emit(j);
      r.err() << "net bound: log " << summary_number(j["log_bound"].get<double>()) << "\n";
    } else if (table->parsed()) {
      const auto grid = parse_eps_grid(t_grid);
      json rows = json::array();
      for (const auto& row : regime_table(t_d, grid, b_C, b_c, geometry_from(b_mode))) {
        json j{{"eps", row.eps},
               {"regime", row.upper.regime},
               {"formula", row.upper.formula},
               {"admitted_by", row.upper.admitted_by.value_or("")},
               {"log_upper", row.upper.log_value},
               {"upper", row.upper.value ? json(*row.upper.value) : json(nullptr)}};
        for (const char* name : {"trivial", "AHR", "torus", "random-method"}) j[name] = nullptr;
        for (const auto& lb : row.lower) j[lb.formula] = *lb.value;
        j["sosnovec"] = row.sosnovec ? json(row.sosnovec->value) : json(nullptr);
        rows.push_back(j);
      }
      r.emit(rows, "csv");
      r.err() << "bounds regime-table: " << rows.size() << " rows\n";
    } else if (bounds->parsed()) {
      if (!b_eps_opt->count() || !b_d_opt->count()) throw std::invalid_argument("bounds needs --eps and --d");
      const Geometry mode = geometry_from(b_mode);
      json j{{"eps", b_eps}, {"d", b_d}, {"mode", b_mode}};
      if (b_eps <= 0.5) {
        j["upper"] = to_json(regime_upper_N(b_eps, b_d, b_C, mode));
        json branches = json::array();
        for (const auto& br : upper_N_branches(b_eps, b_d, b_C, mode)) {
          json bj = to_json(br.report);
          bj["applicable"] = br.applicable;
          branches.push_back(bj);
        }
        j["branches"] = branches;
      }
      if (b_eps > 0.25 && mode == Geometry::cube) j["sosnovec"] = to_json(sosnovec_large_eps(b_eps));
      json lower = json::array();
      std::optional<std::uint64_t> n;
      if (b_n_opt->count()) n = b_n;
      for (const auto& lb : lower_bounds(b_eps, b_d, n, b_c)) lower.push_back(to_json(lb));
      j["lower"] = lower;
      json comparison = json::array();
      for (const auto& cb : comparison_bounds(b_eps, b_d)) comparison.push_back(to_json(cb));
      j["comparison"] = comparison;
      if (n) j["upper_disp"] = to_json(regime_upper_disp(*n, b_d, b_C, mode));
      r.emit(j);
      r.err() << "bounds: eps=" << summary_number(b_eps) << " d=" << b_d << "\n";
    } else if (sample->parsed()) {
      SampleConfig cfg;
      cfg.n = s_n;
      cfg.d = s_d;
      cfg.seed = r.seed();
      cfg.stream = s_stream;
      cfg.adjusted = s_adjusted;
      if (s_eps_opt->count()) cfg.eps = s_eps;
      const PointSet points = sample_points(cfg);
      if (r.format("csv") == "json") {
        json pts = json::array();
        for (std::size_t i = 0; i < points.size(); ++i) pts.push_back(std::vector<double>(points[i].begin(), points[i].end()));
        r.emit(json{{"n", s_n}, {"d", s_d}, {"seed", cfg.seed}, {"points", pts}});
      } else {
        write_points_csv(r.stream(), points, !s_no_header);
      }
      r.err() << "sample: " << points.size() << " points in d=" << s_d << "\n";
    } else if (v_net->parsed() || v_dinet->parsed() || v_torus->parsed() || v_lemma->parsed()) {
      TrialReport rep;
      const bool zero_tolerance = !v_lemma->parsed();
      if (v_net->parsed()) {
        rep = check_net_property(construction_from_string(vn_construction), vn_dim, vn_eps, vn_periodic,
                                 vn_trials, r.seed(), r.verify_options());
      } else if (v_dinet->parsed()) {
        rep = check_dinet_property(vd_d, vd_eps, vd_trials, r.seed(), r.verify_options());
      } else if (v_torus->parsed()) {
        rep = torus_lower_consistency(vt_d, vt_n, vt_sets, r.seed(), r.verify_options());
      } else {
        rep = monte_carlo_lemma(vl_d, vl_eps, vl_delta, construction_from_string(vl_construction),
                                vl_trials, r.seed(), vl_mult, r.verify_options());
      }
      r.emit(to_json(rep));
      r.err() << "verify " << rep.suite << ": " << rep.failures << "/" << rep.trials << " failures, "
              << (rep.ok ? "ok" : "FAILED") << "\n";
      if (zero_tolerance && !rep.ok) throw SuiteFailed{};
    } else if (v_emp->parsed()) {
      const auto res = empirical_N(ve_eps, ve_d, ve_trials, ve_quantile, r.seed(), r.verify_options());
      json probes = json::array();
      for (const auto& [n, v] : res.probes) probes.push_back({{"n", n}, {"dispersion", v}});
      r.emit(json{{"eps", ve_eps},
                  {"d", ve_d},
                  {"upper_estimate", res.n},
                  {"dispersion", res.dispersion},
                  {"trials_per_n", ve_trials},
                  {"quantile", ve_quantile},
                  {"seed", r.seed()},
                  {"probes", probes}});
      r.err() << "verify empirical-n: N(" << summary_number(ve_eps) << "," << ve_d << ") <= " << res.n
              << " (upper estimate)\n";
    }
  } catch (const SuiteFailed&) {
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"dispersion"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dispersion::cli
