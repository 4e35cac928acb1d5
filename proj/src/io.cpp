#include "dispersion/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dispersion {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& x) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw std::runtime_error(std::string("box JSON needs an array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw std::runtime_error(std::string("box JSON \"") + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

struct Columns {
  std::vector<std::string> order;
  std::set<std::string> seen;
};

void flatten(const json& j, const std::string& prefix, std::map<std::string, std::string>& row,
             Columns& order) {
  auto emit = [&](const std::string& key, std::string value) {
    if (order.seen.insert(key).second) order.order.push_back(key);
    row[key] = std::move(value);
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), row, order);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], prefix + "." + std::to_string(i), row, order);
    }
  } else if (j.is_number_float()) {
    emit(prefix, format_double(j.get<double>()));
  } else if (j.is_string()) {
    emit(prefix, j.get<std::string>());
  } else if (j.is_null()) {
    emit(prefix, "");
  } else {
    emit(prefix, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

PointSet read_points_csv(std::istream& in) {
  std::optional<PointSet> points;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split(t);
    std::vector<double> p(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = parse_double(fields[i], p[i]);
    if (!numeric) {
      double dummy;
      if (!seen_data && !parse_double(fields[0], dummy)) {
        seen_data = true;  // header
        continue;
      }
      throw std::runtime_error("malformed CSV at line " + std::to_string(lineno) + ": " + t);
    }
    seen_data = true;
    if (!points) points.emplace(p.size());
    if (p.size() != points->dim()) {
      throw std::runtime_error("line " + std::to_string(lineno) + " has " + std::to_string(p.size()) +
                               " coordinates, expected " + std::to_string(points->dim()));
    }
    try {
      points->add(p);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!points) throw std::runtime_error("CSV holds no points; the dimension cannot be inferred");
  return *points;
}

PointSet read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const PointSet& points, bool header) {
  if (header) {
    for (std::size_t i = 0; i < points.dim(); ++i) out << (i ? "," : "") << "x" << i + 1;
    out << "\n";
  }
  for (std::size_t r = 0; r < points.size(); ++r) {
    const auto p = points[r];
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
    out << "\n";
  }
}

json to_json(const AxisBox& box) {
  return json{{"dim", box.dim()}, {"lo", box.lo()}, {"hi", box.hi()}};
}

json to_json(const TorusBox& box) {
  return json{{"dim", box.dim()}, {"a", box.a()}, {"b", box.b()}, {"periodic", true}};
}

json to_json(const AnyBox& box) {
  return std::visit([](const auto& b) { return to_json(b); }, box);
}

AnyBox box_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("box JSON must be an object");
  const bool periodic = j.value("periodic", false) || (j.contains("a") && !j.contains("lo"));
  const auto lo = numbers(j, periodic ? "a" : "lo");
  const auto hi = numbers(j, periodic ? "b" : "hi");
  if (lo.size() != hi.size()) throw std::runtime_error("box JSON endpoint arrays differ in length");
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != lo.size()) {
    throw std::runtime_error("box JSON \"dim\" disagrees with its endpoints");
  }
  try {
    if (periodic) return TorusBox(lo, hi);
    return AxisBox(lo, hi);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid box: ") + e.what());
  }
}

json to_json(const DispersionResult& r) {
  json j{{"value", r.value},
         {"witness", to_json(r.witness)},
         {"mode", to_string(r.mode)},
         {"method", to_string(r.method)},
         {"d", dim(r.witness)}};
  put_optional(j, "note", r.note);
  return j;
}

json to_json(const CoverResult& c) {
  json axes = json::array();
  for (const auto& a : c.family.axes) {
    axes.push_back({{"block", a.block}, {"inner_block", a.inner_block}, {"lo_index", a.lo_index},
                    {"hi_index", a.hi_index}});
  }
  return json{{"construction", to_string(c.family.construction)},
              {"element", to_json(c.element)},
              {"ratio", c.ratio},
              {"family", {{"axes", axes}}}};
}

json to_json(const CardinalityBound& b) {
  json j{{"log_bound", b.log_bound}, {"general_log", b.general_log}};
  j["bound_if_finite"] = b.value ? json(*b.value) : json(nullptr);
  put_optional(j, "refined_log", b.refined_log);
  put_optional(j, "headline_log", b.headline_log);
  return j;
}

json to_json(const BoundReport& r) {
  json j{{"formula", r.formula}, {"regime", r.regime}, {"log_value", r.log_value}, {"d", r.d}};
  j["value"] = r.value ? json(*r.value) : json(nullptr);
  if (r.C != 0.0) j["C"] = r.C;
  put_optional(j, "eps", r.eps);
  put_optional(j, "n", r.n);
  put_optional(j, "admitted_by", r.admitted_by);
  put_optional(j, "note", r.note);
  return j;
}

json to_json(const LemmaCount& c) {
  return json{{"bound", c.bound}, {"points", c.points}, {"success_floor", c.success_floor}};
}

json to_json(const SosnovecBound& b) {
  json j{{"value", b.value}};
  put_optional(j, "known_value", b.known_value);
  return j;
}

std::string json_to_csv(const json& j) {
  std::vector<std::map<std::string, std::string>> rows;
  Columns columns;
  auto add = [&](const json& item) {
    rows.emplace_back();
    if (item.is_object()) flatten(item, "", rows.back(), columns);
    else flatten(item, "value", rows.back(), columns);
  };
  if (j.is_array()) {
    for (const auto& item : j) add(item);
  } else {
    add(j);
  }
  const auto& order = columns.order;
  std::ostringstream out;
  for (std::size_t i = 0; i < order.size(); ++i) out << (i ? "," : "") << csv_field(order[i]);
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto it = row.find(order[i]);
      out << (i ? "," : "") << (it == row.end() ? "" : csv_field(it->second));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dispersion
