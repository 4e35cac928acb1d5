#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dispersion/bounds.hpp"
#include "dispersion/geometry.hpp"
#include "dispersion/nets.hpp"
#include "dispersion/solver.hpp"

namespace dispersion {

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// One point per line, comma separated. Blank lines and lines starting with
// '#' are skipped, as is a header line starting with a non-numeric field.
// Throws std::runtime_error naming the line on malformed input.
PointSet read_points_csv(std::istream& in);
PointSet read_points_csv_file(const std::string& path);
void write_points_csv(std::ostream& out, const PointSet& points, bool header = true);

nlohmann::ordered_json to_json(const AxisBox& box);
nlohmann::ordered_json to_json(const TorusBox& box);
nlohmann::ordered_json to_json(const AnyBox& box);
// Accepts {"lo","hi"} for cube boxes and {"a","b","periodic":true} for torus
// boxes; "dim" is checked when present.
AnyBox box_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const DispersionResult& result);
nlohmann::ordered_json to_json(const CoverResult& cover);
nlohmann::ordered_json to_json(const CardinalityBound& bound);
nlohmann::ordered_json to_json(const BoundReport& report);
nlohmann::ordered_json to_json(const LemmaCount& count);
nlohmann::ordered_json to_json(const SosnovecBound& bound);

// Flattens JSON into CSV: an array of objects becomes one row each, a single
// object one row. Nested keys are joined with '.', array elements by index.
std::string json_to_csv(const nlohmann::ordered_json& j);

}  // namespace dispersion
